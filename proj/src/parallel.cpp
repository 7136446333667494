#include "bgkit/parallel.hpp"

namespace bgkit {

namespace {
std::atomic<std::size_t> g_threads{1};
}

std::size_t thread_count() { return g_threads.load(); }

void set_thread_count(std::size_t n) { g_threads = n == 0 ? std::max<std::size_t>(1, std::thread::hardware_concurrency()) : n; }

}  // namespace bgkit
