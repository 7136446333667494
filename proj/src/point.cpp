#include "bgkit/point.hpp"

namespace bgkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string word_string(const std::vector<std::int64_t>& w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(w[i]);
  }
  return s + "]";
}

}  // namespace

std::string to_string(const Point& p) {
  return std::visit(overloaded{
                        [](const VertexPoint& v) { return "v" + std::to_string(v.index); },
                        [](const EdgePoint& e) { return "e" + std::to_string(e.edge) + "@" + to_string(e.offset); },
                        [](const WordPoint& w) { return "w" + word_string(w.word); },
                        [](const BranchPoint& b) { return "b" + std::to_string(b.branch) + "@" + to_string(b.offset); },
                        [](const LinePoint& l) { return "l" + to_string(l.position); },
                    },
                    p);
}

std::size_t PointHash::operator()(const Point& p) const {
  std::size_t h = std::hash<std::size_t>{}(p.index());
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  std::visit(overloaded{
                 [&](const VertexPoint& v) { mix(std::hash<std::int64_t>{}(v.index)); },
                 [&](const EdgePoint& e) {
                   mix(std::hash<std::int64_t>{}(e.edge));
                   mix(std::hash<std::string>{}(to_string(e.offset)));
                 },
                 [&](const WordPoint& w) {
                   for (auto x : w.word) mix(std::hash<std::int64_t>{}(x));
                 },
                 [&](const BranchPoint& b) {
                   mix(std::hash<std::int64_t>{}(b.branch));
                   mix(std::hash<std::string>{}(to_string(b.offset)));
                 },
                 [&](const LinePoint& l) { mix(std::hash<std::string>{}(to_string(l.position))); },
             },
             p);
  return h;
}

}  // namespace bgkit
