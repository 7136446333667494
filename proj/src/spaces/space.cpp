#include "bgkit/errors.hpp"
#include "bgkit/space.hpp"

#include <algorithm>
#include <stdexcept>

namespace bgkit {

std::vector<Point> Space::support() const {
  throw std::domain_error(kind() + " space has no finite support; enumerate a ball instead");
}

void Space::require(const Point& p) const {
  if (!contains(p)) throw std::domain_error("point " + to_string(p) + " is not in the " + kind() + " space");
}

void Space::require_window(const Point& center, const Length& r, bool closed) const {
  auto safe = safe_radius(center);
  if (!safe) return;
  if (r > *safe || (closed && r == *safe))
    throw WindowError("window exceeded: radius " + to_string(r) + " around " + to_string(center) +
                      " needs support beyond the safe radius " + to_string(*safe));
}

void sort_ball(std::vector<BallEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const BallEntry& a, const BallEntry& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.point < b.point;
  });
}

}  // namespace bgkit
