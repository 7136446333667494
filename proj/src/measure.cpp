#include "bgkit/measure.hpp"

#include "bgkit/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace bgkit {

std::vector<RadialShell> make_shells(std::vector<RadialShell> raw) {
  std::sort(raw.begin(), raw.end(), [](const RadialShell& a, const RadialShell& b) { return a.distance < b.distance; });
  std::vector<RadialShell> out;
  for (auto& s : raw) {
    if (s.mass < 0) throw std::domain_error("negative mass");
    if (!out.empty() && out.back().distance == s.distance)
      out.back().mass += s.mass;
    else
      out.push_back(std::move(s));
  }
  std::erase_if(out, [](const RadialShell& s) { return s.mass == 0; });
  return out;
}

RadialProfile::RadialProfile(Point center, Length radius, std::vector<RadialShell> shells)
    : center_(std::move(center)), radius_(std::move(radius)), shells_(std::move(shells)) {
  prefix_.reserve(shells_.size() + 1);
  prefix_.emplace_back(0);
  for (const auto& s : shells_) prefix_.push_back(prefix_.back() + s.mass);
}

Mass RadialProfile::mass(const Length& r, bool closed) const {
  if (r > radius_)
    throw WindowError("ball of radius " + to_string(r) + " exceeds the profile radius " + to_string(radius_));
  auto it = closed ? std::upper_bound(shells_.begin(), shells_.end(), r,
                                      [](const Length& v, const RadialShell& s) { return v < s.distance; })
                   : std::lower_bound(shells_.begin(), shells_.end(), r,
                                      [](const RadialShell& s, const Length& v) { return s.distance < v; });
  return prefix_[static_cast<std::size_t>(it - shells_.begin())];
}

Mass Measure::ball_mass(const Point& center, const Length& r, bool closed) const {
  if (r < 0) throw std::domain_error("negative radius");
  return profile(center, r).mass(r, closed);
}

// ---------------------------------------------------------------- atomic

AtomicMeasure::AtomicMeasure(SpacePtr space, std::vector<std::pair<Point, Mass>> atoms)
    : space_(std::move(space)), atoms_(std::move(atoms)) {
  for (const auto& [p, m] : atoms_) {
    space_->require(p);
    if (m < 0) throw std::domain_error("negative atom mass at " + to_string(p));
  }
}

RadialProfile AtomicMeasure::profile(const Point& center, const Length& R) const {
  space_->require(center);
  std::vector<RadialShell> raw;
  for (const auto& [p, m] : atoms_) {
    Length d = space_->distance(center, p);
    if (d <= R) raw.push_back({d, m});
  }
  return RadialProfile(center, R, make_shells(std::move(raw)));
}

MeasurePtr single_atom(SpacePtr space, const Point& x) {
  return std::make_shared<AtomicMeasure>(std::move(space), std::vector<std::pair<Point, Mass>>{{x, Mass(1)}});
}

MeasurePtr vertex_weights(SpacePtr space, const std::map<std::int64_t, Mass>& weights) {
  std::vector<std::pair<Point, Mass>> atoms;
  for (const auto& [v, m] : weights) atoms.push_back({VertexPoint{v}, m});
  return std::make_shared<AtomicMeasure>(std::move(space), std::move(atoms));
}

// ---------------------------------------------------------------- uniform

namespace {

std::optional<std::vector<RadialShell>> unit_growth_shells(const Space& space, const Point& center, const Length& R) {
  auto limit = floor_of(R).convert_to<long long>();
  if (limit > 100000) return std::nullopt;
  auto spheres = space.unit_sphere_sizes(center, static_cast<int>(limit));
  if (!spheres) return std::nullopt;
  std::vector<RadialShell> raw;
  for (std::size_t n = 0; n < spheres->size(); ++n)
    raw.push_back({Length(static_cast<long long>(n)), Mass((*spheres)[n])});
  return make_shells(std::move(raw));
}

}  // namespace

RadialProfile VertexUniformMeasure::profile(const Point& center, const Length& R) const {
  if (auto shells = unit_growth_shells(*space_, center, R)) return RadialProfile(center, R, std::move(*shells));
  std::vector<RadialShell> raw;
  for (const auto& e : space_->ball(center, R, true)) raw.push_back({e.distance, Mass(1)});
  return RadialProfile(center, R, make_shells(std::move(raw)));
}

// ---------------------------------------------------------------- counting orbit

CountingOrbitMeasure::CountingOrbitMeasure(ActionPtr action, Point basepoint)
    : action_(std::move(action)), x_(std::move(basepoint)) {
  action_->space().require(x_);
}

RadialProfile CountingOrbitMeasure::profile(const Point& center, const Length& R) const {
  const Space& sp = action_->space();
  sp.require(center);
  if (action_->regular_on_support() && std::holds_alternative<WordPoint>(center))
    if (auto shells = unit_growth_shells(sp, center, R)) return RadialProfile(center, R, std::move(*shells));
  // Any γ with d(center, γx) <= R displaces x by at most R + d(x, center).
  Length dx = sp.distance(x_, center);
  std::vector<RadialShell> raw;
  for (const auto& e : action_->orbit_within(x_, R + dx)) {
    Length d = sp.distance(center, e.point);
    if (d <= R) raw.push_back({d, Mass(1)});
  }
  return RadialProfile(center, R, make_shells(std::move(raw)));
}

MeasurePtr counting_measure(ActionPtr action, const Point& x) {
  return std::make_shared<CountingOrbitMeasure>(std::move(action), x);
}

}  // namespace bgkit
