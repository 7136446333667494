#include "bgkit/action.hpp"

#include "bgkit/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace bgkit {

namespace {

bool element_less(const GroupElement& a, const GroupElement& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

void GroupAction::sort_orbit(std::vector<OrbitEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const OrbitEntry& a, const OrbitEntry& b) {
    if (a.displacement != b.displacement) return a.displacement < b.displacement;
    return element_less(a.element, b.element);
  });
}

std::vector<OrbitEntry> GroupAction::orbit_within(const Point& x, const Length& R) const {
  return breadth_first_orbit(x, R);
}

std::vector<OrbitEntry> GroupAction::breadth_first_orbit(const Point& x, const Length& R) const {
  space_->require(x);
  const Length limit = R + exploration_slack(x);
  const auto steps = group_->symmetric_generators();
  std::unordered_set<GroupElement, ElementHash> seen{group_->identity()};
  std::vector<GroupElement> queue{group_->identity()};
  std::vector<OrbitEntry> out;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const GroupElement g = queue[head];
    Point gx = apply(g, x);
    Length d = space_->distance(x, gx);
    if (d > limit) continue;
    if (d <= R) out.push_back({g, gx, d});
    for (const auto& s : steps) {
      auto next = group_->multiply(g, s);
      if (seen.insert(next).second) {
        if (queue.size() >= exploration_cap)
          throw WindowError("orbit exploration exceeded " + std::to_string(exploration_cap) +
                            " elements at radius " + to_string(R) + "; the action may not be proper");
        queue.push_back(std::move(next));
      }
    }
  }
  sort_orbit(out);
  return out;
}

std::vector<GroupElement> word_ball(const Group& g, std::int64_t n) {
  const auto steps = g.symmetric_generators();
  std::unordered_set<GroupElement, ElementHash> seen{g.identity()};
  std::vector<std::pair<GroupElement, std::int64_t>> queue{{g.identity(), 0}};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [e, d] = queue[head];
    if (d == n) continue;
    for (const auto& s : steps) {
      auto next = g.multiply(e, s);
      if (seen.insert(next).second) queue.push_back({std::move(next), d + 1});
    }
  }
  std::vector<GroupElement> out;
  for (auto& [e, d] : queue) out.push_back(std::move(e));
  std::sort(out.begin(), out.end(), element_less);
  return out;
}

// ---------------------------------------------------------------- left translation

LeftTranslationAction::LeftTranslationAction(std::shared_ptr<const CayleySpace> space)
    : GroupAction(space->group(), space) {}

Point LeftTranslationAction::apply(const GroupElement& g, const Point& p) const {
  space_->require(p);
  return WordPoint{group_->multiply(g, std::get<WordPoint>(p).word)};
}

std::vector<OrbitEntry> LeftTranslationAction::orbit_within(const Point& x, const Length& R) const {
  // d(x, γx) = |x⁻¹γx|, so the orbit window is the conjugate of a word ball.
  space_->require(x);
  std::vector<OrbitEntry> out;
  if (R < 0) return out;
  const auto& xe = std::get<WordPoint>(x).word;
  const auto xinv = group_->inverse(xe);
  for (const auto& delta : word_ball(*group_, floor_of(R).convert_to<std::int64_t>())) {
    auto gamma = group_->multiply(group_->multiply(xe, delta), xinv);
    out.push_back({gamma, WordPoint{group_->multiply(xe, delta)}, Length(group_->word_length(delta))});
  }
  sort_orbit(out);
  return out;
}

// ---------------------------------------------------------------- lattice translation

LatticeTranslationAction::LatticeTranslationAction(int rank, std::int64_t scale, SpacePtr space)
    : GroupAction(std::make_shared<FreeAbelianGroup>(rank), std::move(space)), scale_(scale) {
  if (scale_ < 1) throw std::invalid_argument("lattice translation scale must be positive");
  if (auto c = dynamic_cast<const CayleySpace*>(space_.get())) {
    auto fa = dynamic_cast<const FreeAbelianGroup*>(c->group().get());
    if (!fa || fa->rank() != rank)
      throw std::invalid_argument("lattice translation needs the Cayley graph of Z^" + std::to_string(rank));
  } else if (dynamic_cast<const GluedLineSpace*>(space_.get())) {
    if (rank != 1) throw std::invalid_argument("glued-line translations form a rank-1 lattice");
  } else {
    throw std::invalid_argument("lattice translation acts on Z^k Cayley graphs or glued lines");
  }
}

Point LatticeTranslationAction::apply(const GroupElement& g, const Point& p) const {
  space_->require(p);
  if (auto gl = dynamic_cast<const GluedLineSpace*>(space_.get())) return gl->translate(p, scale_ * g.at(0));
  auto v = std::get<WordPoint>(p).word;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += scale_ * g.at(i);
  return WordPoint{v};
}

bool LatticeTranslationAction::regular_on_support() const {
  return scale_ == 1 && dynamic_cast<const CayleySpace*>(space_.get()) != nullptr;
}

// ---------------------------------------------------------------- permutations

PermutationAction::PermutationAction(std::shared_ptr<const PermutationGroup> group, SpacePtr space)
    : GroupAction(group, std::move(space)) {
  if (!space_->is_finite()) throw std::invalid_argument("permutation actions need a finite space");
  auto n = static_cast<std::int64_t>(space_->support().size());
  if (group->degree() != n)
    throw std::invalid_argument("permutation degree " + std::to_string(group->degree()) + " != support size " +
                                std::to_string(n));
}

Point PermutationAction::apply(const GroupElement& g, const Point& p) const {
  space_->require(p);
  auto v = std::get_if<VertexPoint>(&p);
  if (!v) throw std::domain_error("permutation actions move vertices only");
  return VertexPoint{g.at(static_cast<std::size_t>(v->index))};
}

std::vector<OrbitEntry> PermutationAction::orbit_within(const Point& x, const Length& R) const {
  space_->require(x);
  std::vector<OrbitEntry> out;
  for (const auto& g : static_cast<const PermutationGroup&>(*group_).elements()) {
    Point gx = apply(g, x);
    Length d = space_->distance(x, gx);
    if (d <= R) out.push_back({g, gx, d});
  }
  sort_orbit(out);
  return out;
}

// ---------------------------------------------------------------- checks

std::vector<IsometryDefect> validate_isometry(const GroupAction& action, const std::vector<Point>& points,
                                              const std::vector<GroupElement>& elements) {
  std::vector<IsometryDefect> out;
  for (const auto& g : elements)
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        const auto& sp = action.space();
        if (sp.distance(action.apply(g, points[i]), action.apply(g, points[j])) != sp.distance(points[i], points[j]))
          out.push_back({points[i], points[j], g});
      }
  return out;
}

Length codiameter(const GroupAction& action, const Point& x, const std::vector<Point>& sample) {
  Length worst = 0;
  for (const auto& y : sample) {
    Length dxy = action.space().distance(x, y);
    Length best = dxy;
    for (const auto& e : action.orbit_within(x, dxy * 2)) best = std::min(best, action.space().distance(y, e.point));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace bgkit
