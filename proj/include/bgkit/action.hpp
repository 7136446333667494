#pragma once

#include "bgkit/group.hpp"
#include "bgkit/space.hpp"

#include <memory>
#include <string>
#include <vector>

namespace bgkit {

struct OrbitEntry {
  GroupElement element;
  Point point;          // element · x
  Length displacement;  // d(x, element · x)
};

// A group acting by isometries on a space.
class GroupAction {
 public:
  GroupAction(GroupPtr group, SpacePtr space) : group_(std::move(group)), space_(std::move(space)) {}
  virtual ~GroupAction() = default;

  virtual std::string rule() const = 0;
  virtual Point apply(const GroupElement& g, const Point& p) const = 0;
  // Breadth-first exploration prunes elements displacing x by more than
  // R + slack; every element with displacement <= R stays reachable.
  virtual Length exploration_slack(const Point&) const { return 0; }
  // Free and transitive on the support, so orbit counting equals vertex counting.
  virtual bool regular_on_support() const { return false; }
  // All γ with d(x, γx) <= R, sorted by displacement then element.
  virtual std::vector<OrbitEntry> orbit_within(const Point& x, const Length& R) const;

  const Group& group() const { return *group_; }
  const Space& space() const { return *space_; }
  const GroupPtr& group_ptr() const { return group_; }
  const SpacePtr& space_ptr() const { return space_; }

  // Upper bound on elements visited by one breadth-first closure.
  std::size_t exploration_cap = 4'000'000;

 protected:
  std::vector<OrbitEntry> breadth_first_orbit(const Point& x, const Length& R) const;
  static void sort_orbit(std::vector<OrbitEntry>& entries);

  GroupPtr group_;
  SpacePtr space_;
};

using ActionPtr = std::shared_ptr<const GroupAction>;

// γ·g = γg on the group's own Cayley graph.
class LeftTranslationAction final : public GroupAction {
 public:
  explicit LeftTranslationAction(std::shared_ptr<const CayleySpace> space);
  std::string rule() const override { return "left_translation"; }
  Point apply(const GroupElement& g, const Point& p) const override;
  bool regular_on_support() const override { return true; }
  std::vector<OrbitEntry> orbit_within(const Point& x, const Length& R) const override;
};

// Z^k acting by translation through scale·γ, on the Cayley graph of Z^k or
// (k = 1) on a glued line, shifting by scale hairs.
class LatticeTranslationAction final : public GroupAction {
 public:
  LatticeTranslationAction(int rank, std::int64_t scale, SpacePtr space);
  std::int64_t scale() const { return scale_; }
  std::string rule() const override { return "lattice_translation"; }
  Point apply(const GroupElement& g, const Point& p) const override;
  bool regular_on_support() const override;

 private:
  std::int64_t scale_;
};

// A finite permutation group acting on the vertices of a finite space.
class PermutationAction final : public GroupAction {
 public:
  PermutationAction(std::shared_ptr<const PermutationGroup> group, SpacePtr space);
  std::string rule() const override { return "permutation"; }
  Point apply(const GroupElement& g, const Point& p) const override;
  std::vector<OrbitEntry> orbit_within(const Point& x, const Length& R) const override;
};

// Pairs (p, q, γ) where d(γp, γq) != d(p, q); empty for an isometric action.
struct IsometryDefect {
  Point p, q;
  GroupElement element;
};
std::vector<IsometryDefect> validate_isometry(const GroupAction& action, const std::vector<Point>& points,
                                              const std::vector<GroupElement>& elements);

// max over y in the sample of min_γ d(y, γx).
Length codiameter(const GroupAction& action, const Point& x, const std::vector<Point>& sample);

// Elements of the group's closed word ball of radius n (breadth-first, sorted).
std::vector<GroupElement> word_ball(const Group& g, std::int64_t n);

}  // namespace bgkit
