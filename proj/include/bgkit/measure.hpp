#pragma once

#include "bgkit/action.hpp"
#include "bgkit/space.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bgkit {

struct RadialShell {
  Length distance;
  Mass mass;  // total mass at exactly this distance, > 0
};

// The measure seen from a center: positive shells sorted by distance,
// exhaustive for the closed ball of radius `radius`.
class RadialProfile {
 public:
  RadialProfile(Point center, Length radius, std::vector<RadialShell> shells);

  const Point& center() const { return center_; }
  const Length& radius() const { return radius_; }
  const std::vector<RadialShell>& shells() const { return shells_; }
  // μ(B(center, r)) or μ(B̄(center, r)); throws WindowError past the profile radius.
  Mass mass(const Length& r, bool closed) const;

 private:
  Point center_;
  Length radius_;
  std::vector<RadialShell> shells_;
  std::vector<Mass> prefix_;  // prefix_[i] = mass of shells [0, i)
};

class Measure {
 public:
  virtual ~Measure() = default;
  virtual std::string kind() const = 0;
  virtual const Space& space() const = 0;
  virtual RadialProfile profile(const Point& center, const Length& R) const = 0;
  virtual std::optional<Length> safe_radius(const Point&) const { return std::nullopt; }

  Mass ball_mass(const Point& center, const Length& r, bool closed) const;
};

using MeasurePtr = std::shared_ptr<const Measure>;

// Finitely many weighted atoms.
class AtomicMeasure final : public Measure {
 public:
  AtomicMeasure(SpacePtr space, std::vector<std::pair<Point, Mass>> atoms);
  std::string kind() const override { return "atomic"; }
  const Space& space() const override { return *space_; }
  RadialProfile profile(const Point& center, const Length& R) const override;

 private:
  SpacePtr space_;
  std::vector<std::pair<Point, Mass>> atoms_;
};

// Unit mass on every support point of the space.
class VertexUniformMeasure final : public Measure {
 public:
  explicit VertexUniformMeasure(SpacePtr space) : space_(std::move(space)) {}
  std::string kind() const override { return "vertex_uniform"; }
  const Space& space() const override { return *space_; }
  RadialProfile profile(const Point& center, const Length& R) const override;
  std::optional<Length> safe_radius(const Point& center) const override { return space_->safe_radius(center); }

 private:
  SpacePtr space_;
};

// μ_x^Γ = Σ_γ δ_{γx}, counted with multiplicity.
class CountingOrbitMeasure final : public Measure {
 public:
  CountingOrbitMeasure(ActionPtr action, Point basepoint);
  std::string kind() const override { return "counting_orbit"; }
  const Space& space() const override { return action_->space(); }
  const GroupAction& action() const { return *action_; }
  const Point& basepoint() const { return x_; }
  RadialProfile profile(const Point& center, const Length& R) const override;

 private:
  ActionPtr action_;
  Point x_;
};

MeasurePtr counting_measure(ActionPtr action, const Point& x);
MeasurePtr single_atom(SpacePtr space, const Point& x);
// Weights indexed by vertex for finite spaces; missing vertices weigh 0.
MeasurePtr vertex_weights(SpacePtr space, const std::map<std::int64_t, Mass>& weights);

// Aggregate (distance, mass) pairs into sorted positive shells.
std::vector<RadialShell> make_shells(std::vector<RadialShell> raw);

}  // namespace bgkit
