#pragma once

#include "bgkit/curvature.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bgkit {

// Legs of the tripod with the same side lengths as the triangle (x, y, z).
struct TripodDecomposition {
  Length alpha, beta, gamma;
};
TripodDecomposition gromov_tripod(const Space& space, const Point& x, const Point& y, const Point& z);

struct SampleSpec {
  bool exhaustive = true;
  std::size_t count = 1000;
  std::uint64_t seed = 1;
};

struct HyperbolicityReport {
  Length delta;
  std::string method;  // four_point_exhaustive, four_point_sampled, thin_triangle
  std::vector<Point> witness;
  std::size_t evaluated = 0;
  std::uint64_t seed = 0;
  // thin_triangle: branch (0, 1, 2 for the legs at x, y, z) and parameter.
  std::optional<int> branch;
  std::optional<Length> t;
};

inline constexpr std::size_t kFourPointCap = 150;

// max over quadruples of (L1 - L2)/2 for the sorted pairing sums L1 >= L2 >= L3.
HyperbolicityReport four_point_delta(const Space& space, const std::vector<Point>& points, const SampleSpec& spec,
                                     std::size_t cap = kFourPointCap);

// Largest fiber diameter of the tripod map over vertex triangles, with sides
// materialized as lexicographically smallest geodesics.
HyperbolicityReport thin_triangle_delta(const WeightedGraph& graph, const SampleSpec& spec);
// Fiber diameter of one triangle.
HyperbolicityReport triangle_thinness(const WeightedGraph& graph, std::int64_t x, std::int64_t y, std::int64_t z);

struct ConvexityReport {
  Length defect;  // clamped at 0
  std::vector<std::int64_t> witness;  // origin, y1, y2
  Length t;
  std::size_t evaluated = 0;
};

// max of d(c0(t), c1(t)) - t d(y1, y2) over t = k/grid and geodesics c0, c1
// from a common origin.
ConvexityReport convexity_defect(const WeightedGraph& graph, const SampleSpec& spec, int grid);

struct CocompactRow {
  Length r, R;
  std::string bound;  // "i", "ii_doubling", "ii_ratio"
  Rational ratio;
  double value = 0;
  Status status = Status::verified;
  double slack = 0;  // ratio / bound
};

struct CocompactReport {
  std::vector<CocompactRow> rows;
  std::vector<std::string> skipped;
  Status status = Status::verified;
  Length scale_i, scale_ii;
};

// Bound (i) applies to any invariant measure; the (ii) bounds to the orbit
// counting measure only, selected by `counting`.
CocompactReport cocompact_bg_check(const Measure& mu, const Point& x, bool counting, double delta, double D,
                                   double K, const std::vector<std::pair<Length, Length>>& pairs,
                                   bool closed = false);

double cocompact_bound_i(double r, double R, double D, double K);
double cocompact_bound_ii_doubling(double r, double K);
double cocompact_bound_ii_ratio(double r, double R, double K);

}  // namespace bgkit
