#pragma once

#include "bgkit/action.hpp"
#include "bgkit/curvature.hpp"
#include "bgkit/measure.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bgkit {

enum class PackMode { greedy, exact };
std::string to_string(PackMode m);

struct PackingOptions {
  PackMode mode = PackMode::exact;
  std::size_t exact_cap = 60;            // candidates allowed in exact mode
  std::uint64_t node_budget = 50'000'000;  // branch-and-bound nodes before giving up
};

struct PackingResult {
  std::size_t count = 0;
  std::vector<Point> centers;
  PackMode method = PackMode::exact;
  std::size_t candidates = 0;
};

// Balls B(c, r) lie in B(x, R) when d(x, c) <= R - r; open balls of radius r
// are disjoint when their centers are >= 2r apart.
PackingResult pack_candidates(const Space& space, std::vector<Point> candidates, const Length& r,
                              const PackingOptions& opt);
PackingResult packing_count(const Space& space, const Point& x, const Length& r, const Length& R,
                            const PackingOptions& opt = {});
PackingResult gamma_packing_count(const GroupAction& action, const Point& x, const Length& r, const Length& R,
                                  const PackingOptions& opt = {});

// Max clique over an adjacency matrix given as bitsets; returns the vertex list.
std::vector<std::size_t> maximum_clique(const std::vector<std::vector<std::uint64_t>>& adj, std::size_t n,
                                        std::uint64_t node_budget);

struct PackingConditionRow {
  Point center;
  PackingResult packing;
  Status status = Status::verified;  // inconclusive when greedy stays within N0
};

struct PackingConditionReport {
  Length r0;
  std::int64_t N0 = 0;
  std::vector<PackingConditionRow> rows;
  Status status = Status::verified;
};

// Pack(x, r0/2, 11 r0) <= N0 for each sampled center.
PackingConditionReport packing_condition(const Space& space, const std::vector<Point>& centers, const Length& r0,
                                         std::int64_t N0, const PackingOptions& opt = {});

struct SandwichInequality {
  std::string name;
  Rational lhs, rhs;
  bool holds = true;
};

struct SandwichReport {
  Length r, R;
  Rational orbit_lower;    // μ_x^Γ(B̄(x, R-r)) / μ_x^Γ(B(x, 2r))
  std::size_t pack_gamma = 0;
  Rational measure_upper;  // μ(B(x, R)) / μ(B(x, r))
  std::size_t pack = 0;
  Rational sup_ratio;      // max over the y-sample of μ(B(y, 2R)) / μ(B(y, r))
  std::optional<Length> codiameter;
  std::optional<std::size_t> pack_gamma_shrunk;  // Pack_Γ(x, r - D, R) when D < r
  std::vector<SandwichInequality> inequalities;
  bool holds = true;
};

// The y-sample should cover a fundamental domain; packing centers are added to it.
SandwichReport sandwich_check(const GroupAction& action, const Measure& mu, const Point& x, const Length& r,
                              const Length& R, const std::vector<Point>& y_sample,
                              std::optional<Length> codiameter = {}, const PackingOptions& opt = {});

}  // namespace bgkit
