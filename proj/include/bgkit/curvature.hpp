#pragma once

#include "bgkit/measure.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bgkit {

enum class Status { verified, violated, inconclusive };
std::string to_string(Status s);
// violated dominates inconclusive dominates verified.
Status combine(Status a, Status b);

// Relative safety margin for float-vs-exact comparisons.
inline constexpr double kMargin = 1e-9;
// verified when lhs <= rhs(1 - margin), violated when lhs > rhs(1 + margin).
Status compare_with_margin(const Rational& lhs, double log_rhs);

struct BGParams {
  Length r0;
  double C = 2;
  double K = 0;
  void check() const;
};

struct SyntheticParams {
  double N = 1;
  double K = 1;
  void check() const;
  // N/K as an exact rational (of the two doubles).
  Length threshold() const;
};

struct DoublingParams {
  double C0 = 2;
  Length r0;
};

using CurvatureParams = std::variant<BGParams, SyntheticParams>;

// Exact value of a finite double.
Rational exact_rational(double v);

// One evaluation of μ(B(2r))/μ(B(r)). Point rows sit on a critical radius;
// cell rows cover an open interval between critical radii, where the ratio is
// constant and the right-hand side is bounded below by its left endpoint.
struct RatioRow {
  Point center;
  Length radius;
  Length rhs_radius;
  bool cell = false;
  Mass outer, inner;  // μ(B(2r)), μ(B(r))
  Rational ratio;
};

// All rows for one center over [lo, hi].
std::vector<RatioRow> scan_ratios(const Measure& mu, const Point& x, const Length& lo, const Length& hi,
                                  bool closed = false);

struct Witness {
  Point center;
  Length radius;
  Mass outer, inner;
  Rational lhs;
  double rhs = 0;
};

struct Certificate {
  CurvatureParams params;
  std::vector<Point> centers;
  bool all_centers = false;
  Length r_min, r_max;
  Status status = Status::verified;
  std::optional<Witness> witness;
  std::size_t critical_radii_checked = 0;
  double worst_ratio = 0;  // max lhs/rhs over all rows
  std::vector<RatioRow> rows;
};

// Ratio bound as a function of r: C e^{Kr} or 2^N e^{Kr}, returned as a log.
double log_rhs(const CurvatureParams& p, const Length& r);

Certificate check_bg_synthetic(const Measure& mu, const Point& x, const SyntheticParams& p, const Length& r_max,
                               bool closed = false);
Certificate check_weak_bg(const Measure& mu, const std::vector<Point>& centers, const BGParams& p,
                          const Length& r_max, bool closed = false, bool all_centers = false);

double min_exponent(const Measure& mu, const Point& x, const Length& r0, double C, const Length& r_max,
                    bool closed = false);

SyntheticParams weak_to_synthetic(const BGParams& p);
BGParams synthetic_to_weak(const SyntheticParams& p);

double classic_ratio_bound(const Length& r, const Length& R, const CurvatureParams& p);

struct ClassicRow {
  Length r, R;
  Rational ratio;
  double bound = 0;
  Status status = Status::verified;
};

struct ClassicReport {
  std::vector<ClassicRow> rows;
  Status status = Status::verified;
  double worst_slack = 0;  // max ratio/bound
};

// Needs a verified certificate for the same params covering the largest R.
ClassicReport check_classic_bound(const Measure& mu, const Point& x, const Certificate& certificate,
                                  const std::vector<std::pair<Length, Length>>& pairs, bool closed = false);

struct DoublingResult {
  Rational C0;
  Length radius;  // where the supremum is attained
  std::size_t critical_radii_checked = 0;
};
DoublingResult doubling_constant(const Measure& mu, const Point& x, const Length& r0, bool closed = false);

double doubling_to_bg_bound(const DoublingParams& dp, const Length& r);

BGParams diameter_shift(const BGParams& p, const Length& D);

}  // namespace bgkit
