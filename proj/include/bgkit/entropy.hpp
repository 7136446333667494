#pragma once

#include "bgkit/curvature.hpp"

#include <optional>
#include <vector>

namespace bgkit {

struct GrowthSample {
  Length R;
  Mass mass;       // μ(B̄(x, R))
  Mass half_mass;  // μ(B̄(x, R/2))
  double h = 0;    // ln(mass)/R
  // 2h(R) - h(R/2) = (2/R) ln(mass/half_mass): the growth rate over [R/2, R].
  double h_doubling = 0;
};

struct GrowthProfile {
  Point center;
  std::vector<GrowthSample> samples;
};

// Closed-ball masses at R = step, 2 step, ..., R_max.
GrowthProfile growth_profile(const Measure& mu, const Point& x, const Length& R_max, const Length& step);

struct EntropyEstimate {
  double estimate = 0;
  double window_low = 0, window_high = 0;  // of the doubling increments over the tail
  double raw_low = 0, raw_high = 0;        // of h itself over the tail
  Length R_max;
  std::size_t tail_samples = 0;
  bool converged = true;  // window_high - window_low <= 0.1
};

inline constexpr double kDefaultTail = 0.3;

// Tail minimum of the doubling increments h_doubling; see README for why the
// raw h is reported but not used.
EntropyEstimate entropy_estimate(const GrowthProfile& profile, double tail_fraction = kDefaultTail);

struct EntropyConsistency {
  EntropyEstimate estimate;
  double certified_K = 0;
  bool consistent = true;  // estimate <= K + tolerance
  double tolerance = 0.05;
  // Converse: a (r0, C) pair making the weak inequality hold with the target K.
  std::optional<double> target_K;
  std::optional<BGParams> found;
  std::optional<Certificate> found_certificate;
};

EntropyConsistency entropy_bg_consistency(const Measure& mu, const Point& x, const Certificate& certificate,
                                          const GrowthProfile& profile, std::optional<double> target_K = {},
                                          const Length& target_r0 = 1, double tail_fraction = kDefaultTail);

// Smallest C (up to a relative 1e-6 slack) for which the weak inequality at
// (r0, K) holds on [r0, r_max]; at least 1 + 1e-6.
double minimal_factor(const Measure& mu, const Point& x, const Length& r0, double K, const Length& r_max);

}  // namespace bgkit
