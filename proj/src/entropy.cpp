#include "bgkit/entropy.hpp"

#include "bgkit/errors.hpp"
#include "bgkit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bgkit {

GrowthProfile growth_profile(const Measure& mu, const Point& x, const Length& R_max, const Length& step) {
  if (!(step > 0)) throw std::invalid_argument("step must be positive");
  if (R_max < step) throw std::invalid_argument("R_max must be at least one step");
  if (auto safe = mu.safe_radius(x); safe && R_max >= *safe)
    throw WindowError("R_max " + to_string(R_max) + " reaches the window edge at " + to_string(*safe));
  const RadialProfile prof = mu.profile(x, R_max);
  const auto n = static_cast<std::size_t>(floor_of(R_max / step));
  GrowthProfile out{x, std::vector<GrowthSample>(n)};
  parallel_for(n, [&](std::size_t i) {
    GrowthSample& s = out.samples[i];
    s.R = step * static_cast<long long>(i + 1);
    s.mass = prof.mass(s.R, true);
    s.half_mass = prof.mass(s.R / 2, true);
    if (s.half_mass == 0)
      throw HypothesisError("zero-mass ball at " + to_string(x) + ", radius " + to_string(s.R / 2));
    const double R = to_double(s.R);
    s.h = log_of(s.mass) / R;
    s.h_doubling = 2 * log_of(s.mass / s.half_mass) / R;
  });
  return out;
}

EntropyEstimate entropy_estimate(const GrowthProfile& profile, double tail_fraction) {
  const auto& s = profile.samples;
  if (s.size() < 10) throw std::invalid_argument("entropy needs at least 10 samples, got " + std::to_string(s.size()));
  if (!(tail_fraction > 0 && tail_fraction <= 1)) throw std::invalid_argument("tail fraction must lie in (0, 1]");
  const auto tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tail_fraction * s.size())));
  EntropyEstimate e;
  e.tail_samples = tail;
  e.R_max = s.back().R;
  e.window_low = e.raw_low = INFINITY;
  e.window_high = e.raw_high = -INFINITY;
  for (std::size_t i = s.size() - tail; i < s.size(); ++i) {
    e.window_low = std::min(e.window_low, s[i].h_doubling);
    e.window_high = std::max(e.window_high, s[i].h_doubling);
    e.raw_low = std::min(e.raw_low, s[i].h);
    e.raw_high = std::max(e.raw_high, s[i].h);
  }
  e.estimate = e.window_low;
  e.converged = e.window_high - e.window_low <= 0.1;
  return e;
}

double minimal_factor(const Measure& mu, const Point& x, const Length& r0, double K, const Length& r_max) {
  double log_c = 0;
  for (const auto& row : scan_ratios(mu, x, r0, r_max))
    log_c = std::max(log_c, log_of(row.ratio) - K * to_double(row.rhs_radius));
  return std::max(std::exp(log_c) * (1 + 1e-6), 1 + 1e-6);
}

EntropyConsistency entropy_bg_consistency(const Measure& mu, const Point& x, const Certificate& certificate,
                                          const GrowthProfile& profile, std::optional<double> target_K,
                                          const Length& target_r0, double tail_fraction) {
  if (certificate.status != Status::verified)
    throw HypothesisError("entropy comparison needs a verified certificate, got " + to_string(certificate.status));
  if (!(profile.center == x) ||
      std::find(certificate.centers.begin(), certificate.centers.end(), x) == certificate.centers.end())
    throw std::invalid_argument("certificate, profile and center disagree");
  if (profile.samples.empty() || profile.samples.back().R < certificate.r_max)
    throw std::invalid_argument("the profile must reach the certificate's r_max");
  EntropyConsistency out;
  out.estimate = entropy_estimate(profile, tail_fraction);
  out.certified_K = std::visit([](const auto& p) { return p.K; }, certificate.params);
  out.consistent = out.estimate.estimate <= out.certified_K + out.tolerance;
  if (target_K) {
    out.target_K = target_K;
    const Length r_max = profile.samples.back().R;
    if (*target_K > out.estimate.estimate && r_max >= target_r0) {
      BGParams p{target_r0, minimal_factor(mu, x, target_r0, *target_K, r_max), *target_K};
      auto cert = check_weak_bg(mu, {x}, p, r_max);
      if (cert.status == Status::verified) out.found = p, out.found_certificate = std::move(cert);
    }
  }
  return out;
}

}  // namespace bgkit
