#pragma once

#include "bgkit/rational.hpp"

namespace bgkit {

// Constant-curvature comparison profile: volume growth ∫₀^r s_κ(t)^{n−1} dt.
struct ModelProfile {
  Rational kappa;
  Rational n;

  // Profile for the curvature-dimension condition CD(K, N): κ = K/(N−1).
  static ModelProfile from_curvature_dimension(const Rational& K, const Rational& N);
};

// s_κ(t) = t (κ = 0), sinh(√|κ| t) (κ < 0), sin(√κ t) while √κ t ≤ π and 0 after (κ > 0).
double model_sine(double kappa, double t);

// ∫₀^r s_κ(t)^{n−1} dt, adaptive Gauss–Kronrod to relative tolerance 1e−9
// (closed form for κ = 0).
double model_ball_volume(const ModelProfile& profile, const Rational& r);

}  // namespace bgkit
