#include "bgkit/model.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bgkit {

ModelProfile ModelProfile::from_curvature_dimension(const Rational& K, const Rational& N) {
  if (N <= 1) throw std::domain_error("curvature-dimension profile needs N > 1");
  return {K / (N - 1), N};
}

double model_sine(double kappa, double t) {
  if (kappa == 0) return t;
  if (kappa < 0) return std::sinh(std::sqrt(-kappa) * t);
  double a = std::sqrt(kappa) * t;
  return a >= std::numbers::pi ? 0.0 : std::sin(a);
}

double model_ball_volume(const ModelProfile& profile, const Rational& r) {
  if (profile.n <= 1) throw std::domain_error("model profile needs n > 1");
  if (r < 0) throw std::domain_error("model ball radius must be nonnegative");
  if (r == 0) return 0.0;
  const double n = to_double(profile.n);
  const double kappa = to_double(profile.kappa);
  const double R = to_double(r);
  if (profile.kappa == 0) return std::pow(R, n) / n;
  double upper = R;
  if (kappa > 0) upper = std::min(R, std::numbers::pi / std::sqrt(kappa));
  auto f = [&](double t) { return std::pow(model_sine(kappa, t), n - 1); };
  double error = 0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, upper, 30, 1e-10, &error);
}

}  // namespace bgkit
