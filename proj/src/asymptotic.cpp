#include "lge/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lge/detmat.hpp"
#include "lge/specfun.hpp"

namespace lge {

AsymptoticRegime::AsymptoticRegime(double c, double theta, bool allow_zero_c)
    : c_(c), theta_(theta) {
  const bool c_ok = allow_zero_c ? (c >= 0.0 && c <= 1.0) : (c > 0.0 && c <= 1.0);
  if (!c_ok) throw std::invalid_argument("AsymptoticRegime: c must lie in (0, 1]");
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("AsymptoticRegime: theta must be finite and >= 0");
  }
}

double limit_cdf_fixed_alpha(int alpha, double x) {
  if (alpha < 0 || alpha > kMaxBesselAlpha) {
    throw EnvelopeError("limit_cdf_fixed_alpha: alpha must lie in [0, " +
                        std::to_string(kMaxBesselAlpha) + "]");
  }
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (alpha == 0) return std::exp(-1.0 / x);
  const double z = 2.0 / std::sqrt(x);
  RealMatrix b(alpha, alpha);
  for (int i = 0; i < alpha; ++i)
    for (int j = 0; j < alpha; ++j) b(i, j) = bessel_i(j - i, z);
  LogScaled v = det_scaled(b);
  v *= LogScaled::from_log(-1.0 / x);
  return std::clamp(v.value(), 0.0, 1.0);
}

double limit_cdf_scaled_snr(const AsymptoticRegime& regime, double x) {
  if (!(x > 0.0)) return 0.0;
  return std::exp(-(1.0 + regime.theta()) / (regime.c() * x));
}

double finite_scaled_cdf(const ProblemDims& dims, const SpikeParam& spike, double x) {
  const double m = dims.m();
  const double t = m * m * x - 1.0;
  if (!(t > 0.0)) return 0.0;
  return cdf_lambda_max(dims, spike, t);
}

}  // namespace lge
