#ifndef LGE_ASYMPTOTIC_HPP
#define LGE_ASYMPTOTIC_HPP

#include "lge/finite_cdf.hpp"

namespace lge {

inline constexpr int kMaxBesselAlpha = 16;

/// Scaled high-dimensional regime: m/p -> c, eta/m -> theta.
/// c = 0 is admitted only for ROC limits.
class AsymptoticRegime {
 public:
  AsymptoticRegime(double c, double theta, bool allow_zero_c = false);
  double c() const { return c_; }
  double theta() const { return theta_; }

 private:
  double c_;
  double theta_;
};

/// Limit of Pr((1 + lambda_max) / m^2 <= x) with alpha, beta, eta fixed:
/// exp(-1/x) det[I_{j-i}(2/sqrt(x))]_{alpha x alpha}.
double limit_cdf_fixed_alpha(int alpha, double x);

/// exp(-(1 + theta) / (c x)).
double limit_cdf_scaled_snr(const AsymptoticRegime& regime, double x);

/// Exact Pr((1 + lambda_max) / m^2 <= x), i.e. cdf_lambda_max at m^2 x - 1.
double finite_scaled_cdf(const ProblemDims& dims, const SpikeParam& spike, double x);

}  // namespace lge

#endif  // LGE_ASYMPTOTIC_HPP
