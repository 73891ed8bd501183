#ifndef LGE_MONTE_CARLO_HPP
#define LGE_MONTE_CARLO_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "lge/finite_cdf.hpp"

namespace lge {

struct McConfig {
  ProblemDims dims;
  SpikeParam spike;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  /// Unit spike direction; empty means the first coordinate axis.
  std::vector<std::complex<double>> direction;
};

/// Sorted sample set with its step-function CDF.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  std::size_t count() const { return samples_.size(); }
  const std::vector<double>& samples() const { return samples_; }
  /// (#samples <= x) / count
  double operator()(double x) const;
  /// Same samples multiplied by a positive factor, e.g. n/p for the
  /// sample-covariance statistic.
  EmpiricalCdf rescaled(double factor) const;
  double mean() const;

 private:
  std::vector<double> samples_;
};

/// lambda_max of W1 W2^{-1} per trial, W1 ~ CW(p, I + eta u u^dagger),
/// W2 ~ CW(n, I). Each trial draws from its own stream keyed by
/// (seed, trial index), so results do not depend on the worker count.
EmpiricalCdf sample_lambda_max(const McConfig& config);

/// sup_i max(|i/N - F(x_i)|, |(i-1)/N - F(x_i)|).
double ks_distance(const EmpiricalCdf& emp, const std::function<double(double)>& analytic);

/// Two-sample KS distance.
double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b);

/// One-sided sup_x (F_b(x) - F_a(x)); large when a dominates b stochastically.
double ks_one_sided(const EmpiricalCdf& a, const EmpiricalCdf& b);

/// Pr(lambda_max <= t) for m = 2 by tensor Gauss-Legendre quadrature of the
/// joint density of the Jacobi-ensemble eigenvalues. 2 <= n, p <= 12.
double joint_density_cdf_m2(int n, int p, double eta, double t);

/// One sample per line with 17 significant digits.
void write_samples(std::ostream& os, const EmpiricalCdf& emp);

}  // namespace lge

#endif  // LGE_MONTE_CARLO_HPP
