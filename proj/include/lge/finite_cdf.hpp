#ifndef LGE_FINITE_CDF_HPP
#define LGE_FINITE_CDF_HPP

#include <stdexcept>

#include "lge/specfun.hpp"

namespace lge {

/// Largest m, n or p the exact CDF is validated for.
inline constexpr int kMaxSampleDim = 64;

class EnvelopeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an exact CDF evaluation leaves [-1e-9, 1 + 1e-9].
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Detector dimensions: m sensors, n noise-only samples, p signal-plus-noise
/// samples. Requires 1 <= m <= n, p <= 64.
class ProblemDims {
 public:
  ProblemDims(int m, int n, int p);

  int m() const { return m_; }
  int n() const { return n_; }
  int p() const { return p_; }
  int alpha() const { return n_ - m_; }
  int beta() const { return p_ - m_; }
  /// p / n; maps the test statistic scale onto the W1 W2^{-1} scale.
  double kappa() const { return static_cast<double>(p_) / n_; }
  double nu() const { return static_cast<double>(m_) / p_; }

  friend bool operator==(const ProblemDims&, const ProblemDims&) = default;

 private:
  int m_;
  int n_;
  int p_;
};

/// Rank-1 spike strength eta >= 0 (the SNR under H1, 0 under H0).
class SpikeParam {
 public:
  explicit SpikeParam(double eta = 0.0);
  double eta() const { return eta_; }

 private:
  double eta_;
};

/// Psi_{i,j}(t) = (m+i+beta-1)_{j-2} P_{m+i-j}^{(j-2, beta+j-2)}(2/t + 1),
/// 1 <= i <= alpha+1, 2 <= j <= alpha+1.
double psi_entry(const ProblemDims& dims, int i, int j, double t);
LogScaled psi_entry_scaled(const ProblemDims& dims, int i, int j, double t);

/// Phi_i(t, eta) from the terminating transformed Gauss series; eta > 0.
LogScaled phi_entry(const ProblemDims& dims, const SpikeParam& spike, int i, double t);

/// Pr(lambda_max(W1 W2^{-1}) <= t). Dispatches eta == 0 to cdf_null and
/// n == m to the scalar closed form.
double cdf_lambda_max(const ProblemDims& dims, const SpikeParam& spike, double t);

/// The (alpha+1) x (alpha+1) determinant form with no special-case dispatch.
/// Requires eta > 0.
double cdf_lambda_max_determinant(const ProblemDims& dims, const SpikeParam& spike,
                                  double t);

/// Same CDF parameterised by the Jacobi-ensemble eigenvalue x = t / (1 + t),
/// x in [0, 1).
double cdf_x_max(const ProblemDims& dims, const SpikeParam& spike, double x);

/// Null (eta = 0) CDF from the alpha x alpha Psi determinant.
double cdf_null(const ProblemDims& dims, double t);

/// Pr(hat lambda_max <= x) for the sample-covariance statistic, i.e.
/// cdf_lambda_max at kappa * x.
double cdf_test_statistic(const ProblemDims& dims, const SpikeParam& spike, double x);

/// ln K(m, p, alpha) = sum_{j<alpha} ln((p+m+j-1)! / (p+m+2j)!).
double log_k_constant(int m, int p, int alpha);

}  // namespace lge

#endif  // LGE_FINITE_CDF_HPP
