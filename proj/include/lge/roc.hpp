#ifndef LGE_ROC_HPP
#define LGE_ROC_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "lge/finite_cdf.hpp"

namespace lge {

class BracketError : public std::runtime_error {
 public:
  BracketError(double lo, double hi, double target);
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

struct RocPoint {
  double p_false_alarm;
  double p_detection;
  double threshold;  // in the sample-covariance statistic scale
};

struct RocCurve {
  ProblemDims dims;
  double gamma;
  std::vector<RocPoint> points;
};

struct PstarBounds {
  double lower;
  double upper;
};

struct LowSnrSlope {
  double slope;              // reported coefficient
  double closed_form;        // value from the determinant expression
  double finite_difference;  // Richardson-extrapolated forward difference
  bool used_fallback;        // closed form disagreed with the difference by > 1e-3
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

/// Inverse of the null CDF in the W1 W2^{-1} scale: t with F(t; 0) = prob.
double null_cdf_inverse(const ProblemDims& dims, double prob);

/// Threshold mu with Pr(hat lambda_max > mu | H0) = p_false_alarm.
double calibrate_threshold(const ProblemDims& dims, double p_false_alarm);

double false_alarm_probability(const ProblemDims& dims, double threshold);
double detection_probability(const ProblemDims& dims, double gamma, double threshold);

/// P_D as a function of P_F when n = m. m and p may be non-integer for the
/// continuous sample-count analysis.
double roc_closed_form_alpha0(double m, double p, double gamma, double p_false_alarm);

/// One RocPoint per grid value; grid must be strictly increasing in (0, 1).
RocCurve roc_curve(const ProblemDims& dims, double gamma, std::span<const double> pf_grid);

/// Bracket on the P_D-maximising p when m = nu p and n = m.
PstarBounds pstar_bounds(double nu, double gamma, double p_false_alarm);
/// Midpoint of pstar_bounds.
double pstar_approx(double nu, double gamma, double p_false_alarm);

/// P_D of the closed-form ROC with m = nu p, p continuous.
double pd_balanced_scaling(double p, double nu, double gamma, double p_false_alarm);
/// Golden-section maximiser of pd_balanced_scaling over continuous p.
double pstar_continuous(double nu, double gamma, double p_false_alarm);
/// Integer p maximising pd_balanced_scaling by exhaustive sweep.
int pstar_integer(double nu, double gamma, double p_false_alarm);

/// First-order coefficient of P_D(gamma) - P_F as gamma -> 0.
LowSnrSlope low_snr_slope_detail(const ProblemDims& dims, double p_false_alarm);
double low_snr_slope(const ProblemDims& dims, double p_false_alarm);

/// lim_{p -> inf} of the n = m ROC: 1 - (1 - P_F)^{1 + gamma/m}.
double asymptotic_roc_p_infinity(double m, double gamma, double p_false_alarm);
/// Scaled-SNR ROC limit 1 - (1 - P_F)^{1 + theta}; independent of c.
double asymptotic_roc_scaled(double theta, double p_false_alarm);

}  // namespace lge

#endif  // LGE_ROC_HPP
