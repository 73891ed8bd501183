#ifndef LGE_SPECFUN_HPP
#define LGE_SPECFUN_HPP

#include <cmath>

namespace lge {

/// A real number stored as sign and natural-log magnitude. Used for factorial
/// ratios and determinant prefactors that overflow plain doubles.
struct LogScaled {
  double log_magnitude = 0.0;
  int sign = 0;  // -1, 0 or +1; 0 means the value is exactly zero

  static LogScaled zero() { return {0.0, 0}; }
  static LogScaled one() { return {0.0, 1}; }
  static LogScaled from_value(double v);
  static LogScaled from_log(double log_magnitude, int sign = 1) {
    return {log_magnitude, sign};
  }

  bool is_zero() const { return sign == 0; }
  /// Converts back to a double; overflows to +-inf and underflows to 0.
  double value() const {
    return sign == 0 ? 0.0 : sign * std::exp(log_magnitude);
  }

  LogScaled& operator*=(const LogScaled& o);
  LogScaled& operator/=(const LogScaled& o);
  LogScaled& operator+=(const LogScaled& o);
};

inline LogScaled operator*(LogScaled a, const LogScaled& b) { return a *= b; }
inline LogScaled operator/(LogScaled a, const LogScaled& b) { return a /= b; }
inline LogScaled operator+(LogScaled a, const LogScaled& b) { return a += b; }

/// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

/// ln(k!) for k >= 0.
double log_factorial(int k);

/// Pochhammer symbol (a)_k = a(a+1)...(a+k-1), (a)_0 = 1. Exact zero when a
/// is a nonpositive integer -n and k > n.
double pochhammer(double a, int k);

/// Pochhammer symbol in log form, for large k.
LogScaled pochhammer_scaled(double a, int k);

/// Binomial coefficient C(n, k) for integers 0 <= k <= n, composed in log
/// space and rounded when exactly representable.
double binomial(int n, int k);
double log_binomial(int n, int k);

/// Jacobi polynomial P_deg^{(a,b)}(x) by the three-term recurrence in degree.
double jacobi_p(int deg, double a, double b, double x);

/// Same recurrence with running renormalisation; safe for large deg and |x|.
LogScaled jacobi_p_scaled(int deg, double a, double b, double x);

/// Terminating Gauss series 2F1(a, -N; c; z) = sum_{k=0}^{N}
/// (a)_k (-N)_k / ((c)_k k!) z^k. neg_int must be <= 0.
/// Throws std::domain_error if c hits a pole inside the summation range.
double gauss_2f1_terminating(double a, int neg_int, double c, double z);

/// 2F1(a, b; b; z) = 1F0(a; z) = (1 - z)^{-a}, |z| < 1.
double gauss_2f1_equal_params(double a, double z);

/// Modified Bessel function of the first kind of integer order, ascending
/// power series. I_{-k} = I_k.
double bessel_i(int order, double z);

}  // namespace lge

#endif  // LGE_SPECFUN_HPP
