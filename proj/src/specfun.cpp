#include "lge/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lge {

LogScaled LogScaled::from_value(double v) {
  if (v == 0.0) return zero();
  return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
}

LogScaled& LogScaled::operator*=(const LogScaled& o) {
  sign *= o.sign;
  log_magnitude = sign == 0 ? 0.0 : log_magnitude + o.log_magnitude;
  return *this;
}

LogScaled& LogScaled::operator/=(const LogScaled& o) {
  if (o.sign == 0) throw std::domain_error("LogScaled: division by zero");
  sign *= o.sign;
  log_magnitude = sign == 0 ? 0.0 : log_magnitude - o.log_magnitude;
  return *this;
}

LogScaled& LogScaled::operator+=(const LogScaled& o) {
  if (o.sign == 0) return *this;
  if (sign == 0) return *this = o;
  const double hi = std::max(log_magnitude, o.log_magnitude);
  const double s = sign * std::exp(log_magnitude - hi) +
                   o.sign * std::exp(o.log_magnitude - hi);
  if (s == 0.0) return *this = zero();
  log_magnitude = hi + std::log(std::fabs(s));
  sign = s > 0 ? 1 : -1;
  return *this;
}

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("log_gamma: argument must be positive, got " +
                            std::to_string(x));
  }
  return std::lgamma(x);
}

double log_factorial(int k) {
  if (k < 0) throw std::domain_error("log_factorial: negative argument");
  if (k < 2) return 0.0;
  return std::lgamma(k + 1.0);
}

double pochhammer(double a, int k) {
  if (k < 0) throw std::domain_error("pochhammer: negative length");
  double r = 1.0;
  for (int i = 0; i < k; ++i) {
    const double f = a + i;
    if (f == 0.0) return 0.0;
    r *= f;
  }
  return r;
}

LogScaled pochhammer_scaled(double a, int k) {
  if (k < 0) throw std::domain_error("pochhammer: negative length");
  if (a > 0.0) {
    return LogScaled::from_log(std::lgamma(a + k) - std::lgamma(a));
  }
  LogScaled r = LogScaled::one();
  for (int i = 0; i < k; ++i) {
    r *= LogScaled::from_value(a + i);
    if (r.is_zero()) break;
  }
  return r;
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n) {
    throw std::domain_error("binomial: need 0 <= k <= n");
  }
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double binomial(int n, int k) {
  const double v = std::exp(log_binomial(n, k));
  return v < 0x1p53 ? std::round(v) : v;
}

double jacobi_p(int deg, double a, double b, double x) {
  if (deg < 0) throw std::domain_error("jacobi_p: negative degree");
  if (deg == 0) return 1.0;
  double prev = 1.0;
  double cur = 0.5 * ((a + b + 2.0) * x + (a - b));
  for (int k = 2; k <= deg; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (a * a - b * b);
    const double c3 = (s - 2.0) * (s - 1.0) * s;
    const double c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double next = ((c2 + c3 * x) * cur - c4 * prev) / c1;
    prev = cur;
    cur = next;
  }
  return cur;
}

LogScaled jacobi_p_scaled(int deg, double a, double b, double x) {
  if (deg < 0) throw std::domain_error("jacobi_p: negative degree");
  if (deg == 0) return LogScaled::one();
  double log_scale = 0.0;
  double prev = 1.0;
  double cur = 0.5 * ((a + b + 2.0) * x + (a - b));
  for (int k = 2; k <= deg; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (a * a - b * b);
    const double c3 = (s - 2.0) * (s - 1.0) * s;
    const double c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double next = ((c2 + c3 * x) * cur - c4 * prev) / c1;
    prev = cur;
    cur = next;
    const double mag = std::fabs(cur);
    if (mag > 1e100 || (mag < 1e-100 && mag > 0.0)) {
      const double l = std::log(mag);
      log_scale += l;
      const double f = std::exp(-l);
      cur *= f;
      prev *= f;
    }
  }
  LogScaled r = LogScaled::from_value(cur);
  if (!r.is_zero()) r.log_magnitude += log_scale;
  return r;
}

double gauss_2f1_terminating(double a, int neg_int, double c, double z) {
  if (neg_int > 0) {
    throw std::domain_error("gauss_2f1_terminating: second parameter must be <= 0");
  }
  const int n = -neg_int;
  for (int k = 0; k < n; ++k) {
    if (c + k == 0.0) {
      throw std::domain_error("gauss_2f1_terminating: c = " + std::to_string(c) +
                              " hits a pole inside the summation range");
    }
  }
  // Terms are kept relative to a running scale so large N does not overflow.
  double log_scale = 0.0;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < n; ++k) {
    term *= (a + k) * (neg_int + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
    const double mag = std::max(std::fabs(sum), std::fabs(term));
    if (mag > 1e150) {
      const double l = std::log(mag);
      log_scale += l;
      const double f = std::exp(-l);
      sum *= f;
      term *= f;
    }
  }
  return sum * std::exp(log_scale);
}

double gauss_2f1_equal_params(double a, double z) {
  if (!(z < 1.0)) throw std::domain_error("gauss_2f1_equal_params: need z < 1");
  return std::pow(1.0 - z, -a);
}

double bessel_i(int order, double z) {
  const int k = std::abs(order);
  if (z == 0.0) return k == 0 ? 1.0 : 0.0;
  if (z < 0.0) {
    const double v = bessel_i(k, -z);
    return (k % 2 == 0) ? v : -v;
  }
  // sum_j (z/2)^{2j+k} / (j! (j+k)!), terms relative to the j = 0 term
  double log_scale = k * std::log(0.5 * z) - std::lgamma(k + 1.0);
  const double q = 0.25 * z * z;
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1;; ++j) {
    term *= q / (static_cast<double>(j) * (j + k));
    sum += term;
    if (term < sum * 0x1p-54 && static_cast<double>(j) * (j + k) > q) break;
    if (sum > 1e200) {
      log_scale += std::log(sum);
      term /= sum;
      sum = 1.0;
    }
  }
  return std::exp(log_scale + std::log(sum));
}

}  // namespace lge
