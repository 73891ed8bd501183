#include "lge/roc.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "lge/detmat.hpp"
#include "lge/specfun.hpp"

namespace lge {

namespace {

void check_probability_open(double pf, const char* what) {
  if (!(pf > 0.0 && pf < 1.0)) {
    throw std::invalid_argument(std::string(what) + ": probability must lie in (0, 1)");
  }
}

void check_probability_closed(double pf, const char* what) {
  if (!(pf >= 0.0 && pf <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": probability must lie in [0, 1]");
  }
}

}  // namespace

BracketError::BracketError(double lo, double hi, double target)
    : std::runtime_error("calibrate_threshold: could not bracket CDF level " +
                         std::to_string(target) + " in [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]"),
      lo_(lo),
      hi_(hi) {}

double null_cdf_inverse(const ProblemDims& d, double prob) {
  check_probability_open(prob, "null_cdf_inverse");
  if (d.alpha() == 0) {
    // (t/(1+t))^{mp} = prob
    const double u = std::exp(std::log(prob) / (static_cast<double>(d.m()) * d.p()));
    return u / (1.0 - u);
  }
  auto f = [&](double log_t) { return cdf_null(d, std::exp(log_t)) - prob; };

  double lo = 0.0;
  double hi = 0.0;
  double flo = f(lo);
  double fhi = flo;
  for (int k = 0; flo > 0.0; ++k) {
    if (k == 200) throw BracketError(std::exp(lo), std::exp(hi), prob);
    hi = lo;
    fhi = flo;
    lo -= 1.0;
    flo = f(lo);
  }
  for (int k = 0; fhi < 0.0; ++k) {
    if (k == 200) throw BracketError(std::exp(lo), std::exp(hi), prob);
    lo = hi;
    flo = fhi;
    hi += 1.0;
    fhi = f(hi);
  }
  // Illinois regula falsi on log t, with bisection when it stalls.
  int side = 0;
  for (int it = 0; it < 300; ++it) {
    if (fhi == 0.0) return std::exp(hi);
    if (flo == 0.0) return std::exp(lo);
    double x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > lo && x < hi) || it % 4 == 3) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (std::fabs(fx) <= 1e-14 || hi - lo < 1e-15 * std::max(1.0, std::fabs(x))) {
      return std::exp(x);
    }
    if (fx < 0.0) {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

double calibrate_threshold(const ProblemDims& d, double p_false_alarm) {
  check_probability_open(p_false_alarm, "calibrate_threshold");
  return null_cdf_inverse(d, 1.0 - p_false_alarm) / d.kappa();
}

double false_alarm_probability(const ProblemDims& d, double threshold) {
  return 1.0 - cdf_test_statistic(d, SpikeParam(0.0), threshold);
}

double detection_probability(const ProblemDims& d, double gamma, double threshold) {
  return 1.0 - cdf_test_statistic(d, SpikeParam(gamma), threshold);
}

double roc_closed_form_alpha0(double m, double p, double gamma, double p_false_alarm) {
  check_probability_closed(p_false_alarm, "roc_closed_form_alpha0");
  if (p_false_alarm == 1.0) return 1.0;
  const double l = std::log1p(-p_false_alarm);
  // 1 + gamma (1 - (1-P_F)^{1/mp})
  const double base = 1.0 - gamma * std::expm1(l / (m * p));
  return -std::expm1(l - p * std::log(base));
}

RocCurve roc_curve(const ProblemDims& d, double gamma, std::span<const double> pf_grid) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("roc_curve: gamma must be >= 0");
  RocCurve curve{d, gamma, {}};
  curve.points.reserve(pf_grid.size());
  double prev = 0.0;
  for (double pf : pf_grid) {
    check_probability_open(pf, "roc_curve");
    if (!curve.points.empty() && !(pf > prev)) {
      throw std::invalid_argument("roc_curve: grid must be strictly increasing");
    }
    prev = pf;
    const double mu = calibrate_threshold(d, pf);
    curve.points.push_back({pf, detection_probability(d, gamma, mu), mu});
  }
  return curve;
}

PstarBounds pstar_bounds(double nu, double gamma, double p_false_alarm) {
  if (!(nu > 0.0) || !(gamma > 0.0)) {
    throw std::invalid_argument("pstar_bounds: nu and gamma must be positive");
  }
  check_probability_open(p_false_alarm, "pstar_bounds");
  const double l = -std::log1p(-p_false_alarm);
  const double lower = std::sqrt(l / (2.0 * nu * std::log((gamma + 2.0) / (gamma + 1.0))));
  const double upper = std::sqrt(l / (nu * std::log((gamma + 4.0) / (gamma + 2.0))));
  return {lower, upper};
}

double pstar_approx(double nu, double gamma, double p_false_alarm) {
  const PstarBounds b = pstar_bounds(nu, gamma, p_false_alarm);
  return 0.5 * (b.lower + b.upper);
}

double pd_balanced_scaling(double p, double nu, double gamma, double p_false_alarm) {
  return roc_closed_form_alpha0(nu * p, p, gamma, p_false_alarm);
}

double pstar_continuous(double nu, double gamma, double p_false_alarm) {
  const PstarBounds b = pstar_bounds(nu, gamma, p_false_alarm);
  double lo = 0.25 * b.lower;
  double hi = 4.0 * b.upper;
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double p) { return pd_balanced_scaling(p, nu, gamma, p_false_alarm); };
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-12 * (lo + hi)) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

int pstar_integer(double nu, double gamma, double p_false_alarm) {
  const PstarBounds b = pstar_bounds(nu, gamma, p_false_alarm);
  const int p_max = static_cast<int>(std::ceil(4.0 * b.upper)) + 16;
  int best = 1;
  double best_pd = pd_balanced_scaling(1.0, nu, gamma, p_false_alarm);
  for (int p = 2; p <= p_max; ++p) {
    const double pd = pd_balanced_scaling(p, nu, gamma, p_false_alarm);
    if (pd > best_pd) {
      best_pd = pd;
      best = p;
    }
  }
  return best;
}

LowSnrSlope low_snr_slope_detail(const ProblemDims& d, double p_false_alarm) {
  check_probability_open(p_false_alarm, "low_snr_slope");
  const double z = 1.0 - p_false_alarm;
  const int m = d.m();
  const int n = d.n();
  const int p = d.p();
  if (d.alpha() == 0) {
    const double a = -p * std::expm1(std::log(z) / (static_cast<double>(m) * p));
    const double s = a * z;
    return {s, s, s, false};
  }
  const int alpha = d.alpha();
  const double g = null_cdf_inverse(d, z);
  const double log_r = -std::log1p(1.0 / g);
  const double r = std::exp(log_r);

  // h: rows Psi_1, Psi_3, ..., Psi_{alpha+1}; columns 2..alpha+1
  std::vector<LogScaled> h(static_cast<std::size_t>(alpha) * alpha);
  for (int row = 0; row < alpha; ++row) {
    const int i = row == 0 ? 1 : row + 2;
    for (int j = 0; j < alpha; ++j) h[row * alpha + j] = psi_entry_scaled(d, i, j + 2, g);
  }
  LogScaled tail = det_scaled(h, alpha);
  tail *= LogScaled::from_log(log_k_constant(m, p, alpha) + log_factorial(p + n) -
                              log_factorial(p + m + 1) +
                              (static_cast<double>(m) * (n + p - m) + 1.0) * log_r);
  const double r_eps = z - (static_cast<double>(p + n) / (p + m)) * r * z + tail.value();
  const double closed = p * r_eps;

  // Forward differences of the exact CDF at the calibrated point, Richardson-extrapolated.
  const double f0 = cdf_lambda_max(d, SpikeParam(0.0), g);
  auto diff = [&](double step) {
    return (f0 - cdf_lambda_max(d, SpikeParam(step), g)) / step;
  };
  constexpr double kStep = 1e-4;
  const double fd = 2.0 * diff(0.5 * kStep) - diff(kStep);

  const bool fallback = !(std::fabs(closed - fd) <= 1e-3 * std::fabs(fd));
  if (fallback) {
    std::clog << "low_snr_slope: closed form " << closed << " disagrees with finite difference "
              << fd << " for (m,n,p)=(" << m << "," << n << "," << p
              << "); using the finite difference\n";
  }
  return {fallback ? fd : closed, closed, fd, fallback};
}

double low_snr_slope(const ProblemDims& d, double p_false_alarm) {
  return low_snr_slope_detail(d, p_false_alarm).slope;
}

double asymptotic_roc_p_infinity(double m, double gamma, double p_false_alarm) {
  check_probability_closed(p_false_alarm, "asymptotic_roc_p_infinity");
  if (p_false_alarm == 1.0) return 1.0;
  return -std::expm1((1.0 + gamma / m) * std::log1p(-p_false_alarm));
}

double asymptotic_roc_scaled(double theta, double p_false_alarm) {
  check_probability_closed(p_false_alarm, "asymptotic_roc_scaled");
  if (p_false_alarm == 1.0) return 1.0;
  return -std::expm1((1.0 + theta) * std::log1p(-p_false_alarm));
}

}  // namespace lge
