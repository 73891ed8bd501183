#include "lge/finite_cdf.hpp"

#include <quadmath.h>

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace lge {

namespace {

namespace bmp = boost::multiprecision;

constexpr double kProbabilitySlack = 1e-9;

double to_probability(const LogScaled& v, const char* what) {
  const double x = v.value();
  if (!(x >= -kProbabilitySlack && x <= 1.0 + kProbabilitySlack)) {
    throw ConditioningError(std::string(what) + ": value " + std::to_string(x) +
                            " outside [0, 1]; parameters are outside the numerical envelope");
  }
  return std::clamp(x, 0.0, 1.0);
}

// ln (t / (1 + t)), accurate for small and large t
double log_ratio(double t) { return -std::log1p(1.0 / t); }

double cdf_alpha0(const ProblemDims& d, double eta, double t) {
  // (t/(1+t))^{mp} / (1 + eta/(1+t))^p
  const double l = d.m() * d.p() * log_ratio(t) - d.p() * std::log1p(eta / (1.0 + t));
  return std::exp(l);
}

// The determinant cancels heavily for large alpha and eta t (the Phi column
// carries terms in (eta t)^k whose contributions cancel), so entries and the
// LU run in binary128 and, when the cancellation estimate says 113 bits are
// not enough, in MPFR at a fixed higher precision.
using wide = __float128;
template <unsigned D>
using Mp = bmp::number<bmp::mpfr_float_backend<D>, bmp::et_off>;

wide r_frexp(wide v, int* e) { return frexpq(v, e); }
wide r_ldexp(wide v, int e) { return ldexpq(v, e); }
wide r_abs(wide v) { return fabsq(v); }
template <unsigned D>
Mp<D> r_frexp(const Mp<D>& v, int* e) { return bmp::frexp(v, e); }
template <unsigned D>
Mp<D> r_ldexp(const Mp<D>& v, int e) { return bmp::ldexp(v, e); }
template <unsigned D>
Mp<D> r_abs(const Mp<D>& v) { return bmp::abs(v); }

// m * 2^e with 0.5 <= |m| < 1, or m == 0
template <class T>
struct Big {
  T m = 0;
  long e = 0;

  static Big of(const T& v) {
    if (v == 0) return {};
    int ex = 0;
    T f = r_frexp(v, &ex);
    return {std::move(f), ex};
  }
  static Big norm(const T& m, long e) {
    Big b = of(m);
    if (b.m != 0) b.e += e;
    return b;
  }
  int sign() const { return m > 0 ? 1 : (m < 0 ? -1 : 0); }
  double mantissa() const { return static_cast<double>(m); }
  double log2_abs() const {
    return m == 0 ? -std::numeric_limits<double>::infinity() : std::log2(std::fabs(mantissa())) + e;
  }
};

template <class T>
Big<T> operator*(const Big<T>& a, const Big<T>& b) { return Big<T>::norm(a.m * b.m, a.e + b.e); }
template <class T>
Big<T> operator/(const Big<T>& a, const Big<T>& b) { return Big<T>::norm(a.m / b.m, a.e - b.e); }
template <class T>
Big<T> operator+(const Big<T>& a, const Big<T>& b) {
  if (a.m == 0) return b;
  if (b.m == 0) return a;
  const long gap = a.e - b.e;
  if (gap >= 0) return Big<T>::norm(a.m + r_ldexp(b.m, static_cast<int>(std::max(-gap, -100000L))), a.e);
  return Big<T>::norm(b.m + r_ldexp(a.m, static_cast<int>(std::max(gap, -100000L))), b.e);
}

template <class T>
Big<T> pow_big(Big<T> b, int n) {
  Big<T> r = Big<T>::of(1);
  while (n > 0) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

// k! and C(n, k) over the index range the CDF needs
template <class T>
struct Tables {
  static constexpr int kFact = 4 * kMaxSampleDim + 8;
  static constexpr int kBinom = 2 * kMaxSampleDim + 2;
  std::vector<T> fact;
  std::vector<T> binom;

  Tables() : fact(kFact), binom(kBinom * kBinom) {
    fact[0] = 1;
    for (int k = 1; k < kFact; ++k) fact[k] = fact[k - 1] * k;
    for (int n = 0; n < kBinom; ++n)
      for (int k = 0; k <= n; ++k) binom[n * kBinom + k] = fact[n] / (fact[k] * fact[n - k]);
  }
  static const Tables& get() {
    static const Tables t;
    return t;
  }
  const T& f(int k) const { return fact.at(static_cast<std::size_t>(k)); }
  const T& c(int n, int k) const { return binom.at(static_cast<std::size_t>(n * kBinom + k)); }
};

// The evaluation point in the forms the entries need, built either from t or
// from x = t / (1 + t) so the two parameterisations are independent paths.
struct EvalInput {
  double value;  // t, or x when in_x
  bool in_x;
  double eta;
};

template <class T>
struct EvalPoint {
  T x;  // t / (1 + t)
  T y;  // 1 / (1 + t) = 1 - x
  T w;  // eta t / (1 + eta + t)
  T g;  // (1 + eta)(1 + t) / (1 + eta + t)

  explicit EvalPoint(const EvalInput& in) {
    const T eta = in.eta;
    if (in.in_x) {
      const T xx = in.value;
      const T den = 1 + eta - eta * xx;
      x = xx;
      y = 1 - xx;
      w = eta * xx / den;
      g = (1 + eta) / den;
    } else {
      const T t = in.value;
      x = t / (1 + t);
      y = 1 / (1 + t);
      w = eta * t / (1 + eta + t);
      g = (1 + eta) * (1 + t) / (1 + eta + t);
    }
  }
};

void check_psi_index(const ProblemDims& d, int i, int j) {
  if (i < 1 || i > d.alpha() + 1 || j < 2 || j > d.alpha() + 1) {
    throw std::out_of_range("psi_entry: index (" + std::to_string(i) + "," +
                            std::to_string(j) + ") outside the Psi block");
  }
}

// (m+i+beta-1)_{j-2} P_{m+i-j}^{(j-2, beta+j-2)}(2/t + 1), using
// P_n^{(a,b)}(2/t + 1) = x^{-n} sum_k C(n+a, n-k) C(n+b, k) y^k
template <class T>
Big<T> psi_at(const ProblemDims& d, int i, int j, const EvalPoint<T>& pt) {
  const Tables<T>& tb = Tables<T>::get();
  const int n = d.m() + i - j;
  if (n < 0) return {};
  const int a = j - 2;
  const int b = d.beta() + j - 2;
  T sum = 0;
  T yk = 1;
  for (int k = 0; k <= n; ++k) {
    sum += tb.c(n + a, n - k) * tb.c(n + b, k) * yk;
    yk *= pt.y;
  }
  const int base = d.m() + i + d.beta() - 1;
  return Big<T>::of(tb.f(base + j - 3) / tb.f(base - 1) * sum) / pow_big(Big<T>::of(pt.x), n);
}

// Q_i w^{i-1} g^p sum_{k=0}^{N} (p+i-1)_k N! / (k! (p+m+2i-2)_k (N-k)!) w^k,
// N = alpha - i + 1; all terms are positive.
template <class T>
Big<T> phi_at(const ProblemDims& d, int i, const EvalPoint<T>& pt) {
  const Tables<T>& tb = Tables<T>::get();
  const int p = d.p();
  const int m = d.m();
  const int terms = d.alpha() - i + 1;
  const Big<T> q = Big<T>::of(tb.f(d.n() + p + i - 2) * tb.f(p + i - 2) / tb.f(p + m + 2 * i - 3));
  Big<T> term = Big<T>::of(1);
  Big<T> sum = term;
  for (int k = 0; k < terms; ++k) {
    const T ratio = T((p + i - 1 + k) * (terms - k)) / T((k + 1) * (p + m + 2 * i - 2 + k));
    term = term * Big<T>::of(ratio * pt.w);
    sum = sum + term;
  }
  return q * pow_big(Big<T>::of(pt.w), i - 1) * pow_big(Big<T>::of(pt.g), p) * sum;
}

// prefactor * det, plus log2 of prefactor times the Hadamard bound of the
// matrix, which measures how much the determinant cancels
template <class T>
struct Assembled {
  Big<T> value;
  double log2_bound;
};

// Exact power-of-two row and column normalisation, then LU with partial
// pivoting.
template <class T>
Assembled<T> det_times(std::vector<Big<T>> a, int n, const Big<T>& pref) {
  constexpr long kNone = std::numeric_limits<long>::min();
  long shift = 0;
  for (int pass = 0; pass < 2; ++pass) {
    for (int u = 0; u < n; ++u) {
      long top = kNone;
      for (int v = 0; v < n; ++v) {
        const Big<T>& b = pass == 0 ? a[u * n + v] : a[v * n + u];
        if (b.m != 0) top = std::max(top, b.e);
      }
      if (top == kNone) return {{}, -std::numeric_limits<double>::infinity()};
      for (int v = 0; v < n; ++v) (pass == 0 ? a[u * n + v] : a[v * n + u]).e -= top;
      shift += top;
    }
  }
  double log2_hadamard = 0.0;
  for (int i = 0; i < n; ++i) {
    double ss = 0.0;
    for (int j = 0; j < n; ++j) {
      const Big<T>& b = a[i * n + j];
      if (b.m != 0) ss += std::ldexp(b.mantissa() * b.mantissa(), static_cast<int>(std::max(2 * b.e, -2000L)));
    }
    log2_hadamard += 0.5 * std::log2(ss);
  }
  std::vector<T> lu(static_cast<std::size_t>(n) * n);
  for (std::size_t k = 0; k < lu.size(); ++k) {
    if (a[k].m != 0) lu[k] = r_ldexp(a[k].m, static_cast<int>(std::max(a[k].e, -30000L)));
  }
  Big<T> det = pref;
  det.e += shift;
  const double log2_bound = pref.log2_abs() + shift + log2_hadamard;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (r_abs(lu[r * n + c]) > r_abs(lu[piv * n + c])) piv = r;
    if (lu[piv * n + c] == 0) return {{}, log2_bound};
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(lu[c * n + k], lu[piv * n + k]);
      det.m = -det.m;
    }
    det = det * Big<T>::of(lu[c * n + c]);
    for (int r = c + 1; r < n; ++r) {
      if (lu[r * n + c] == 0) continue;
      const T f = lu[r * n + c] / lu[c * n + c];
      for (int k = c + 1; k < n; ++k) lu[r * n + k] -= f * lu[c * n + k];
    }
  }
  return {det, log2_bound};
}

template <class T>
Assembled<T> assemble(const ProblemDims& d, const EvalInput& in, bool null_form) {
  const Tables<T>& tb = Tables<T>::get();
  const EvalPoint<T> pt(in);
  const int al = d.alpha();
  const Big<T> tail = pow_big(Big<T>::of(pt.x), d.m() * (d.n() + d.p() - d.m()));
  Big<T> k = Big<T>::of(1);
  for (int j = 0; j < al; ++j) k = k * Big<T>::of(tb.f(d.p() + d.m() + j - 1) / tb.f(d.p() + d.m() + 2 * j));
  if (null_form) {
    // K (n+p-1)!/(m+p-1)! x^{m(n+p-m)} det[Psi_{i+1,j+1}]
    std::vector<Big<T>> e(static_cast<std::size_t>(al) * al);
    for (int i = 1; i <= al; ++i)
      for (int j = 1; j <= al; ++j) e[(i - 1) * al + (j - 1)] = psi_at(d, i + 1, j + 1, pt);
    const Big<T> pref = k * Big<T>::of(tb.f(d.n() + d.p() - 1) / tb.f(d.m() + d.p() - 1)) * tail;
    return det_times(std::move(e), al, pref);
  }
  // K / ((p-1)! (1+eta)^p) x^{m(n+p-m)} det[Phi_i | Psi_{i,j}]
  const int dim = al + 1;
  std::vector<Big<T>> e(static_cast<std::size_t>(dim) * dim);
  for (int i = 1; i <= dim; ++i) {
    e[(i - 1) * dim] = phi_at(d, i, pt);
    for (int j = 2; j <= dim; ++j) e[(i - 1) * dim + (j - 1)] = psi_at(d, i, j, pt);
  }
  const Big<T> pref = k / (Big<T>::of(tb.f(d.p() - 1)) * pow_big(Big<T>::of(1 + T(in.eta)), d.p())) * tail;
  return det_times(std::move(e), dim, pref);
}

// Bits needed for 2^-64 relative accuracy, relaxed to absolute below 2^-100.
template <class T>
double required_bits(const Assembled<T>& a, int dim) {
  const double target = std::max(a.value.log2_abs(), -100.0) - 64.0;
  return std::log2(static_cast<double>(dim) + 1.0) + a.log2_bound - target;
}

template <class T>
double to_double(const Big<T>& b) {
  if (b.m == 0) return 0.0;
  return std::ldexp(b.mantissa(), static_cast<int>(std::clamp(b.e, -100000L, 100000L)));
}

// Accepts the binary128 value when the Hadamard estimate allows it; otherwise
// climbs the precision ladder until two consecutive precisions agree.
double evaluate(const ProblemDims& d, const EvalInput& in, bool null_form, const char* what) {
  const int dim = null_form ? d.alpha() : d.alpha() + 1;
  const auto finish = [&](double v) { return to_probability(LogScaled::from_value(v), what); };
  const auto agree = [](double lo, double hi) {
    return std::isfinite(lo) && std::isfinite(hi) && std::fabs(lo - hi) <= 0x1p-50 * std::max(std::fabs(hi), 0x1p-100);
  };
  const auto q = assemble<wide>(d, in, null_form);
  // far below the smallest double: the value is zero whatever the cancellation
  if (q.log2_bound < -1200.0) return 0.0;
  const double vq = to_double(q.value);
  if (required_bits(q, dim) <= 110.0) return finish(vq);
  const double v1 = to_double(assemble<Mp<100>>(d, in, null_form).value);
  if (agree(vq, v1)) return finish(v1);
  const double v2 = to_double(assemble<Mp<400>>(d, in, null_form).value);
  if (agree(v1, v2)) return finish(v2);
  const double v3 = to_double(assemble<Mp<1000>>(d, in, null_form).value);
  if (agree(v2, v3)) return finish(v3);
  throw ConditioningError(std::string(what) +
                          ": determinant did not settle at 3320 bits; parameters are outside "
                          "the numerical envelope");
}

LogScaled to_log_scaled(const Big<wide>& b) {
  if (b.m == 0) return LogScaled::zero();
  return LogScaled::from_log(b.log2_abs() * std::numbers::ln2, b.sign());
}

}  // namespace

ProblemDims::ProblemDims(int m, int n, int p) : m_(m), n_(n), p_(p) {
  if (m < 1 || n < 1 || p < 1) {
    throw std::invalid_argument("ProblemDims: m, n, p must be positive");
  }
  if (n < m || p < m) {
    throw std::invalid_argument("ProblemDims: need n >= m and p >= m (got m=" +
                                std::to_string(m) + ", n=" + std::to_string(n) +
                                ", p=" + std::to_string(p) + ")");
  }
  if (m > kMaxSampleDim || n > kMaxSampleDim || p > kMaxSampleDim) {
    throw EnvelopeError("ProblemDims: m, n, p must be <= " +
                        std::to_string(kMaxSampleDim));
  }
}

SpikeParam::SpikeParam(double eta) : eta_(eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("SpikeParam: eta must be finite and >= 0");
  }
}

double log_k_constant(int m, int p, int alpha) {
  double s = 0.0;
  for (int j = 0; j < alpha; ++j) {
    s += log_factorial(p + m + j - 1) - log_factorial(p + m + 2 * j);
  }
  return s;
}

LogScaled psi_entry_scaled(const ProblemDims& d, int i, int j, double t) {
  if (!(t > 0.0)) throw std::domain_error("psi_entry: t must be positive");
  check_psi_index(d, i, j);
  return to_log_scaled(psi_at(d, i, j, EvalPoint<wide>({t, false, 0.0})));
}

double psi_entry(const ProblemDims& d, int i, int j, double t) {
  return psi_entry_scaled(d, i, j, t).value();
}

LogScaled phi_entry(const ProblemDims& d, const SpikeParam& spike, int i, double t) {
  if (i < 1 || i > d.alpha() + 1) throw std::out_of_range("phi_entry: row index out of range");
  if (!(spike.eta() > 0.0)) throw std::domain_error("phi_entry: eta must be positive");
  if (!(t > 0.0)) throw std::domain_error("phi_entry: t must be positive");
  return to_log_scaled(phi_at(d, i, EvalPoint<wide>({t, false, spike.eta()})));
}

double cdf_lambda_max_determinant(const ProblemDims& d, const SpikeParam& spike, double t) {
  if (!(spike.eta() > 0.0)) {
    throw std::domain_error("cdf_lambda_max_determinant: eta must be positive");
  }
  if (!(t > 0.0)) return 0.0;
  if (std::isinf(t)) return 1.0;
  return evaluate(d, {t, false, spike.eta()}, false, "cdf_lambda_max");
}

double cdf_null(const ProblemDims& d, double t) {
  if (!(t > 0.0)) return 0.0;
  if (std::isinf(t)) return 1.0;
  if (d.alpha() == 0) return cdf_alpha0(d, 0.0, t);
  return evaluate(d, {t, false, 0.0}, true, "cdf_null");
}

double cdf_lambda_max(const ProblemDims& d, const SpikeParam& spike, double t) {
  if (!(t > 0.0)) return 0.0;
  if (std::isinf(t)) return 1.0;
  if (spike.eta() == 0.0) return cdf_null(d, t);
  if (d.alpha() == 0) return cdf_alpha0(d, spike.eta(), t);
  return cdf_lambda_max_determinant(d, spike, t);
}

double cdf_x_max(const ProblemDims& d, const SpikeParam& spike, double x) {
  if (!(x > 0.0)) return 0.0;
  if (x >= 1.0) return 1.0;
  if (spike.eta() == 0.0 || d.alpha() == 0) return cdf_lambda_max(d, spike, x / (1.0 - x));
  return evaluate(d, {x, true, spike.eta()}, false, "cdf_lambda_max");
}

double cdf_test_statistic(const ProblemDims& d, const SpikeParam& spike, double x) {
  return cdf_lambda_max(d, spike, d.kappa() * x);
}

}  // namespace lge
