#include "lge/monte_carlo.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "lge/detmat.hpp"
#include "lge/specfun.hpp"

namespace lge {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-trial generator of CN(0, 1) variates (E|z|^2 = 1) by Box-Muller.
class ComplexGaussian {
 public:
  ComplexGaussian(std::uint64_t seed, std::uint64_t trial)
      : engine_(splitmix64(seed ^ splitmix64(trial + 0x632be59bd9b4e019ULL))) {}

  std::complex<double> operator()() {
    const double u1 = ((engine_() >> 11) + 1) * 0x1p-53;  // (0, 1]
    const double u2 = (engine_() >> 11) * 0x1p-53;        // [0, 1)
    const double r = std::sqrt(-std::log(u1));
    const double phase = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phase), r * std::sin(phase)};
  }

 private:
  std::mt19937_64 engine_;
};

double one_trial(const McConfig& cfg, std::uint64_t trial, const std::vector<cplx>& u) {
  const std::size_t m = cfg.dims.m();
  const std::size_t n = cfg.dims.n();
  const std::size_t p = cfg.dims.p();
  ComplexGaussian gen(cfg.seed, trial);
  const double lift = std::sqrt(1.0 + cfg.spike.eta()) - 1.0;

  // x_k = (I + lift u u^dagger) z_k, stored row-major m x p
  std::vector<cplx> x(m * p);
  for (std::size_t k = 0; k < p; ++k) {
    cplx proj = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      x[i * p + k] = gen();
      proj += std::conj(u[i]) * x[i * p + k];
    }
    for (std::size_t i = 0; i < m; ++i) x[i * p + k] += lift * proj * u[i];
  }
  std::vector<cplx> noise(m * n);
  for (auto& v : noise) v = gen();

  return max_generalized_eigenvalue(HermitianMatrix::gram(m, p, x),
                                    HermitianMatrix::gram(m, n, noise));
}

struct GaussLegendre {
  std::array<double, 64> nodes{};    // on [0, 1]
  std::array<double, 64> weights{};
};

const GaussLegendre& gauss_legendre_64() {
  static const GaussLegendre rule = [] {
    GaussLegendre r;
    constexpr int n = 64;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-16) break;
      }
      r.nodes[i] = 0.5 * (1.0 - x);
      r.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // (2 / ((1-x^2) P'^2)) / 2
    }
    return r;
  }();
  return rule;
}

}  // namespace

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw std::invalid_argument("EmpiricalCdf: no samples");
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / samples_.size();
}

EmpiricalCdf EmpiricalCdf::rescaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("EmpiricalCdf::rescaled: factor must be > 0");
  std::vector<double> s = samples_;
  for (double& v : s) v *= factor;
  return EmpiricalCdf(std::move(s));
}

double EmpiricalCdf::mean() const {
  double s = 0.0;
  for (double v : samples_) s += v;
  return s / samples_.size();
}

EmpiricalCdf sample_lambda_max(const McConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("sample_lambda_max: trials must be >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("sample_lambda_max: workers must be >= 1");
  const std::size_t m = cfg.dims.m();
  std::vector<cplx> u(m, 0.0);
  if (cfg.direction.empty()) {
    u[0] = 1.0;
  } else {
    if (cfg.direction.size() != m) {
      throw std::invalid_argument("sample_lambda_max: direction must have m entries");
    }
    double nrm = 0.0;
    for (const auto& v : cfg.direction) nrm += std::norm(v);
    if (std::fabs(nrm - 1.0) > 1e-12) {
      throw std::invalid_argument("sample_lambda_max: direction must be a unit vector");
    }
    u = cfg.direction;
  }

  std::vector<double> out(cfg.trials);
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(cfg.workers, cfg.trials));
  auto run = [&](unsigned w) {
    for (std::size_t k = w; k < cfg.trials; k += workers) out[k] = one_trial(cfg, k, u);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  return EmpiricalCdf(std::move(out));
}

double ks_distance(const EmpiricalCdf& emp, const std::function<double(double)>& analytic) {
  const auto& s = emp.samples();
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = analytic(s[i]);
    d = std::max({d, std::fabs((i + 1) / n - f), std::fabs(i / n - f)});
  }
  return d;
}

double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b) {
  const auto& sa = a.samples();
  const auto& sb = b.samples();
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / sa.size() -
                              static_cast<double>(j) / sb.size()));
  }
  return d;
}

double ks_one_sided(const EmpiricalCdf& a, const EmpiricalCdf& b) {
  double d = 0.0;
  for (double x : a.samples()) d = std::max(d, b(x) - a(x));
  for (double x : b.samples()) d = std::max(d, b(x) - a(x));
  return d;
}

double joint_density_cdf_m2(int n, int p, double eta, double t) {
  if (n < 2 || p < 2 || n > 12 || p > 12) {
    throw EnvelopeError("joint_density_cdf_m2: need 2 <= n, p <= 12");
  }
  if (!(eta >= 0.0)) throw std::invalid_argument("joint_density_cdf_m2: eta must be >= 0");
  if (!(t > 0.0)) return 0.0;
  constexpr int m = 2;
  const double upper = std::isinf(t) ? 1.0 : t / (1.0 + t);

  // K1 = prod_j Gamma(n+p-j+1) / (Gamma(m-j+1) Gamma(n-j+1) Gamma(p-j+1));
  // K3 = K1 K2 with K2 = (m-1)! (p+n-m)! / (p+n-1)!
  double log_k1 = 0.0;
  for (int j = 1; j <= m; ++j) {
    log_k1 += log_factorial(n + p - j) - log_factorial(m - j) - log_factorial(n - j) -
              log_factorial(p - j);
  }
  const double log_k3 =
      log_k1 + log_factorial(m - 1) + log_factorial(p + n - m) - log_factorial(p + n - 1);
  const int power = p + n + 1 - m;
  const double c = eta / (1.0 + eta);
  const double log_pref = eta == 0.0 ? log_k1 : log_k3 - p * std::log1p(eta);

  // Cancellation-free form: the k-sum over 1/prod(x_k - x_j) collapses to
  // c (x2 - x1)^{-1} ... leaving sum_k a^k b^{N-1-k} / (a^N b^N).
  auto density = [&](double x1, double x2) {
    const double d = x2 - x1;
    double v = d * d * std::pow(x1 * x2, p - m) * std::pow((1.0 - x1) * (1.0 - x2), n - m);
    if (eta == 0.0) return v;
    const double a = 1.0 - c * x1;
    const double b = 1.0 - c * x2;
    double s = 0.0;
    double ak = 1.0;
    for (int k = 0; k < power; ++k) {
      s += ak * std::pow(b, power - 1 - k);
      ak *= a;
    }
    return v * s / (std::pow(a, power) * std::pow(b, power));
  };

  const auto& gl = gauss_legendre_64();
  double total = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double x2 = upper * gl.nodes[i];
    double inner = 0.0;
    for (int j = 0; j < 64; ++j) inner += gl.weights[j] * density(x2 * gl.nodes[j], x2);
    total += gl.weights[i] * x2 * inner;
  }
  return std::exp(log_pref) * upper * total;
}

void write_samples(std::ostream& os, const EmpiricalCdf& emp) {
  char buf[32];
  for (double v : emp.samples()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    os << buf;
  }
}

}  // namespace lge
