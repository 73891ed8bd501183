#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lge/detmat.hpp"

using lge::ComplexMatrix;
using lge::cplx;
using lge::HermitianMatrix;
using lge::RealMatrix;

namespace {

double cofactor_det(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  double d = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<double>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<double> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(a[r][k]);
      }
      minor.push_back(row);
    }
    d += ((c % 2) ? -1.0 : 1.0) * a[0][c] * cofactor_det(minor);
  }
  return d;
}

ComplexMatrix random_complex(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  }
  return m;
}

HermitianMatrix random_positive(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n * (n + 2));
  for (auto& x : v) x = {g(rng), g(rng)};
  return HermitianMatrix::gram(n, n + 2, v);
}

// I - 2 v v^dagger / |v|^2
ComplexMatrix householder(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  double norm2 = 0.0;
  for (auto& x : v) {
    x = {g(rng), g(rng)};
    norm2 += std::norm(x);
  }
  ComplexMatrix h = ComplexMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) h(i, j) -= 2.0 * v[i] * std::conj(v[j]) / norm2;
  }
  return h;
}

}  // namespace

TEST_CASE("matrix construction") {
  CHECK_THROWS_AS(RealMatrix(2, 2, std::vector<double>{1, 2, 3}), lge::DimensionError);
  CHECK_THROWS_AS(RealMatrix(1, 2, std::vector<double>{1, NAN}), std::invalid_argument);
  ComplexMatrix m(2);
  m(0, 0) = 1.0;
  m(1, 1) = 2.0;
  m(0, 1) = cplx(0.0, 1.0);
  m(1, 0) = cplx(0.0, 1.0);
  CHECK_THROWS_AS(HermitianMatrix{m}, std::invalid_argument);
  m(1, 0) = cplx(0.0, -1.0);
  const HermitianMatrix h(m);
  CHECK(h.trace() == doctest::Approx(3.0));
}

TEST_CASE("det_scaled basics") {
  const auto id = lge::det_scaled(RealMatrix::identity(3));
  CHECK(id.sign == 1);
  CHECK(id.log_magnitude == doctest::Approx(0.0));
  CHECK(lge::det_scaled(RealMatrix(2, 2, {1, 2, 3, 4})).value() == doctest::Approx(-2.0));
  CHECK(lge::det_scaled(RealMatrix(2, 2, {1, 2, 2, 4})).is_zero());
  CHECK_THROWS_AS(lge::det_scaled(RealMatrix(2, 3)), lge::DimensionError);
}

TEST_CASE("det_scaled matches cofactor expansion on integer matrices") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> u(-9, 9);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 5;
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = a[i][j] = u(rng);
    }
    const double ref = cofactor_det(a);
    CHECK(std::round(lge::det_scaled(m).value()) == ref);
  }
}

TEST_CASE("log-form determinant") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 4;
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  std::vector<lge::LogScaled> e(n * n);
  // rows and columns scaled by wildly different powers; det scales by the product
  const double row_log[] = {300.0, -500.0, 0.0, 900.0};
  const double col_log[] = {-200.0, 50.0, 700.0, -1000.0};
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += row_log[i] + col_log[i];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = u(rng);
      e[i * n + j] = lge::LogScaled::from_value(a[i][j]) *
                     lge::LogScaled::from_log(row_log[i] + col_log[j]);
    }
  }
  const double ref = cofactor_det(a);
  const auto d = lge::det_scaled(e, n);
  CHECK(d.sign == (ref > 0 ? 1 : -1));
  CHECK(d.log_magnitude - total == doctest::Approx(std::log(std::fabs(ref))).epsilon(1e-12));
  CHECK_THROWS_AS(lge::det_scaled(e, 3), lge::DimensionError);
}

TEST_CASE("cholesky") {
  const auto l = lge::cholesky(HermitianMatrix(2, {4.0, 0.0, 0.0, 9.0}));
  CHECK(std::abs(l(0, 0) - 2.0) < 1e-15);
  CHECK(std::abs(l(1, 1) - 3.0) < 1e-15);
  CHECK(std::abs(l(0, 1)) == 0.0);

  std::mt19937_64 rng(3);
  for (std::size_t n : {1u, 3u, 8u, 20u}) {
    const HermitianMatrix h = random_positive(n, rng);
    const ComplexMatrix ll = lge::cholesky(h);
    const ComplexMatrix r = ll * ll.adjoint();
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) res = std::max(res, std::abs(r(i, j) - h(i, j)));
      for (std::size_t j = i + 1; j < n; ++j) CHECK(std::abs(ll(i, j)) == 0.0);
    }
    CHECK(res < 1e-10 * h.frobenius_norm());
  }
  CHECK_THROWS_AS(lge::cholesky(HermitianMatrix(2, {1.0, 2.0, 2.0, 1.0})), lge::NotPositiveDefinite);
}

TEST_CASE("hermitian eigenvalues") {
  const auto d = lge::hermitian_eigenvalues(HermitianMatrix(3, {3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0}));
  CHECK(d[0] == doctest::Approx(1.0));
  CHECK(d[1] == doctest::Approx(2.0));
  CHECK(d[2] == doctest::Approx(3.0));

  const auto e = lge::hermitian_eigenvalues(
      HermitianMatrix(2, {cplx(2.0), cplx(0.0, 1.0), cplx(0.0, -1.0), cplx(2.0)}));
  CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(e[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("eigenvalues: trace and unitary invariance") {
  std::mt19937_64 rng(21);
  for (std::size_t n : {2u, 5u, 12u, 30u}) {
    const HermitianMatrix h = HermitianMatrix::symmetrized(random_complex(n, rng));
    const auto ev = lge::hermitian_eigenvalues(h);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      sum += ev[k];
      if (k) CHECK(ev[k - 1] <= ev[k]);
    }
    const double norm = h.frobenius_norm();
    CHECK(std::fabs(sum - h.trace()) < 1e-10 * norm);

    ComplexMatrix u = householder(n, rng);
    for (int r = 0; r < 3; ++r) u = u * householder(n, rng);
    const auto ev2 = lge::hermitian_eigenvalues(lge::congruence(u, h));
    for (std::size_t k = 0; k < n; ++k) CHECK(std::fabs(ev[k] - ev2[k]) < 1e-9 * norm);
  }
}

TEST_CASE("eigenvalues: power sums") {
  // sum lambda^k = tr(H^k) for k = 1..4
  std::mt19937_64 rng(8);
  const std::size_t n = 6;
  const HermitianMatrix h = HermitianMatrix::symmetrized(random_complex(n, rng));
  const auto ev = lge::hermitian_eigenvalues(h);
  ComplexMatrix pw = h.matrix();
  for (int k = 1; k <= 4; ++k) {
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += pw(i, i).real();
    double sum = 0.0;
    for (double l : ev) sum += std::pow(l, k);
    CHECK(sum == doctest::Approx(tr).epsilon(1e-11).scale(std::pow(h.frobenius_norm(), k)));
    pw = pw * h.matrix();
  }
}

TEST_CASE("max generalized eigenvalue") {
  std::mt19937_64 rng(99);
  const HermitianMatrix a = random_positive(4, rng);
  const HermitianMatrix id(ComplexMatrix::identity(4));
  CHECK(lge::max_generalized_eigenvalue(a, id) ==
        doctest::Approx(lge::hermitian_eigenvalues(a).back()).epsilon(1e-12));

  ComplexMatrix twice = a.matrix();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) twice(i, j) *= 2.0;
  }
  CHECK(lge::max_generalized_eigenvalue(HermitianMatrix(twice), a) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(lge::max_generalized_eigenvalue(a, HermitianMatrix(ComplexMatrix::identity(3))),
                  lge::DimensionError);
}

TEST_CASE("max generalized eigenvalue: 2x2 pencil root") {
  // det(A - l B) = det B l^2 - (a11 b22 + a22 b11 - 2 Re(a12 conj(b12))) l + det A
  std::mt19937_64 rng(1234);
  for (int rep = 0; rep < 100; ++rep) {
    const HermitianMatrix a = random_positive(2, rng);
    const HermitianMatrix b = random_positive(2, rng);
    const double det_a = (a(0, 0) * a(1, 1)).real() - std::norm(a(0, 1));
    const double det_b = (b(0, 0) * b(1, 1)).real() - std::norm(b(0, 1));
    const double mid = a(0, 0).real() * b(1, 1).real() + a(1, 1).real() * b(0, 0).real() -
                       2.0 * (a(0, 1) * std::conj(b(0, 1))).real();
    const double disc = std::sqrt(mid * mid - 4.0 * det_a * det_b);
    const double root = (mid + disc) / (2.0 * det_b);
    CHECK(lge::max_generalized_eigenvalue(a, b) == doctest::Approx(root).epsilon(1e-10));
  }
}

TEST_CASE("max generalized eigenvalue: congruence invariance") {
  std::mt19937_64 rng(77);
  for (std::size_t n : {2u, 4u, 9u}) {
    const HermitianMatrix a = random_positive(n, rng);
    const HermitianMatrix b = random_positive(n, rng);
    const ComplexMatrix m = random_complex(n, rng);
    const double l0 = lge::max_generalized_eigenvalue(a, b);
    const double l1 = lge::max_generalized_eigenvalue(lge::congruence(m, a), lge::congruence(m, b));
    CHECK(std::fabs(l1 - l0) < 1e-8 * l0);
  }
}
