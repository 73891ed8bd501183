#include "lge/detmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace lge {

namespace {

void check_dim(std::size_t n, const char* what) {
  if (n == 0 || n > kMaxMatrixDim) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(n) +
                         " outside [1, " + std::to_string(kMaxMatrixDim) + "]");
  }
}

// Averages H and H^dagger in place so the stored matrix is exactly Hermitian.
void symmetrize(ComplexMatrix& m) {
  const std::size_t n = m.dim();
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = cplx(m(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
}

// In-place LU with partial pivoting on an already-normalised matrix.
LogScaled lu_determinant(RealMatrix a) {
  const std::size_t n = a.rows();
  LogScaled det = LogScaled::one();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::fabs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::fabs(a(i, k)) > best) {
        best = std::fabs(a(i, k));
        piv = i;
      }
    }
    if (best == 0.0) return LogScaled::zero();
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det.sign = -det.sign;
    }
    const double d = a(k, k);
    det *= LogScaled::from_value(d);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / d;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

}  // namespace

NotPositiveDefinite::NotPositiveDefinite(std::size_t pivot, double value)
    : std::runtime_error("cholesky: matrix not positive definite at pivot " +
                         std::to_string(pivot) + " (value " + std::to_string(value) + ")"),
      pivot_(pivot) {}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("RealMatrix: expected " + std::to_string(rows * cols) +
                         " entries, got " + std::to_string(data_.size()));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw std::invalid_argument("RealMatrix: non-finite entry");
  }
}

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) r(i, i) = 1.0;
  return r;
}

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("RealMatrix product: shape mismatch");
  RealMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) r(i, i) = 1.0;
  return r;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("ComplexMatrix product: shape mismatch");
  const std::size_t n = a.dim();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) : m_(m) {
  const std::size_t n = m_.dim();
  check_dim(n, "HermitianMatrix");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (!std::isfinite(m_(i, j).real()) || !std::isfinite(m_(i, j).imag())) {
        throw std::invalid_argument("HermitianMatrix: non-finite entry");
      }
      if (std::abs(m_(i, j) - std::conj(m_(j, i))) > 1e-12) {
        throw std::invalid_argument("HermitianMatrix: entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is not conjugate-symmetric");
      }
    }
  }
  symmetrize(m_);
}

HermitianMatrix::HermitianMatrix(std::size_t dim, std::vector<cplx> row_major)
    : HermitianMatrix([&] {
        if (row_major.size() != dim * dim) {
          throw DimensionError("HermitianMatrix: expected " + std::to_string(dim * dim) +
                               " entries");
        }
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i)
          for (std::size_t j = 0; j < dim; ++j) m(i, j) = row_major[i * dim + j];
        return m;
      }()) {}

HermitianMatrix HermitianMatrix::gram(std::size_t rows, std::size_t cols,
                                      const std::vector<cplx>& g) {
  check_dim(rows, "HermitianMatrix::gram");
  if (g.size() != rows * cols) throw DimensionError("HermitianMatrix::gram: size mismatch");
  ComplexMatrix m(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = i; j < rows; ++j) {
      cplx s = 0.0;
      const cplx* gi = &g[i * cols];
      const cplx* gj = &g[j * cols];
      for (std::size_t k = 0; k < cols; ++k) s += gi[k] * std::conj(gj[k]);
      m(i, j) = s;
      m(j, i) = std::conj(s);
    }
    m(i, i) = cplx(m(i, i).real(), 0.0);
  }
  return HermitianMatrix(std::move(m), Trusted{});
}

HermitianMatrix HermitianMatrix::symmetrized(ComplexMatrix m) {
  check_dim(m.dim(), "HermitianMatrix::symmetrized");
  symmetrize(m);
  return HermitianMatrix(std::move(m), Trusted{});
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += m_(i, i).real();
  return t;
}

double HermitianMatrix::frobenius_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j) s += std::norm(m_(i, j));
  return std::sqrt(s);
}

HermitianMatrix congruence(const ComplexMatrix& m, const HermitianMatrix& h) {
  if (m.dim() != h.dim()) throw DimensionError("congruence: shape mismatch");
  ComplexMatrix r = m * h.matrix() * m.adjoint();
  return HermitianMatrix::symmetrized(std::move(r));
}

LogScaled det_scaled(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("det_scaled: matrix is not square");
  check_dim(m.rows(), "det_scaled");
  const std::size_t n = m.rows();
  RealMatrix a = m;
  LogScaled scale = LogScaled::one();
  for (std::size_t i = 0; i < n; ++i) {
    double mx = 0.0;
    for (std::size_t j = 0; j < n; ++j) mx = std::max(mx, std::fabs(a(i, j)));
    if (mx == 0.0) return LogScaled::zero();
    for (std::size_t j = 0; j < n; ++j) a(i, j) /= mx;
    scale *= LogScaled::from_log(std::log(mx));
  }
  LogScaled d = lu_determinant(std::move(a));
  return d * scale;
}

LogScaled det_scaled(const std::vector<LogScaled>& entries, std::size_t dim) {
  check_dim(dim, "det_scaled");
  if (entries.size() != dim * dim) throw DimensionError("det_scaled: size mismatch");
  std::vector<double> logs(dim * dim);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    logs[k] = entries[k].is_zero() ? -HUGE_VAL : entries[k].log_magnitude;
  }
  double total = 0.0;
  // rows, then columns, normalised to a max log magnitude of 0
  for (std::size_t i = 0; i < dim; ++i) {
    double mx = -HUGE_VAL;
    for (std::size_t j = 0; j < dim; ++j) mx = std::max(mx, logs[i * dim + j]);
    if (mx == -HUGE_VAL) return LogScaled::zero();
    for (std::size_t j = 0; j < dim; ++j) logs[i * dim + j] -= mx;
    total += mx;
  }
  for (std::size_t j = 0; j < dim; ++j) {
    double mx = -HUGE_VAL;
    for (std::size_t i = 0; i < dim; ++i) mx = std::max(mx, logs[i * dim + j]);
    if (mx == -HUGE_VAL) return LogScaled::zero();
    for (std::size_t i = 0; i < dim; ++i) logs[i * dim + j] -= mx;
    total += mx;
  }
  RealMatrix a(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const LogScaled& e = entries[i * dim + j];
      a(i, j) = e.is_zero() ? 0.0 : e.sign * std::exp(logs[i * dim + j]);
    }
  LogScaled d = lu_determinant(std::move(a));
  if (!d.is_zero()) d.log_magnitude += total;
  return d;
}

ComplexMatrix cholesky(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  check_dim(n, "cholesky");
  ComplexMatrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = h(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) throw NotPositiveDefinite(j, d);
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = h(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

std::vector<double> hermitian_eigenvalues(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  check_dim(n, "hermitian_eigenvalues");
  ComplexMatrix a = h.matrix();
  const double norm = h.frobenius_norm();
  const double tol = 1e-12 * norm;
  constexpr int kMaxSweeps = 30;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > tol) {
    if (++sweep > kMaxSweeps) {
      throw ConvergenceError("hermitian_eigenvalues: no convergence after 30 sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double g = std::abs(a(p, q));
        if (g == 0.0) continue;
        // Phase e makes the (p,q) entry real; then a real rotation zeroes it.
        const cplx e = a(p, q) / g;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::hypot(1.0, tau));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = t * c;
        const cplx eb = std::conj(e);
        // A <- A U, U = [[c, s], [-s conj(e), c conj(e)]] on (p, q)
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp - s * eb * akq;
          a(k, q) = s * akp + c * eb * akq;
        }
        // A <- U^dagger A
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk - s * e * aqk;
          a(q, k) = s * apk + c * e * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * g;
        a(q, q) = aqq + t * g;
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

double max_generalized_eigenvalue(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("max_generalized_eigenvalue: shape mismatch");
  const std::size_t n = a.dim();
  const ComplexMatrix l = cholesky(b);
  // Z = L^{-1} A by forward substitution on each column
  ComplexMatrix z(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = a(i, col);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * z(k, col);
      z(i, col) = s / l(i, i);
    }
  }
  // C = Z L^{-dagger} = (L^{-1} Z^dagger)^dagger
  ComplexMatrix w(n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = std::conj(z(col, i));
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * w(k, col);
      w(i, col) = s / l(i, i);
    }
  }
  const auto ev = hermitian_eigenvalues(HermitianMatrix::symmetrized(w.adjoint()));
  return ev.back();
}

}  // namespace lge
