#ifndef LGE_DETMAT_HPP
#define LGE_DETMAT_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lge/specfun.hpp"

namespace lge {

/// Largest dimension accepted by the dense routines below.
inline constexpr std::size_t kMaxMatrixDim = 64;

using cplx = std::complex<double>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotPositiveDefinite : public std::runtime_error {
 public:
  NotPositiveDefinite(std::size_t pivot, double value);
  std::size_t pivot() const { return pivot_; }

 private:
  std::size_t pivot_;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major dense real matrix.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static RealMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);

/// Square complex matrix, row-major. Used for Cholesky factors and the
/// intermediate products of the generalized eigenproblem.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t dim() const { return dim_; }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  ComplexMatrix adjoint() const;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermitian matrix. Construction checks entry(i,j) == conj(entry(j,i)) to
/// 1e-12 absolute and then stores the exactly symmetrized average.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m);
  HermitianMatrix(std::size_t dim, std::vector<cplx> row_major);

  /// Builds G G^dagger for an m x k complex matrix G given row-major.
  static HermitianMatrix gram(std::size_t rows, std::size_t cols,
                              const std::vector<cplx>& g);

  /// (M + M^dagger) / 2 without the conjugate-symmetry check; for matrices
  /// that are Hermitian up to rounding.
  static HermitianMatrix symmetrized(ComplexMatrix m);

  std::size_t dim() const { return m_.dim(); }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const ComplexMatrix& matrix() const { return m_; }
  double trace() const;
  double frobenius_norm() const;

 private:
  struct Trusted {};
  HermitianMatrix(ComplexMatrix m, Trusted) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// M H M^dagger.
HermitianMatrix congruence(const ComplexMatrix& m, const HermitianMatrix& h);

/// Determinant as sign + log magnitude. LU with partial pivoting after each
/// row is scaled by its max magnitude; the scales are folded back into the
/// log magnitude. A zero pivot gives an exact zero.
LogScaled det_scaled(const RealMatrix& m);

/// Determinant of a square matrix whose entries are given in log form
/// (row-major, dim x dim). Rows and columns are normalised in log space
/// before the LU, so entries spanning hundreds of decades are handled.
LogScaled det_scaled(const std::vector<LogScaled>& entries, std::size_t dim);

/// Lower-triangular L with L L^dagger = H.
ComplexMatrix cholesky(const HermitianMatrix& h);

/// All eigenvalues, ascending, by cyclic complex Jacobi rotations.
std::vector<double> hermitian_eigenvalues(const HermitianMatrix& h);

/// Largest eigenvalue of B^{-1} A, computed from L^{-1} A L^{-dagger} with
/// B = L L^dagger.
double max_generalized_eigenvalue(const HermitianMatrix& a,
                                  const HermitianMatrix& b);

}  // namespace lge

#endif  // LGE_DETMAT_HPP
