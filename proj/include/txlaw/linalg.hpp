#pragma once

#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <type_traits>
#include <vector>

namespace txlaw::linalg {

using cplx = std::complex<double>;

// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  Matrix transpose() const;
  Matrix adjoint() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<cplx>;

template <class T>
Matrix<T> Matrix<T>::transpose() const {
  Matrix<T> t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

template <class T>
Matrix<T> Matrix<T>::adjoint() const {
  Matrix<T> t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      if constexpr (std::is_same_v<T, cplx>)
        t(j, i) = std::conj((*this)(i, j));
      else
        t(j, i) = (*this)(i, j);
    }
  return t;
}

RealMatrix multiply(const RealMatrix& a, const RealMatrix& b);
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);
RealMatrix subtract(const RealMatrix& a, const RealMatrix& b);

double frobenius_norm(const RealMatrix& a);
// Largest singular value by power iteration on AᵀA.
double spectral_norm(const RealMatrix& a, int iterations = 200);
// ‖QᵀQ − I‖ max-entry, for orthonormality checks on columns of Q.
double orthonormality_defect(const RealMatrix& q);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  RealMatrix vectors;          // column k is the eigenvector of values[k]
};

// Householder tridiagonalization followed by implicit QL.
SymmetricEigen symmetric_eigen(const RealMatrix& a, bool want_vectors = true);
std::vector<double> symmetric_eigenvalues(const RealMatrix& a);

struct SVD {
  RealMatrix u;               // rows(A) x k, orthonormal columns
  std::vector<double> sigma;  // descending, k = min(rows, cols)
  RealMatrix v;               // cols(A) x k, orthonormal columns
};

// One-sided Jacobi.
SVD svd(const RealMatrix& a);

// Balancing, Householder Hessenberg reduction and Francis double-shift QR.
// Sorted by (real, imaginary).
std::vector<cplx> general_eigenvalues(const RealMatrix& a);

// Roots of sum_k coeffs[k] m^k (ascending order), sorted by (real, imaginary).
std::vector<cplx> companion_roots(std::span<const cplx> coeffs);
std::vector<cplx> companion_roots(std::span<const double> coeffs);

struct QR {
  RealMatrix q;  // rows x cols, orthonormal columns
  RealMatrix r;  // cols x cols, upper triangular
};

// Householder QR of a tall or square matrix.
QR householder_qr(const RealMatrix& a);

// Haar-distributed orthogonal matrix.
RealMatrix qr_haar(std::size_t n, std::mt19937_64& rng);

// Sorting helper shared by the eigenvalue routines.
void sort_complex(std::vector<cplx>& v);

}  // namespace txlaw::linalg
