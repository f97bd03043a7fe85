#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace semmg {

/// Small dense row-major matrix for 1D element operators and subdomain factors.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  static Matrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::span<double> data() { return data_; }
  [[nodiscard]] std::span<const double> data() const { return data_; }

  [[nodiscard]] Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

/// Eigen-decomposition A = V diag(values) V^T of a symmetric matrix.
/// Columns of `vectors` are orthonormal eigenvectors, values ascending.
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations. Converged when the off-diagonal Frobenius norm
/// drops below `rel_tol` times the Frobenius norm of the input.
/// Throws std::runtime_error if `max_sweeps` is exhausted.
SymmetricEigen jacobi_eigen(const Matrix& a, double rel_tol = 1e-14, int max_sweeps = 50);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace semmg
