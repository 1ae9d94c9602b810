#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace schur {

/// Dense row-major real matrix. Small (dimension <= 32) by intent; no
/// blocking, no expression templates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix ones(std::size_t n);
  static Matrix diag(std::span<const double> d);
  static Matrix diag(std::initializer_list<double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }

  Matrix transpose() const;
  double frobenius_norm() const;
  double max_abs() const;
  double trace() const;
  bool is_diagonal(double tol = 0.0) const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(double s, Matrix a);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix kronecker(const Matrix& a, const Matrix& b);
/// Tr(aᵀb), i.e. the sum of entrywise products.
double frobenius_inner(const Matrix& a, const Matrix& b);

/// (a + aᵀ)/2.
Matrix symmetrize(const Matrix& a);
double asymmetry(const Matrix& a);
/// ‖ab − ba‖_F.
double commutator_norm(const Matrix& a, const Matrix& b);

struct JacobiResult {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // columns, same order as eigenvalues
  int sweeps = 0;
  bool converged = false;
};

/// Cyclic Jacobi rotations on a symmetric matrix. Stops once the off-diagonal
/// Frobenius norm drops to 1e-12·(1 + ‖M‖_F) or after 100 sweeps.
JacobiResult jacobi_eigen(const Matrix& m, bool want_vectors = false);

std::vector<double> symmetric_eigenvalues(const Matrix& m);
double min_eigenvalue(const Matrix& m);

/// Orthonormal Q from the QR factorisation of a (modified Gram-Schmidt,
/// columns re-orthogonalised once).
Matrix orthonormal_basis(const Matrix& a);

}  // namespace schur
