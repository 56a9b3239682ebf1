#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "ascent/vec.hpp"

namespace ascent {

// Dense real symmetric matrix. The (i,j) and (j,i) slots always hold the
// same stored value, so symmetry is exact by construction, never approximate.
// Units are context dependent; estimation code holds information in 1/m^2.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(std::size_t dim);  // zero matrix

  static SymMat identity(std::size_t dim);
  static SymMat diag(std::initializer_list<double> values);
  static SymMat diag(const std::vector<double>& values);
  // 2x2 [[a, b], [b, c]]
  static SymMat sym2(double a, double b, double c);
  // outer product scale * v v^T
  static SymMat outer2(double scale, const Vec2& v);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  void set(std::size_t i, std::size_t j, double value);

  SymMat& operator+=(const SymMat& other);
  SymMat& operator-=(const SymMat& other);
  SymMat& operator*=(double scale);
  friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
  friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
  friend SymMat operator*(double s, SymMat a) { return a *= s; }

  Vec2 apply2(const Vec2& v) const;  // M v, dim 2 only
  double trace() const;
  double frob_norm() const;
  bool finite() const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// Eigendecomposition of a symmetric matrix: values sorted descending,
// orthonormal vectors stored column-major, each column sign-fixed so that
// its first component of nonnegligible magnitude is positive.
struct EigDecomp {
  std::vector<double> values;
  std::vector<double> vectors;  // column-major: entry (row i, col k) = vectors[k*dim + i]
  std::size_t dim = 0;

  double vector_entry(std::size_t row, std::size_t col) const { return vectors[col * dim + row]; }
};

// Closed form for dim 2, cyclic Jacobi (tolerance 1e-12, 100 sweeps) above.
// Throws std::invalid_argument on non-finite input.
EigDecomp sym_eig(const SymMat& m);

// Rebuild sum_k values[k] * e_k e_k^T (values optionally overridden).
SymMat reconstruct(const EigDecomp& eig);
SymMat reconstruct(const EigDecomp& eig, const std::vector<double>& values);

// Euclidean projection onto the positive semidefinite cone: clamp negative
// eigenvalues to zero in the eigenbasis.
SymMat project_psd(const SymMat& m);

// Frobenius norm of the PSD part, sqrt(sum_i max(lambda_i, 0)^2); zero iff
// the matrix is negative semidefinite. The scalar constraint-violation
// measure used throughout the planner.
double violation_norm(const SymMat& m);

// Tr(A B) for symmetric A, B of equal dimension.
double frob_inner(const SymMat& a, const SymMat& b);

double min_eigenvalue(const SymMat& m);

// Inverse via eigendecomposition; requires min eigenvalue >= min_eig.
// Throws std::domain_error when (numerically) singular.
SymMat inverse_spd(const SymMat& m, double min_eig = 1e-12);

// Solve M x = b for 2x2 symmetric positive definite M.
Vec2 solve_spd2(const SymMat& m, const Vec2& b, double min_eig = 1e-12);

}  // namespace ascent
