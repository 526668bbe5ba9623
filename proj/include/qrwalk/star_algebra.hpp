#pragma once

#include "qrwalk/types.hpp"

#include <optional>
#include <vector>

namespace qrwalk {

/// Multiplication data of a finite-dimensional unital algebra over a fixed
/// basis. Sufficient for Hochschild cohomology; no star operation and no
/// matrix realization required (cohomology-only mode).
struct AlgebraTable {
  Index dim = 0;                   // m
  std::vector<Matrix> left_mult;   // left_mult[i](k, j) = c_{ij}^k
  Vector unit;                     // coefficients of 1

  Vector multiply(const Vector& a, const Vector& b) const;
  Matrix right_mult(Index i) const;  // matrix of x -> x B_i on coefficients
};

/// The dual numbers C[e]/(e^2) over the basis {1, e}. Standard negative
/// control: H^2(A, A) = 1.
AlgebraTable dual_numbers();

/// A finite-dimensional unital *-subalgebra of d x d complex matrices,
/// stored as an orthonormal basis under the trace inner product
/// <a, b> = Tr(a* b), together with structure constants and star table.
class StarAlgebra {
 public:
  /// Smallest unital *-closed span containing the generators. Closure by
  /// alternating products/adjoints until the span dimension stabilizes.
  static StarAlgebra build(const std::vector<Matrix>& generators, double tol = 1e-9);

  static StarAlgebra full_matrix(Index d);
  static StarAlgebra diagonal(Index n);
  static StarAlgebra direct_sum(const std::vector<Index>& blocks);

  Index dim() const { return table_.dim; }
  Index ambient_dim() const { return ambient_dim_; }
  const std::vector<Matrix>& basis() const { return basis_; }
  const AlgebraTable& table() const { return table_; }
  const Matrix& star_table() const { return star_table_; }
  const Vector& unit_coeffs() const { return table_.unit; }

  /// Coefficients of x in the basis (trace projection). The optional
  /// residual reports the distance from the span.
  Vector coords(const Matrix& x, double* residual = nullptr) const;
  Matrix to_matrix(const Vector& coeffs) const;
  bool contains(const Matrix& x, double tol = 1e-10) const;

  Vector multiply(const Vector& a, const Vector& b) const { return table_.multiply(a, b); }
  Vector adjoint(const Vector& a) const;
  Vector unit() const { return table_.unit; }

  /// Basis of {z : z B_i = B_i z for all i}, as coefficient vectors.
  std::vector<Vector> center() const;

  /// True when the span is all of M_d.
  bool is_full() const { return table_.dim == ambient_dim_ * ambient_dim_; }

  /// Stable hash of the basis data, used to tie serialized artifacts to
  /// the algebra they were computed from.
  std::uint64_t content_hash() const;

 private:
  StarAlgebra() = default;
  Index ambient_dim_ = 0;
  std::vector<Matrix> basis_;
  AlgebraTable table_;
  Matrix star_table_;
};

/// Element of a StarAlgebra as a coefficient vector plus its algebra
/// handle. Operations across distinct handles are rejected.
struct AlgebraElement {
  const StarAlgebra* algebra = nullptr;
  Vector coeffs;

  Matrix to_matrix() const { return algebra->to_matrix(coeffs); }
  AlgebraElement adjoint() const { return {algebra, algebra->adjoint(coeffs)}; }
};

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement unit_element(const StarAlgebra& alg);

}  // namespace qrwalk
