#pragma once

#include "qrwalk/bimodule.hpp"
#include "qrwalk/star_algebra.hpp"
#include "qrwalk/types.hpp"

#include <Eigen/Sparse>

#include <array>
#include <mutex>
#include <optional>

namespace qrwalk {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// A degree-n multilinear map A x ... x A -> N over fixed bases, stored as
/// a dense p x m^n array of coefficient columns. The column of the tuple
/// (i_1, ..., i_n) sits at index ((i_1 m + i_2) m + ...) m + i_n.
struct Cochain {
  Index degree = 0;
  Index p = 0;
  Index m = 0;
  Matrix values;

  static Cochain zero(Index degree, Index p, Index m);
  Index tuple_cols() const { return values.cols(); }
  Eigen::Map<const Vector> vec() const {
    return Eigen::Map<const Vector>(values.data(), values.size());
  }
};

/// The Hochschild cochain complex of an algebra (by multiplication table)
/// with coefficients in a bimodule, up to degree 3. Sign convention, fixed
/// by the derived relations of the coefficient induction:
///   degree 0: (d n)(x)       = x.n - n.x
///   degree 1: (d f)(x, y)    = f(xy) - x.f(y) - f(x).y
///   degree 2: (d g)(x, y, z) = x.g(y, z) - g(xy, z) + g(x, yz) - g(x, y).z
/// These compose to zero and satisfy the cup-product Leibniz rule
/// d(a ^ c) = a ^ dc - da ^ c for 1-cochains.
///
/// Coboundary matrices and ranks are cached; construction under the lock is
/// idempotent, concurrent readers are safe.
class CochainComplex {
 public:
  CochainComplex(AlgebraTable table, Bimodule module);

  const AlgebraTable& table() const { return table_; }
  const Bimodule& module() const { return module_; }
  Index cochain_dim(Index degree) const;

  /// Matrix of the coboundary C^degree -> C^(degree+1); degree <= 2.
  const SparseMatrix& coboundary_matrix(Index degree) const;

  /// Dense evaluation; input degree <= 2 (output degree up to 3).
  Cochain coboundary(const Cochain& f) const;

  /// (residual <= tol, residual), residual = max column norm of the
  /// coboundary over basis tuples.
  std::pair<bool, double> is_cocycle(const Cochain& phi, double tol) const;

  /// Minimum-Frobenius-norm theta with d theta = phi (SVD pseudo-inverse).
  /// Throws ObstructionError carrying the residual and dim H^2 when the
  /// equation has no solution at `residual_tol`.
  Cochain solve_coboundary(const Cochain& phi, double residual_tol = 1e-9) const;

  Index rank(Index degree) const;
  Index cohomology_dim(Index degree) const;  // degree <= 2

  struct DegreeRow {
    Index degree = 0, dim_c = 0, rank = 0, kernel = 0, h = 0;
  };
  DegreeRow degree_row(Index degree) const;

 private:
  SparseMatrix build_coboundary(Index degree) const;
  Index compute_rank(Index degree) const;

  AlgebraTable table_;
  Bimodule module_;
  mutable std::mutex mu_;
  mutable std::array<std::optional<SparseMatrix>, 3> cob_;
  mutable std::array<std::optional<Index>, 3> rank_;
};

/// One-shot convenience wrappers.
Index cohomology_dim(const AlgebraTable& table, const Bimodule& module, Index degree);

}  // namespace qrwalk
