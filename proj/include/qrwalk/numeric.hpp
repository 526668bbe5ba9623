#pragma once

#include "qrwalk/types.hpp"

namespace qrwalk {

/// Relative threshold for numerical rank decisions, applied to singular
/// values as sigma >= kRankRelTol * sigma_max.
inline constexpr double kRankRelTol = 1e-10;

/// Singular values within this factor of the threshold (on either side)
/// make a rank decision ambiguous.
inline constexpr double kRankGapFactor = 10.0;

struct RankDecision {
  Index rank = 0;
  double scale = 0.0;           // largest singular value
  double smallest_kept = 0.0;   // 0 when rank == 0
  double largest_dropped = 0.0; // 0 when full rank
  bool ambiguous = false;
};

/// Rank of a descending singular-value list at a relative threshold, with
/// the gap test of the ambiguity contract. `scale` is a floor on the
/// reference magnitude: singular values are compared against
/// rel_tol * max(sigma_max, scale), so a matrix that is pure roundoff
/// relative to its natural scale ranks as zero.
RankDecision decide_rank(const RealVector& singular_values, double rel_tol = kRankRelTol,
                         double gap_factor = kRankGapFactor, double scale = 0.0);

/// SVD rank; throws RankAmbiguityError when the spectrum gives no clean gap.
Index svd_rank(const Matrix& a, double rel_tol = kRankRelTol, double scale = 0.0);

struct SpanBasis {
  Matrix q;  // orthonormal columns spanning the column space
  Index rank = 0;
};

/// Orthonormal basis (left singular vectors) of the column span.
/// Deterministic for fixed input; throws RankAmbiguityError on unclear rank.
SpanBasis orthonormal_span(const Matrix& columns, double rel_tol = kRankRelTol,
                           double scale = 0.0);

/// Orthonormal basis of the right nullspace {x : a x = 0}.
Matrix nullspace(const Matrix& a, double rel_tol = kRankRelTol, double scale = 0.0);

/// Minimum-norm least-squares solution via SVD pseudo-inverse.
Matrix min_norm_solve(const Matrix& a, const Matrix& rhs, double rel_tol = kRankRelTol);

/// Rank of a Hermitian PSD matrix by diagonally pivoted Cholesky.
/// `sigma_rel_tol` is expressed at singular-value level; it is squared
/// internally and floored at the roundoff resolution of the Gram form.
/// Throws RankAmbiguityError when accepted and rejected pivots are not
/// separated by a clear gap. The input is consumed.
Index psd_rank(Matrix gram, double sigma_rel_tol = kRankRelTol);

/// Matrix exponential, scaling-and-squaring with a degree-13 Pade
/// approximant. Accuracy near machine precision for any finite input.
Matrix expm(const Matrix& a);

}  // namespace qrwalk
