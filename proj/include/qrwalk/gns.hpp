#pragma once

#include "qrwalk/lindblad.hpp"
#include "qrwalk/star_algebra.hpp"
#include "qrwalk/types.hpp"

#include <vector>

namespace qrwalk {

/// The GNS bimodule (M, pi, delta) of a Lindblad generator, realized inside
/// B(h, h (x) k):
///   delta(x) = stack of (x L_i - L_i x),   pi(x) = x (x) 1_k,
///   <xi, eta> = xi* eta in A,
/// and M is the right-A-linear span of delta(A), carried by an orthonormal
/// basis under the trace form. The sign convention of delta matches the
/// block discretization used by the toy Fock walk.
class GnsData {
 public:
  const StarAlgebra& algebra() const { return algebra_; }
  const LindbladGenerator& generator() const { return generator_; }

  Index dim_m() const { return static_cast<Index>(m_basis_.size()); }
  Index multiplicity() const { return generator_.multiplicity(); }
  Index fiber_dim() const { return algebra_.ambient_dim() * generator_.multiplicity(); }

  const std::vector<Matrix>& m_basis() const { return m_basis_; }

  Matrix delta(const Matrix& x) const;
  Matrix delta_dagger(const Matrix& x) const;  // delta(x*)*
  Matrix pi(const Matrix& x) const;            // on h (x) k
  Matrix inner(const Matrix& xi, const Matrix& eta) const { return xi.adjoint() * eta; }

  Vector m_coords(const Matrix& xi, double* residual = nullptr) const;
  Matrix m_realize(const Vector& coeffs) const;

  /// Orthogonal projection of h (x) k onto the reachable subspace
  /// V = span{ xi u : xi in M, u in h }.
  const Matrix& reach_projection() const { return p_reach_; }

  /// Max GNS identity residual over basis pairs, recorded at construction.
  double identity_residual() const { return identity_residual_; }

  friend GnsData build_gns(const StarAlgebra&, const LindbladGenerator&, double);

 private:
  GnsData(StarAlgebra alg, LindbladGenerator gen)
      : algebra_(std::move(alg)), generator_(std::move(gen)) {}
  StarAlgebra algebra_;
  LindbladGenerator generator_;
  std::vector<Matrix> m_basis_;
  Matrix p_reach_;
  double identity_residual_ = 0.0;
};

GnsData build_gns(const StarAlgebra& alg, const LindbladGenerator& gen, double tol = 1e-10);

/// || L(xy) - x L(y) - L(x) y - delta^dag(x) delta(y) ||  (operator norm).
double gns_defect(const GnsData& gns, const Matrix& x, const Matrix& y);

}  // namespace qrwalk
