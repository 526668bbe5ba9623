#pragma once

#include "qrwalk/star_algebra.hpp"
#include "qrwalk/types.hpp"

#include <vector>

namespace qrwalk {

/// Generator in Lindblad form,
///   L(x) = i[H, x] + sum_i (L_i* x L_i - (1/2){L_i* L_i, x})
///        = sum_i L_i* x L_i + G* x + x G,  G = -iH - (1/2) sum_i L_i* L_i,
/// so L(1) = 0 holds structurally.
class LindbladGenerator {
 public:
  LindbladGenerator(Matrix hamiltonian, std::vector<Matrix> lindblad_ops);

  Index dim() const { return hamiltonian_.rows(); }
  Index multiplicity() const { return static_cast<Index>(lindblad_ops_.size()); }
  const Matrix& hamiltonian() const { return hamiltonian_; }
  const std::vector<Matrix>& lindblad_ops() const { return lindblad_ops_; }
  const Matrix& g() const { return g_; }

  Matrix apply(const Matrix& x) const;

  /// Stacked Lindblad block R : h -> h (x) k, with R(a*N + i, b) = (L_i)_{ab}.
  Matrix stacked_ops() const;

 private:
  Matrix hamiltonian_;
  std::vector<Matrix> lindblad_ops_;
  Matrix g_;
};

/// L applied to an algebra element; errors when L(x) leaves the algebra.
Vector lindblad_apply(const StarAlgebra& alg, const LindbladGenerator& gen, const Vector& x);

/// Matrix of L on algebra coefficients (m x m).
Matrix generator_matrix(const StarAlgebra& alg, const LindbladGenerator& gen);

/// Max membership residual of L(B_j) over the basis.
double invariance_defect(const StarAlgebra& alg, const LindbladGenerator& gen);

}  // namespace qrwalk
