#pragma once

#include "qrwalk/lindblad.hpp"
#include "qrwalk/star_algebra.hpp"
#include "qrwalk/types.hpp"
#include "qrwalk/walk_coefficients.hpp"

#include <functional>
#include <vector>

namespace qrwalk {

/// One interaction slot k-hat = C Omega + k, dim 1 + N_k, vacuum first.
struct ToySlot {
  Index multiplicity = 0;
  Index dim() const { return 1 + multiplicity; }
  Vector vacuum() const;
};

/// Tensor coordinates are h-major throughout: h (x) k flattens as
/// a * N_k + i and h (x) k-hat as a * (1 + N_k) + s with slot index s = 0
/// on the vacuum. Selection embeddings of the two slot blocks:
Matrix embed_vacuum_block(Index d, Index nk);  // h        -> h (x) k-hat
Matrix embed_particle_block(Index d, Index nk);  // h (x) k -> h (x) k-hat

/// Compressed basic operator placing the payload in block (mu, nu) of the
/// slot decomposition {Omega, k}. Payload shapes: 00: d x d, 01: d x dN_k,
/// 10: dN_k x d, 11: dN_k x dN_k (the Corner enum encodes mu*2 + nu).
Matrix n_operator(Corner kind, const Matrix& payload, Index d, Index nk);

struct NRelationReport {
  double adjoint_defect = 0.0;
  double product_defect = 0.0;
  double sum_defect = 0.0;
  double max() const { return std::max({adjoint_defect, product_defect, sum_defect}); }
};

/// Exercises the adjoint, product (including annihilating index pairs) and
/// block-sum relations of the compressed operators on random payloads.
NRelationReport verify_n_relations(Index d, Index nk, int samples, std::uint64_t seed);

/// A one-step block homomorphism A -> A (x) B(k-hat), realized as concrete
/// operators on h (x) k-hat, together with its vacuum (00) compression as a
/// map on algebra coefficients.
class BlockHom {
 public:
  BlockHom(StarAlgebra algebra, Index nk, double h, std::vector<Matrix> basis_ops,
           Matrix beta00, std::string kind);

  const StarAlgebra& algebra() const { return algebra_; }
  Index nk() const { return nk_; }
  double h() const { return h_; }
  Index hat_dim() const { return algebra_.ambient_dim() * (1 + nk_); }
  const std::string& kind() const { return kind_; }

  Matrix apply(const Vector& xcoeffs) const;
  Matrix apply_matrix(const Matrix& x) const;
  const Matrix& beta00_matrix() const { return beta00_; }
  const std::vector<Matrix>& basis_ops() const { return basis_ops_; }

  double homomorphism_defect(const Vector& x, const Vector& y) const;
  double adjoint_defect() const;  // beta(x*) vs beta(x)* over the basis

 private:
  StarAlgebra algebra_;
  Index nk_ = 0;
  double h_ = 0.0;
  std::vector<Matrix> basis_ops_;
  Matrix beta00_;
  std::string kind_;
};

/// Truncated-series constructor (formal homomorphism up to the family
/// order; multiplicativity defect obeys the slope law of the series).
BlockHom beta_truncated(const BetaBlock& beta);
BlockHom beta_truncated(const ThetaFamily& family, double h, Index order);

/// Polar unitarization of the one-step block matrix
///   [ 1 + hG   -sqrt(h) R* ]
///   [ sqrt(h) R      1     ]
/// on h (x) k-hat.
Matrix walk_step_unitary(const StarAlgebra& algebra, const LindbladGenerator& gen, double h);

/// Exact constructor: conjugation of x (x) 1 by the polar step unitary.
/// Requires the full matrix algebra.
BlockHom beta_unitary(const StarAlgebra& algebra, const LindbladGenerator& gen, double h);

inline constexpr std::size_t kDefaultWalkMemoryCap = std::size_t{2} << 30;

struct WalkOperator {
  Index steps = 0;
  double h = 0.0;
  Index system_dim = 0;
  Index slot_dim = 0;
  Matrix op;  // on h (x) k-hat^{(x) steps}
};

/// The walk j_n as a linear map on the algebra, built by appending one
/// slot per step: j_0 = id, j_k = (j_{k-1} (x) id_slot) o beta.
class Walk {
 public:
  Walk(const BlockHom& beta, Index steps, std::size_t memory_cap_bytes = kDefaultWalkMemoryCap);

  Index steps() const { return steps_; }
  Index dim() const;
  Matrix apply(const Vector& xcoeffs) const;
  WalkOperator operator()(const Matrix& x) const;

 private:
  const StarAlgebra algebra_;
  Index steps_ = 0;
  Index slot_dim_ = 1;
  double h_ = 0.0;
  std::vector<Matrix> basis_ops_;
};

WalkOperator walk(const BlockHom& beta, const Matrix& x, Index steps,
                  std::size_t memory_cap_bytes = kDefaultWalkMemoryCap);

/// Vacuum expectation of the walk after `steps` steps: the 00-block applied
/// repeatedly, no tensor space required.
Vector vacuum_expectation(const BlockHom& beta, const Vector& xcoeffs, Index steps);

/// Full-space route for cross-checking: compress j_n(x) with vacuum slots.
Vector vacuum_expectation_full(const BlockHom& beta, const Vector& xcoeffs, Index steps,
                               std::size_t memory_cap_bytes = kDefaultWalkMemoryCap);

/// Matrix of L on algebra coefficients and its semigroup e^{tL}.
Matrix semigroup_matrix(const StarAlgebra& algebra, const LindbladGenerator& gen);
Matrix semigroup(const StarAlgebra& algebra, const LindbladGenerator& gen, double t);
Matrix semigroup_apply(const StarAlgebra& algebra, const LindbladGenerator& gen, double t,
                       const Matrix& x);

struct ConvergenceRow {
  double h = 0.0;
  Index n = 0;
  Index basis_index = 0;
  double error = 0.0;
  double ratio = 0.0;  // error at previous (larger) h over this error; NaN on first
};

/// Compares the iterated 00-block against e^{tL} on every basis element for
/// each step size. `beta00_of_h` supplies the one-step coefficient map.
std::vector<ConvergenceRow> convergence_report(const StarAlgebra& algebra,
                                               const LindbladGenerator& gen,
                                               const std::function<Matrix(double)>& beta00_of_h,
                                               double t, const std::vector<double>& h_list);

/// Slot-wise compression of an exponential vector: system vector plus one
/// (1, sqrt(h) f_k) slot per step. Exposed as a helper; unnormalized slot
/// vectors are allowed.
struct ProductState {
  Vector system;
  std::vector<Vector> slots;
};

ProductState product_state_from_samples(const Vector& system, const std::vector<Vector>& samples,
                                        double h);
Vector state_vector(const ProductState& state);

}  // namespace qrwalk
