#pragma once

#include "qrwalk/bimodule.hpp"
#include "qrwalk/gns.hpp"
#include "qrwalk/types.hpp"

#include <array>
#include <optional>
#include <vector>

namespace qrwalk {

/// Corners of E_L = B^a(A + M), in 2x2 block order over A + M:
///   [ A    M* ]
///   [ M  B^a(M) ]
/// The enum value encodes the block position (mu*2 + nu).
enum class Corner { A00 = 0, MStar01 = 1, M10 = 2, Ba11 = 3 };

inline constexpr std::array<Corner, 4> kCorners = {Corner::A00, Corner::MStar01, Corner::M10,
                                                   Corner::Ba11};

const char* corner_name(Corner c);
Corner dagger_corner(Corner c);

/// Target of a block product, when the inner indices match; nullopt when
/// the product vanishes structurally.
std::optional<Corner> corner_product(Corner a, Corner b);

/// One corner of E_L in its concrete matrix realization. Corner values:
///   A00:     d x d     (elements of A)
///   MStar01: d x D     (xi* for xi in M)
///   M10:     D x d     (elements of M)
///   Ba11:    D x D     (right-A-linear maps of M, extended by zero on the
///                       orthogonal complement of the reachable subspace)
/// with D = d * N_k. Corner products are then plain matrix products and the
/// dagger is the conjugate transpose.
struct CornerRep {
  Corner id = Corner::A00;
  Index rows = 0, cols = 0;
  std::vector<Matrix> basis;  // orthonormal under the Frobenius form
  Bimodule actions;

  Index dim() const { return static_cast<Index>(basis.size()); }
  Vector coords(const Matrix& value, double* residual = nullptr) const;
  Matrix realize(const Vector& coeffs) const;
};

class ELModule {
 public:
  const GnsData& gns() const { return gns_; }
  const StarAlgebra& algebra() const { return gns_.algebra(); }
  const CornerRep& corner(Corner c) const { return corners_[static_cast<int>(c)]; }

  /// pi(x) as a corner-11 value: (x (x) 1_k) restricted to the reachable
  /// subspace, zero elsewhere.
  Matrix pi_el(const Matrix& x) const;

  Matrix act_left(Corner c, const Matrix& x, const Matrix& value) const;
  Matrix act_right(Corner c, const Matrix& value, const Matrix& x) const;

  /// The unit of E_L, corner-wise: (1_A, 0, 0, pi(1)).
  Matrix unit(Corner c) const;

  /// Direct sum of the four corners, in enum order.
  Bimodule whole_bimodule() const;

  friend ELModule build_el(const GnsData&, double);

 private:
  explicit ELModule(GnsData gns) : gns_(std::move(gns)) {}
  GnsData gns_;
  std::array<CornerRep, 4> corners_;
};

ELModule build_el(const GnsData& gns, double tol = 1e-10);

/// psi^dag(x) := (psi(x*))* applied to a 1-cochain given by its values on
/// the algebra basis; the result is valued in the dagger corner.
std::vector<Matrix> dagger_cochain(const ELModule& el, const std::vector<Matrix>& values);

}  // namespace qrwalk
