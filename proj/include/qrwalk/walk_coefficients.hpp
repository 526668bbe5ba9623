#pragma once

#include "qrwalk/el_module.hpp"
#include "qrwalk/hochschild.hpp"
#include "qrwalk/types.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace qrwalk {

/// Residuals recorded while extending a family by one level, indexed by
/// corner enum value.
struct LevelRecord {
  Index level = 0;
  std::array<double, 4> cocycle_residual{};     // of phi, before solving
  std::array<double, 4> solve_residual{};       // after symmetrization
  std::array<double, 4> phi_dagger_defect{};    // (phi(y*,x*))* vs phi(x,y)
};

struct RelationReport {
  double max_residual = 0.0;
  double dagger_defect = 0.0;
  std::vector<std::array<double, 4>> by_level;  // [n-1][corner]
};

/// The coefficient family theta_{mu nu}^{(n)} of a formal power-series
/// homomorphism into E_L, built level by level:
///   seeds   theta_00^{(0)} = id, theta_00^{(1)} = L, theta_10^{(1)} = delta,
///           theta_01^{(1)} = delta^dag, theta_11^{(1)} = pi;
///   level n corner order 11 -> 10 -> 01 -> 00, each step assembling the
///   quadratic right-hand side from lower levels, asserting it is a
///   2-cocycle, solving d theta = phi at minimum norm, and symmetrizing
///   corners 11 and 00; corner 01 is the dagger of corner 10 by definition.
/// Vanishing of H^2(A, corner) is what makes the solves succeed; an
/// obstruction surfaces as ObstructionError.
class ThetaFamily {
 public:
  static ThetaFamily seed(ELModule el);

  void extend(Index level);   // level must be order() + 1
  void extend_to(Index order);

  Index order() const { return order_; }
  const ELModule& el() const { return el_; }
  const StarAlgebra& algebra() const { return el_.algebra(); }

  bool has(Index n, Corner c) const;
  const std::vector<Matrix>& theta(Index n, Corner c) const;
  Matrix eval(Index n, Corner c, const Vector& xcoeffs) const;

  /// Right-hand side phi_{mu nu}^{(n)} on basis pairs, index i*m + j.
  std::vector<Matrix> phi_rhs(Corner c, Index n) const;

  const std::vector<LevelRecord>& records() const { return records_; }

  /// Max over levels and basis elements of the dagger-symmetry defect
  /// || theta_{mu nu}^{(n)}(x*) - (theta_{nu mu}^{(n)}(x))* ||.
  double dagger_defect() const;

  double cocycle_tol = 1e-9;
  double solve_tol = 1e-9;

  friend ThetaFamily load_theta_family(const ELModule& el, const std::string& path);

 private:
  explicit ThetaFamily(ELModule el) : el_(std::move(el)) {}
  std::vector<Matrix>& slot(Index n, Corner c);
  const CochainComplex& complex_for(Corner c) const;

  ELModule el_;
  Index order_ = 0;
  // theta_[n][corner]; level 0 only carries corner 00 (the identity).
  std::vector<std::array<std::vector<Matrix>, 4>> theta_;
  std::vector<LevelRecord> records_;
  mutable std::array<std::shared_ptr<CochainComplex>, 4> complexes_;
};

/// Residuals of the graded product relations and the dagger symmetry for
/// every level n <= order, max over basis pairs, operator norm.
RelationReport verify_relations(const ThetaFamily& family);

/// The four corner series at a concrete step size:
///   beta_00 = sum h^n theta_00^{(n)},        n = 0..N
///   beta_10 = sum h^{n-1/2} theta_10^{(n)},  n = 1..N   (same for 01)
///   beta_11 = sum h^{n-1} theta_11^{(n)},    n = 1..N.
struct BetaBlock {
  double h = 0.0;
  Index order = 0;
  ELModule el;
  std::array<std::vector<Matrix>, 4> values;  // per corner, per basis element

  Matrix eval(Corner c, const Vector& xcoeffs) const;
};

BetaBlock assemble_beta(const ThetaFamily& family, double h, Index order);

/// || beta_{mu nu}(xy) - sum_eta beta_{mu eta}(x) beta_{eta nu}(y) || per
/// corner (operator norm).
std::array<double, 4> multiplicativity_defect(const BetaBlock& beta, const Vector& x,
                                              const Vector& y);
std::array<double, 4> max_multiplicativity_defect(const BetaBlock& beta);

/// Corner-wise dagger-consistency defect of beta at the given h.
double beta_dagger_defect(const BetaBlock& beta);

/// || beta(1) - unit of E_L ||, corner-wise max. Unitality is expected of
/// the minimum-norm solution but only reported, never enforced.
double beta_unit_defect(const BetaBlock& beta);

/// Text serialization of a family (JSON): algebra hash, GNS basis, order,
/// per-level dense coefficient tensors and residual records. Loading
/// verifies the context hash; round-trips are exact.
void save_theta_family(const ThetaFamily& family, const std::string& path);
ThetaFamily load_theta_family(const ELModule& el, const std::string& path);

}  // namespace qrwalk
