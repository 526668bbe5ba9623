#pragma once

#include "qrwalk/star_algebra.hpp"
#include "qrwalk/types.hpp"

#include <vector>

namespace qrwalk {

/// A finite-dimensional A-A bimodule in coefficient form: action tensors of
/// each algebra basis element on a fixed basis of the carrier.
struct Bimodule {
  Index algebra_dim = 0;          // m
  Index dim = 0;                  // p
  std::vector<Matrix> left;       // m matrices, p x p
  std::vector<Matrix> right;      // m matrices, p x p

  /// Max violation of the bimodule axioms ((xy).n = x.(y.n), n.(xy) =
  /// (n.x).y, unit acts as identity, actions commute) over basis tuples.
  double axiom_defect(const AlgebraTable& table) const;
};

/// A as a bimodule over itself.
Bimodule bimodule_over_self(const AlgebraTable& table);

/// Block-diagonal direct sum, in the order given.
Bimodule bimodule_direct_sum(const std::vector<const Bimodule*>& parts);

}  // namespace qrwalk
