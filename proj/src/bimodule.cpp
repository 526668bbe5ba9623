#include "qrwalk/bimodule.hpp"

namespace qrwalk {

double Bimodule::axiom_defect(const AlgebraTable& table) const {
  const Index m = algebra_dim;
  if (dim == 0) return 0.0;
  double worst = 0.0;
  Matrix left_unit = Matrix::Zero(dim, dim);
  Matrix right_unit = Matrix::Zero(dim, dim);
  for (Index i = 0; i < m; ++i) {
    left_unit += table.unit(i) * left[i];
    right_unit += table.unit(i) * right[i];
  }
  const Matrix id = Matrix::Identity(dim, dim);
  worst = std::max(worst, (left_unit - id).norm());
  worst = std::max(worst, (right_unit - id).norm());
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      Matrix left_prod = Matrix::Zero(dim, dim);
      Matrix right_prod = Matrix::Zero(dim, dim);
      for (Index k = 0; k < m; ++k) {
        const Complex c = table.left_mult[i](k, j);
        if (c != 0.0) {
          left_prod += c * left[k];
          right_prod += c * right[k];
        }
      }
      worst = std::max(worst, (left_prod - left[i] * left[j]).norm());
      worst = std::max(worst, (right_prod - right[j] * right[i]).norm());
      worst = std::max(worst, (left[i] * right[j] - right[j] * left[i]).norm());
    }
  return worst;
}

Bimodule bimodule_over_self(const AlgebraTable& table) {
  Bimodule out;
  out.algebra_dim = table.dim;
  out.dim = table.dim;
  out.left = table.left_mult;
  out.right.reserve(table.dim);
  for (Index i = 0; i < table.dim; ++i) out.right.push_back(table.right_mult(i));
  return out;
}

Bimodule bimodule_direct_sum(const std::vector<const Bimodule*>& parts) {
  Bimodule out;
  if (parts.empty()) return out;
  out.algebra_dim = parts[0]->algebra_dim;
  for (const Bimodule* b : parts) out.dim += b->dim;
  out.left.assign(out.algebra_dim, Matrix::Zero(out.dim, out.dim));
  out.right.assign(out.algebra_dim, Matrix::Zero(out.dim, out.dim));
  Index off = 0;
  for (const Bimodule* b : parts) {
    for (Index i = 0; i < out.algebra_dim; ++i) {
      out.left[i].block(off, off, b->dim, b->dim) = b->left[i];
      out.right[i].block(off, off, b->dim, b->dim) = b->right[i];
    }
    off += b->dim;
  }
  return out;
}

}  // namespace qrwalk
