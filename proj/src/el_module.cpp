#include "qrwalk/el_module.hpp"

#include "qrwalk/numeric.hpp"

#include <sstream>

namespace qrwalk {

const char* corner_name(Corner c) {
  switch (c) {
    case Corner::A00: return "A";
    case Corner::MStar01: return "M*";
    case Corner::M10: return "M";
    case Corner::Ba11: return "B^a(M)";
  }
  return "?";
}

Corner dagger_corner(Corner c) {
  switch (c) {
    case Corner::A00: return Corner::A00;
    case Corner::MStar01: return Corner::M10;
    case Corner::M10: return Corner::MStar01;
    case Corner::Ba11: return Corner::Ba11;
  }
  return c;
}

std::optional<Corner> corner_product(Corner a, Corner b) {
  const int mu = static_cast<int>(a) >> 1;
  const int nu = static_cast<int>(a) & 1;
  const int eta = static_cast<int>(b) >> 1;
  const int xi = static_cast<int>(b) & 1;
  if (nu != eta) return std::nullopt;
  return static_cast<Corner>((mu << 1) | xi);
}

Vector CornerRep::coords(const Matrix& value, double* residual) const {
  const Index p = dim();
  Vector c(p);
  for (Index a = 0; a < p; ++a) c(a) = basis[a].conjugate().cwiseProduct(value).sum();
  if (residual) *residual = (value - realize(c)).norm();
  return c;
}

Matrix CornerRep::realize(const Vector& coeffs) const {
  Matrix out = Matrix::Zero(rows, cols);
  for (Index a = 0; a < dim(); ++a) out += coeffs(a) * basis[a];
  return out;
}

Matrix ELModule::pi_el(const Matrix& x) const {
  return gns_.pi(x) * gns_.reach_projection();
}

Matrix ELModule::act_left(Corner c, const Matrix& x, const Matrix& value) const {
  switch (c) {
    case Corner::A00:
    case Corner::MStar01: return x * value;
    case Corner::M10:
    case Corner::Ba11: return gns_.pi(x) * value;
  }
  return value;
}

Matrix ELModule::act_right(Corner c, const Matrix& value, const Matrix& x) const {
  switch (c) {
    case Corner::A00:
    case Corner::M10: return value * x;
    case Corner::MStar01:
    case Corner::Ba11: return value * gns_.pi(x);
  }
  return value;
}

Matrix ELModule::unit(Corner c) const {
  const Index d = algebra().ambient_dim();
  const Index fiber = gns_.fiber_dim();
  switch (c) {
    case Corner::A00: return Matrix::Identity(d, d);
    case Corner::MStar01: return Matrix::Zero(d, fiber);
    case Corner::M10: return Matrix::Zero(fiber, d);
    case Corner::Ba11: return gns_.reach_projection();
  }
  return Matrix();
}

Bimodule ELModule::whole_bimodule() const {
  std::vector<const Bimodule*> parts;
  for (Corner c : kCorners) parts.push_back(&corner(c).actions);
  return bimodule_direct_sum(parts);
}

namespace {

Vector vec_of(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

}  // namespace

ELModule build_el(const GnsData& gns, double tol) {
  ELModule el(gns);
  const StarAlgebra& alg = gns.algebra();
  const Index d = alg.ambient_dim();
  const Index fiber = gns.fiber_dim();
  const Index p = gns.dim_m();

  auto& c00 = el.corners_[static_cast<int>(Corner::A00)];
  auto& c01 = el.corners_[static_cast<int>(Corner::MStar01)];
  auto& c10 = el.corners_[static_cast<int>(Corner::M10)];
  auto& c11 = el.corners_[static_cast<int>(Corner::Ba11)];

  c00 = {Corner::A00, d, d, alg.basis(), {}};
  c10 = {Corner::M10, fiber, d, gns.m_basis(), {}};
  c01.id = Corner::MStar01;
  c01.rows = d;
  c01.cols = fiber;
  for (const Matrix& xi : gns.m_basis()) c01.basis.push_back(xi.adjoint());

  // B^a(M), extended by zero off the reachable subspace: all S in B(h (x) k)
  // with S M in M and S = 0 on the complement of the reachable subspace.
  // Right-A-linearity of xi -> S xi is automatic.
  c11.id = Corner::Ba11;
  c11.rows = fiber;
  c11.cols = fiber;
  if (p > 0) {
    Matrix q_m(fiber * d, p);
    for (Index a = 0; a < p; ++a) q_m.col(a) = vec_of(gns.m_basis()[a]);
    const Matrix id_fd = Matrix::Identity(fiber * d, fiber * d);
    const Matrix complement_m = id_fd - q_m * q_m.adjoint();
    Matrix v_perp = orthonormal_span(Matrix::Identity(fiber, fiber) - gns.reach_projection(),
                                     kRankRelTol, 1.0)
                        .q;

    const Index n_rows = p * fiber * d + v_perp.cols() * fiber;
    Matrix constraints(n_rows, fiber * fiber);
    Index row = 0;
    for (Index a = 0; a < p; ++a) {
      constraints.middleRows(row, fiber * d) =
          complement_m * kron(gns.m_basis()[a].transpose(), Matrix::Identity(fiber, fiber));
      row += fiber * d;
    }
    for (Index b = 0; b < v_perp.cols(); ++b) {
      constraints.middleRows(row, fiber) =
          kron(v_perp.col(b).transpose(), Matrix::Identity(fiber, fiber));
      row += fiber;
    }
    Matrix null = nullspace(constraints, kRankRelTol, 1.0);
    if (null.cols() == 0)
      throw InvariantError(
          "build_EL: right-linearity solution space is empty although pi(1) qualifies; "
          "check rank tolerances");
    for (Index j = 0; j < null.cols(); ++j)
      c11.basis.push_back(Eigen::Map<const Matrix>(null.col(j).data(), fiber, fiber));
  }

  // Action tensors of each corner over the algebra basis.
  const Index m = alg.dim();
  for (Corner cn : kCorners) {
    CornerRep& rep = el.corners_[static_cast<int>(cn)];
    const Index pc = rep.dim();
    rep.actions.algebra_dim = m;
    rep.actions.dim = pc;
    rep.actions.left.assign(m, Matrix::Zero(pc, pc));
    rep.actions.right.assign(m, Matrix::Zero(pc, pc));
    for (Index i = 0; i < m; ++i) {
      const Matrix& bi = alg.basis()[i];
      for (Index a = 0; a < pc; ++a) {
        double rl = 0.0, rr = 0.0;
        rep.actions.left[i].col(a) = rep.coords(el.act_left(cn, bi, rep.basis[a]), &rl);
        rep.actions.right[i].col(a) = rep.coords(el.act_right(cn, rep.basis[a], bi), &rr);
        if (std::max(rl, rr) > tol) {
          std::ostringstream os;
          os << "build_EL: corner " << corner_name(cn)
             << " is not closed under the bimodule actions (residual " << std::max(rl, rr)
             << ")";
          throw InvariantError(os.str());
        }
      }
    }
    double axioms = rep.actions.axiom_defect(alg.table());
    if (axioms > tol) {
      std::ostringstream os;
      os << "build_EL: bimodule axioms fail on corner " << corner_name(cn) << " (defect "
         << axioms << ")";
      throw InvariantError(os.str());
    }
  }
  return el;
}

std::vector<Matrix> dagger_cochain(const ELModule& el, const std::vector<Matrix>& values) {
  const StarAlgebra& alg = el.algebra();
  const Matrix& star = alg.star_table();
  const Index m = alg.dim();
  if (static_cast<Index>(values.size()) != m)
    throw InvariantError("dagger_cochain: one value per basis element required");
  std::vector<Matrix> out(m);
  for (Index j = 0; j < m; ++j) {
    Matrix acc = Matrix::Zero(values[0].cols(), values[0].rows());
    for (Index k = 0; k < m; ++k) {
      const Complex s = star(k, j);
      if (s != 0.0) acc += std::conj(s) * values[k].adjoint();
    }
    out[j] = std::move(acc);
  }
  return out;
}

}  // namespace qrwalk
