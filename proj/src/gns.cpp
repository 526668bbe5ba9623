#include "qrwalk/gns.hpp"

#include "qrwalk/numeric.hpp"

#include <sstream>

namespace qrwalk {

Matrix GnsData::delta(const Matrix& x) const {
  const Index d = algebra_.ambient_dim();
  const Index nk = generator_.multiplicity();
  Matrix out(d * nk, d);
  const auto& ops = generator_.lindblad_ops();
  for (Index i = 0; i < nk; ++i) {
    Matrix block = x * ops[i] - ops[i] * x;
    for (Index a = 0; a < d; ++a) out.row(a * nk + i) = block.row(a);
  }
  return out;
}

Matrix GnsData::delta_dagger(const Matrix& x) const {
  return delta(x.adjoint()).adjoint();
}

Matrix GnsData::pi(const Matrix& x) const {
  return kron(x, Matrix::Identity(generator_.multiplicity(), generator_.multiplicity()));
}

Vector GnsData::m_coords(const Matrix& xi, double* residual) const {
  const Index p = dim_m();
  Vector c(p);
  for (Index a = 0; a < p; ++a) c(a) = m_basis_[a].conjugate().cwiseProduct(xi).sum();
  if (residual) *residual = (xi - m_realize(c)).norm();
  return c;
}

Matrix GnsData::m_realize(const Vector& coeffs) const {
  Matrix out = Matrix::Zero(fiber_dim(), algebra_.ambient_dim());
  for (Index a = 0; a < dim_m(); ++a) out += coeffs(a) * m_basis_[a];
  return out;
}

GnsData build_gns(const StarAlgebra& alg, const LindbladGenerator& gen, double tol) {
  if (gen.dim() != alg.ambient_dim())
    throw InvariantError("build_gns: generator dimension does not match the algebra");
  {
    double defect = invariance_defect(alg, gen);
    if (defect > tol) {
      std::ostringstream os;
      os << "build_gns: L does not map A into A (max residual " << defect << ")";
      throw InvariantError(os.str());
    }
  }

  GnsData gns(alg, gen);
  const Index d = alg.ambient_dim();
  const Index nk = gen.multiplicity();
  const Index m = alg.dim();
  const Index fiber = d * nk;

  // Right-A-linear span of delta(A), orthonormalized under the trace form.
  Matrix candidates(fiber * d, m * m);
  for (Index j = 0; j < m; ++j) {
    Matrix dj = gns.delta(alg.basis()[j]);
    for (Index l = 0; l < m; ++l) {
      Matrix c = dj * alg.basis()[l];
      candidates.col(j * m + l) = Eigen::Map<const Vector>(c.data(), c.size());
    }
  }
  SpanBasis span = orthonormal_span(candidates);
  for (Index a = 0; a < span.rank; ++a)
    gns.m_basis_.push_back(Eigen::Map<const Matrix>(span.q.col(a).data(), fiber, d));

  // Reachable subspace of h (x) k: the joint column span of M.
  if (span.rank == 0) {
    gns.p_reach_ = Matrix::Zero(fiber, fiber);
  } else {
    Matrix cols(fiber, span.rank * d);
    for (Index a = 0; a < span.rank; ++a) cols.middleCols(a * d, d) = gns.m_basis_[a];
    SpanBasis reach = orthonormal_span(cols);
    gns.p_reach_ = reach.q * reach.q.adjoint();
  }

  // Structural checks: closure of M under both actions, the derivation
  // property of delta, and the GNS identity on basis pairs.
  auto check_member = [&](const Matrix& xi, const char* what) {
    double residual = 0.0;
    gns.m_coords(xi, &residual);
    if (residual > tol * std::max(1.0, xi.norm())) {
      std::ostringstream os;
      os << "build_gns: " << what << " leaves M (residual " << residual << ")";
      throw InvariantError(os.str());
    }
  };
  for (Index i = 0; i < m; ++i) {
    const Matrix& bi = alg.basis()[i];
    for (Index a = 0; a < gns.dim_m(); ++a) {
      check_member(gns.pi(bi) * gns.m_basis_[a], "pi(x) M");
      check_member(gns.m_basis_[a] * bi, "M x");
    }
  }
  double worst = 0.0;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const Matrix& bi = alg.basis()[i];
      const Matrix& bj = alg.basis()[j];
      Matrix lhs = gns.delta(bi * bj);
      Matrix rhs = gns.pi(bi) * gns.delta(bj) + gns.delta(bi) * bj;
      if ((lhs - rhs).norm() > tol * std::max(1.0, lhs.norm()))
        throw InvariantError("build_gns: delta is not a bimodule derivation");
      worst = std::max(worst, gns_defect(gns, bi, bj));
    }
  gns.identity_residual_ = worst;
  if (worst > tol) {
    std::ostringstream os;
    os << "build_gns: GNS identity residual " << worst << " exceeds " << tol;
    throw InvariantError(os.str());
  }
  return gns;
}

double gns_defect(const GnsData& gns, const Matrix& x, const Matrix& y) {
  const LindbladGenerator& gen = gns.generator();
  Matrix lhs = gen.apply(x * y) - x * gen.apply(y) - gen.apply(x) * y;
  Matrix rhs = gns.delta_dagger(x) * gns.delta(y);
  return operator_norm(lhs - rhs);
}

}  // namespace qrwalk
