#include "qrwalk/lindblad.hpp"

#include <sstream>

namespace qrwalk {

namespace {
constexpr double kHermitianTol = 1e-12;
constexpr double kUnitTol = 1e-12;
constexpr double kMembershipTol = 1e-10;
}  // namespace

LindbladGenerator::LindbladGenerator(Matrix hamiltonian, std::vector<Matrix> lindblad_ops)
    : hamiltonian_(std::move(hamiltonian)), lindblad_ops_(std::move(lindblad_ops)) {
  const Index d = hamiltonian_.rows();
  if (hamiltonian_.cols() != d) throw InvariantError("Hamiltonian must be square");
  if (hermitian_defect(hamiltonian_) > kHermitianTol * std::max(1.0, hamiltonian_.norm()))
    throw InvariantError("Hamiltonian is not Hermitian");
  Matrix dissipation = Matrix::Zero(d, d);
  for (const Matrix& l : lindblad_ops_) {
    if (l.rows() != d || l.cols() != d)
      throw InvariantError("Lindblad operators must match the Hamiltonian dimension");
    dissipation += l.adjoint() * l;
  }
  g_ = Complex(0, -1) * hamiltonian_ - 0.5 * dissipation;
  double unit_defect = apply(Matrix::Identity(d, d)).norm();
  if (unit_defect > kUnitTol * std::max(1.0, dissipation.norm()))
    throw InvariantError("L(1) != 0: Lindblad data inconsistent");
}

Matrix LindbladGenerator::apply(const Matrix& x) const {
  Matrix out = g_.adjoint() * x + x * g_;
  for (const Matrix& l : lindblad_ops_) out += l.adjoint() * x * l;
  return out;
}

Matrix LindbladGenerator::stacked_ops() const {
  const Index d = dim();
  const Index nk = multiplicity();
  Matrix r = Matrix::Zero(d * nk, d);
  for (Index i = 0; i < nk; ++i)
    for (Index a = 0; a < d; ++a) r.row(a * nk + i) = lindblad_ops_[i].row(a);
  return r;
}

Vector lindblad_apply(const StarAlgebra& alg, const LindbladGenerator& gen, const Vector& x) {
  Matrix lx = gen.apply(alg.to_matrix(x));
  double residual = 0.0;
  Vector c = alg.coords(lx, &residual);
  if (residual > kMembershipTol * std::max(1.0, lx.norm())) {
    std::ostringstream os;
    os << "lindblad_apply: L(x) leaves the algebra (residual " << residual << ")";
    throw InvariantError(os.str());
  }
  return c;
}

Matrix generator_matrix(const StarAlgebra& alg, const LindbladGenerator& gen) {
  const Index m = alg.dim();
  Matrix out(m, m);
  for (Index j = 0; j < m; ++j) {
    Vector e = Vector::Zero(m);
    e(j) = 1.0;
    out.col(j) = lindblad_apply(alg, gen, e);
  }
  return out;
}

double invariance_defect(const StarAlgebra& alg, const LindbladGenerator& gen) {
  double worst = 0.0;
  for (const Matrix& b : alg.basis()) {
    Matrix lb = gen.apply(b);
    double residual = 0.0;
    alg.coords(lb, &residual);
    worst = std::max(worst, residual);
  }
  return worst;
}

}  // namespace qrwalk
