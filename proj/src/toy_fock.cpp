#include "qrwalk/toy_fock.hpp"

#include "qrwalk/numeric.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace qrwalk {

namespace {
constexpr int ci(Corner c) { return static_cast<int>(c); }
constexpr double kMembershipTol = 1e-10;
}  // namespace

Vector ToySlot::vacuum() const {
  Vector v = Vector::Zero(dim());
  v(0) = 1.0;
  return v;
}

Matrix embed_vacuum_block(Index d, Index nk) {
  const Index s = 1 + nk;
  Matrix e = Matrix::Zero(d * s, d);
  for (Index a = 0; a < d; ++a) e(a * s, a) = 1.0;
  return e;
}

Matrix embed_particle_block(Index d, Index nk) {
  const Index s = 1 + nk;
  Matrix e = Matrix::Zero(d * s, d * nk);
  for (Index a = 0; a < d; ++a)
    for (Index q = 0; q < nk; ++q) e(a * s + 1 + q, a * nk + q) = 1.0;
  return e;
}

Matrix n_operator(Corner kind, const Matrix& payload, Index d, Index nk) {
  const Index dk = d * nk;
  const int mu = ci(kind) >> 1;
  const int nu = ci(kind) & 1;
  const Index want_rows = mu == 0 ? d : dk;
  const Index want_cols = nu == 0 ? d : dk;
  if (payload.rows() != want_rows || payload.cols() != want_cols) {
    std::ostringstream os;
    os << "n_operator: payload of kind " << mu << nu << " must be " << want_rows << "x"
       << want_cols << ", got " << payload.rows() << "x" << payload.cols();
    throw InvariantError(os.str());
  }
  const Matrix e0 = embed_vacuum_block(d, nk);
  const Matrix e1 = embed_particle_block(d, nk);
  const Matrix& left = mu == 0 ? e0 : e1;
  const Matrix& right = nu == 0 ? e0 : e1;
  return left * payload * right.adjoint();
}

NRelationReport verify_n_relations(Index d, Index nk, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  NRelationReport report;
  const Index dk = d * nk;
  const Matrix id_slot = Matrix::Identity(1 + nk, 1 + nk);
  auto shape = [&](Corner kind) {
    const int mu = ci(kind) >> 1;
    const int nu = ci(kind) & 1;
    return std::pair<Index, Index>{mu == 0 ? d : dk, nu == 0 ? d : dk};
  };
  for (int it = 0; it < samples; ++it) {
    std::array<Matrix, 4> x, y;
    for (Corner c : kCorners) {
      auto [r, cl] = shape(c);
      x[ci(c)] = random_matrix(r, cl, rng);
      y[ci(c)] = random_matrix(r, cl, rng);
    }
    for (Corner a : kCorners) {
      Matrix na = n_operator(a, x[ci(a)], d, nk);
      report.adjoint_defect =
          std::max(report.adjoint_defect,
                   (na.adjoint() - n_operator(dagger_corner(a), x[ci(a)].adjoint(), d, nk)).norm());
      for (Corner b : kCorners) {
        Matrix nb = n_operator(b, y[ci(b)], d, nk);
        Matrix prod = na * nb;
        if (auto target = corner_product(a, b))
          prod -= n_operator(*target, x[ci(a)] * y[ci(b)], d, nk);
        report.product_defect = std::max(report.product_defect, prod.norm());
      }
    }
    Matrix s = random_matrix(d, d, rng);
    Matrix lhs = n_operator(Corner::A00, s, d, nk);
    if (nk > 0)
      lhs += n_operator(Corner::Ba11, kron(s, Matrix::Identity(nk, nk)), d, nk);
    report.sum_defect = std::max(report.sum_defect, (lhs - kron(s, id_slot)).norm());
  }
  return report;
}

BlockHom::BlockHom(StarAlgebra algebra, Index nk, double h, std::vector<Matrix> basis_ops,
                   Matrix beta00, std::string kind)
    : algebra_(std::move(algebra)),
      nk_(nk),
      h_(h),
      basis_ops_(std::move(basis_ops)),
      beta00_(std::move(beta00)),
      kind_(std::move(kind)) {}

Matrix BlockHom::apply(const Vector& xcoeffs) const {
  Matrix out = Matrix::Zero(hat_dim(), hat_dim());
  for (Index j = 0; j < xcoeffs.size(); ++j)
    if (xcoeffs(j) != 0.0) out += xcoeffs(j) * basis_ops_[j];
  return out;
}

Matrix BlockHom::apply_matrix(const Matrix& x) const {
  double residual = 0.0;
  Vector c = algebra_.coords(x, &residual);
  if (residual > kMembershipTol * std::max(1.0, x.norm()))
    throw InvariantError("BlockHom: argument is not in the algebra");
  return apply(c);
}

double BlockHom::homomorphism_defect(const Vector& x, const Vector& y) const {
  return operator_norm(apply(algebra_.multiply(x, y)) - apply(x) * apply(y));
}

double BlockHom::adjoint_defect() const {
  const Matrix& star = algebra_.star_table();
  double worst = 0.0;
  for (Index j = 0; j < algebra_.dim(); ++j)
    worst = std::max(worst, operator_norm(apply(star.col(j)) - basis_ops_[j].adjoint()));
  return worst;
}

BlockHom beta_truncated(const BetaBlock& beta) {
  const StarAlgebra& alg = beta.el.algebra();
  const Index d = alg.ambient_dim();
  const Index nk = beta.el.gns().multiplicity();
  const Index m = alg.dim();
  const Matrix e0 = embed_vacuum_block(d, nk);
  const Matrix e1 = embed_particle_block(d, nk);
  std::vector<Matrix> ops(m);
  Matrix beta00(m, m);
  for (Index j = 0; j < m; ++j) {
    const Matrix& b00 = beta.values[ci(Corner::A00)][j];
    ops[j] = e0 * b00 * e0.adjoint() + e0 * beta.values[ci(Corner::MStar01)][j] * e1.adjoint() +
             e1 * beta.values[ci(Corner::M10)][j] * e0.adjoint() +
             e1 * beta.values[ci(Corner::Ba11)][j] * e1.adjoint();
    double residual = 0.0;
    beta00.col(j) = alg.coords(b00, &residual);
    if (residual > kMembershipTol * std::max(1.0, b00.norm()))
      throw InvariantError("beta_truncated: 00 block leaves the algebra");
  }
  return BlockHom(alg, nk, beta.h, std::move(ops), std::move(beta00), "truncated");
}

BlockHom beta_truncated(const ThetaFamily& family, double h, Index order) {
  return beta_truncated(assemble_beta(family, h, order));
}

Matrix walk_step_unitary(const StarAlgebra& algebra, const LindbladGenerator& gen, double h) {
  if (!(h > 0)) throw InvariantError("walk step: step size must be positive");
  const Index d = algebra.ambient_dim();
  const Index nk = gen.multiplicity();
  const Matrix e0 = embed_vacuum_block(d, nk);
  const Matrix e1 = embed_particle_block(d, nk);
  const Matrix r = gen.stacked_ops();

  Matrix w = e0 * (Matrix::Identity(d, d) + h * gen.g()) * e0.adjoint() +
             std::sqrt(h) * (e1 * r * e0.adjoint() - e0 * r.adjoint() * e1.adjoint()) +
             e1 * Matrix::Identity(d * nk, d * nk) * e1.adjoint();
  Eigen::BDCSVD<Matrix> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double sigma_min = svd.singularValues().tail(1)(0);
  if (sigma_min < 1e-6)
    throw InvariantError("walk step: block matrix is numerically singular, cannot unitarize");
  return svd.matrixU() * svd.matrixV().adjoint();
}

BlockHom beta_unitary(const StarAlgebra& algebra, const LindbladGenerator& gen, double h) {
  if (!algebra.is_full())
    throw InvariantError("beta_unitary requires the full matrix algebra M_d");
  const Index d = algebra.ambient_dim();
  const Index nk = gen.multiplicity();
  const Index s = 1 + nk;
  const Matrix e0 = embed_vacuum_block(d, nk);
  const Matrix u = walk_step_unitary(algebra, gen, h);

  const Index m = algebra.dim();
  std::vector<Matrix> ops(m);
  Matrix beta00(m, m);
  const Matrix id_slot = Matrix::Identity(s, s);
  for (Index j = 0; j < m; ++j) {
    ops[j] = u.adjoint() * kron(algebra.basis()[j], id_slot) * u;
    beta00.col(j) = algebra.coords(e0.adjoint() * ops[j] * e0);
  }
  return BlockHom(algebra, nk, h, std::move(ops), std::move(beta00), "unitary");
}

Walk::Walk(const BlockHom& beta, Index steps, std::size_t memory_cap_bytes)
    : algebra_(beta.algebra()), steps_(steps), slot_dim_(1 + beta.nk()), h_(beta.h()) {
  if (steps < 0) throw InvariantError("walk: negative step count");
  const Index d = algebra_.ambient_dim();
  const Index m = algebra_.dim();
  const double final_dim = double(d) * std::pow(double(slot_dim_), double(steps));
  const double bytes = 2.0 * double(m) * final_dim * final_dim * sizeof(Complex);
  if (bytes > double(memory_cap_bytes)) {
    std::ostringstream os;
    os << "walk: " << steps << " steps need about " << bytes / 1e9 << " GB, over the cap of "
       << double(memory_cap_bytes) / 1e9 << " GB";
    throw Error(os.str());
  }

  // Slot-block coefficients of the one-step map: C_{st}(B_j) expanded in
  // the algebra basis. The recursion is valid only when these blocks stay
  // inside the algebra (always the case for the full matrix algebra).
  const Index s = slot_dim_;
  std::vector<Matrix> slot_coeffs(s * s, Matrix(m, m));
  for (Index st = 0; st < s * s; ++st) {
    const Index sb = st / s, tb = st % s;
    for (Index j = 0; j < m; ++j) {
      Matrix block(d, d);
      for (Index a = 0; a < d; ++a)
        for (Index b = 0; b < d; ++b) block(a, b) = beta.basis_ops()[j](a * s + sb, b * s + tb);
      double residual = 0.0;
      slot_coeffs[st].col(j) = algebra_.coords(block, &residual);
      if (residual > kMembershipTol * std::max(1.0, block.norm()))
        throw InvariantError("walk: one-step slot blocks leave the algebra");
    }
  }

  basis_ops_.resize(m);
  for (Index j = 0; j < m; ++j) basis_ops_[j] = algebra_.basis()[j];
  Index dim_prev = d;
  for (Index step = 1; step <= steps; ++step) {
    const Index dim_next = dim_prev * s;
    std::vector<Matrix> next(m, Matrix::Zero(dim_next, dim_next));
    for (Index j = 0; j < m; ++j) {
      for (Index sb = 0; sb < s; ++sb)
        for (Index tb = 0; tb < s; ++tb) {
          Matrix acc = Matrix::Zero(dim_prev, dim_prev);
          const Vector& c = slot_coeffs[sb * s + tb].col(j);
          for (Index l = 0; l < m; ++l)
            if (c(l) != 0.0) acc += c(l) * basis_ops_[l];
          next[j](Eigen::seqN(sb, dim_prev, s), Eigen::seqN(tb, dim_prev, s)) = acc;
        }
    }
    basis_ops_ = std::move(next);
    dim_prev = dim_next;
  }
}

Index Walk::dim() const {
  return basis_ops_.empty() ? 0 : basis_ops_[0].rows();
}

Matrix Walk::apply(const Vector& xcoeffs) const {
  Matrix out = Matrix::Zero(dim(), dim());
  for (Index j = 0; j < xcoeffs.size(); ++j)
    if (xcoeffs(j) != 0.0) out += xcoeffs(j) * basis_ops_[j];
  return out;
}

WalkOperator Walk::operator()(const Matrix& x) const {
  double residual = 0.0;
  Vector c = algebra_.coords(x, &residual);
  if (residual > kMembershipTol * std::max(1.0, x.norm()))
    throw InvariantError("walk: argument is not in the algebra");
  return WalkOperator{steps_, h_, algebra_.ambient_dim(), slot_dim_, apply(c)};
}

WalkOperator walk(const BlockHom& beta, const Matrix& x, Index steps,
                  std::size_t memory_cap_bytes) {
  return Walk(beta, steps, memory_cap_bytes)(x);
}

Vector vacuum_expectation(const BlockHom& beta, const Vector& xcoeffs, Index steps) {
  Vector v = xcoeffs;
  for (Index i = 0; i < steps; ++i) v = beta.beta00_matrix() * v;
  return v;
}

Vector vacuum_expectation_full(const BlockHom& beta, const Vector& xcoeffs, Index steps,
                               std::size_t memory_cap_bytes) {
  Walk wk(beta, steps, memory_cap_bytes);
  Matrix jn = wk.apply(xcoeffs);
  const Index d = beta.algebra().ambient_dim();
  Index stride = 1;
  for (Index i = 0; i < steps; ++i) stride *= 1 + beta.nk();
  Matrix compressed(d, d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) compressed(a, b) = jn(a * stride, b * stride);
  double residual = 0.0;
  Vector out = beta.algebra().coords(compressed, &residual);
  if (residual > 1e-9 * std::max(1.0, compressed.norm()))
    throw InvariantError("vacuum_expectation_full: compression leaves the algebra");
  return out;
}

Matrix semigroup_matrix(const StarAlgebra& algebra, const LindbladGenerator& gen) {
  return generator_matrix(algebra, gen);
}

Matrix semigroup(const StarAlgebra& algebra, const LindbladGenerator& gen, double t) {
  return expm(t * semigroup_matrix(algebra, gen));
}

Matrix semigroup_apply(const StarAlgebra& algebra, const LindbladGenerator& gen, double t,
                       const Matrix& x) {
  return algebra.to_matrix(semigroup(algebra, gen, t) * algebra.coords(x));
}

std::vector<ConvergenceRow> convergence_report(const StarAlgebra& algebra,
                                               const LindbladGenerator& gen,
                                               const std::function<Matrix(double)>& beta00_of_h,
                                               double t, const std::vector<double>& h_list) {
  if (!(t > 0)) throw InvariantError("convergence_report: t must be positive");
  const Index m = algebra.dim();
  const Matrix target = semigroup(algebra, gen, t);
  std::vector<ConvergenceRow> rows;
  std::vector<double> prev_error(m, 0.0);
  bool first = true;
  for (double h : h_list) {
    const auto n = static_cast<Index>(std::llround(t / h));
    if (n <= 0 || std::abs(double(n) * h - t) > 1e-9 * std::max(1.0, t))
      throw InvariantError("convergence_report: every h must divide t");
    const Matrix b = beta00_of_h(h);
    Matrix iter = Matrix::Identity(m, m);
    for (Index i = 0; i < n; ++i) iter = b * iter;
    for (Index j = 0; j < m; ++j) {
      ConvergenceRow row;
      row.h = h;
      row.n = n;
      row.basis_index = j;
      row.error = operator_norm(algebra.to_matrix(iter.col(j) - target.col(j)));
      row.ratio = first ? std::numeric_limits<double>::quiet_NaN() : prev_error[j] / row.error;
      prev_error[j] = row.error;
      rows.push_back(row);
    }
    first = false;
  }
  return rows;
}

ProductState product_state_from_samples(const Vector& system, const std::vector<Vector>& samples,
                                        double h) {
  ProductState state;
  state.system = system;
  for (const Vector& f : samples) {
    Vector slot(f.size() + 1);
    slot(0) = 1.0;
    slot.tail(f.size()) = std::sqrt(h) * f;
    state.slots.push_back(std::move(slot));
  }
  return state;
}

Vector state_vector(const ProductState& state) {
  Matrix acc = state.system;
  for (const Vector& slot : state.slots) acc = kron(acc, slot);
  return acc.col(0);
}

}  // namespace qrwalk
