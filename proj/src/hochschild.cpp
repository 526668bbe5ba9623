#include "qrwalk/hochschild.hpp"

#include "qrwalk/numeric.hpp"

#include <sstream>
#include <vector>

namespace qrwalk {

Cochain Cochain::zero(Index degree, Index p, Index m) {
  Cochain f;
  f.degree = degree;
  f.p = p;
  f.m = m;
  Index cols = 1;
  for (Index i = 0; i < degree; ++i) cols *= m;
  f.values = Matrix::Zero(p, cols);
  return f;
}

CochainComplex::CochainComplex(AlgebraTable table, Bimodule module)
    : table_(std::move(table)), module_(std::move(module)) {
  if (module_.algebra_dim != table_.dim)
    throw InvariantError("CochainComplex: bimodule and algebra dimensions disagree");
}

Index CochainComplex::cochain_dim(Index degree) const {
  Index n = module_.dim;
  for (Index i = 0; i < degree; ++i) n *= table_.dim;
  return n;
}

SparseMatrix CochainComplex::build_coboundary(Index degree) const {
  const Index m = table_.dim;
  const Index p = module_.dim;
  using Triplet = Eigen::Triplet<Complex>;
  std::vector<Triplet> trip;
  auto add_block = [&](Index row_block, Index col_block, const Matrix& a, Complex scale) {
    for (Index c = 0; c < p; ++c)
      for (Index r = 0; r < p; ++r) {
        const Complex v = scale * a(r, c);
        if (v != 0.0) trip.emplace_back(row_block * p + r, col_block * p + c, v);
      }
  };
  auto add_identity = [&](Index row_block, Index col_block, Complex scale) {
    if (scale == 0.0) return;
    for (Index r = 0; r < p; ++r) trip.emplace_back(row_block * p + r, col_block * p + r, scale);
  };

  SparseMatrix out(cochain_dim(degree + 1), cochain_dim(degree));
  if (degree == 0) {
    for (Index j = 0; j < m; ++j) add_block(j, 0, module_.left[j] - module_.right[j], 1.0);
  } else if (degree == 1) {
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) {
        const Index row = i * m + j;
        for (Index l = 0; l < m; ++l) add_identity(row, l, table_.left_mult[i](l, j));
        add_block(row, j, module_.left[i], -1.0);
        add_block(row, i, module_.right[j], -1.0);
      }
  } else if (degree == 2) {
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j)
        for (Index k = 0; k < m; ++k) {
          const Index row = (i * m + j) * m + k;
          add_block(row, j * m + k, module_.left[i], 1.0);
          for (Index l = 0; l < m; ++l) add_identity(row, l * m + k, -table_.left_mult[i](l, j));
          for (Index l = 0; l < m; ++l) add_identity(row, i * m + l, table_.left_mult[j](l, k));
          add_block(row, i * m + j, module_.right[k], -1.0);
        }
  } else {
    throw Error("coboundary: degree > 2 unsupported");
  }
  out.setFromTriplets(trip.begin(), trip.end());
  out.makeCompressed();
  return out;
}

const SparseMatrix& CochainComplex::coboundary_matrix(Index degree) const {
  if (degree < 0 || degree > 2) throw Error("coboundary: degree > 2 unsupported");
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = cob_[degree];
  if (!slot) slot = build_coboundary(degree);
  return *slot;
}

Cochain CochainComplex::coboundary(const Cochain& f) const {
  const Index m = table_.dim;
  const Index p = module_.dim;
  if (f.p != p || f.m != m) throw InvariantError("coboundary: cochain shape mismatch");
  Cochain out = Cochain::zero(f.degree + 1, p, m);
  if (p == 0) return out;
  if (f.degree == 0) {
    for (Index j = 0; j < m; ++j)
      out.values.col(j) = (module_.left[j] - module_.right[j]) * f.values.col(0);
  } else if (f.degree == 1) {
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) {
        Vector acc = f.values * table_.left_mult[i].col(j);
        acc.noalias() -= module_.left[i] * f.values.col(j);
        acc.noalias() -= module_.right[j] * f.values.col(i);
        out.values.col(i * m + j) = acc;
      }
  } else if (f.degree == 2) {
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j)
        for (Index k = 0; k < m; ++k) {
          Vector acc = module_.left[i] * f.values.col(j * m + k);
          for (Index l = 0; l < m; ++l) {
            const Complex cij = table_.left_mult[i](l, j);
            if (cij != 0.0) acc -= cij * f.values.col(l * m + k);
            const Complex cjk = table_.left_mult[j](l, k);
            if (cjk != 0.0) acc += cjk * f.values.col(i * m + l);
          }
          acc.noalias() -= module_.right[k] * f.values.col(i * m + j);
          out.values.col((i * m + j) * m + k) = acc;
        }
  } else {
    throw Error("coboundary: degree > 2 unsupported");
  }
  return out;
}

std::pair<bool, double> CochainComplex::is_cocycle(const Cochain& phi, double tol) const {
  Cochain d = coboundary(phi);
  double residual = 0.0;
  for (Index c = 0; c < d.tuple_cols(); ++c)
    residual = std::max(residual, d.values.col(c).norm());
  return {residual <= tol, residual};
}

namespace {

Matrix gram_of_sparse(const SparseMatrix& s) {
  Eigen::SparseMatrix<Complex, Eigen::RowMajor> rows(s);
  Matrix g = Matrix::Zero(s.cols(), s.cols());
  std::vector<Index> idx;
  std::vector<Complex> val;
  for (Index r = 0; r < rows.outerSize(); ++r) {
    idx.clear();
    val.clear();
    for (Eigen::SparseMatrix<Complex, Eigen::RowMajor>::InnerIterator it(rows, r); it; ++it) {
      idx.push_back(it.col());
      val.push_back(it.value());
    }
    for (size_t a = 0; a < idx.size(); ++a) {
      const Complex ca = std::conj(val[a]);
      for (size_t b = 0; b < idx.size(); ++b) g(idx[a], idx[b]) += ca * val[b];
    }
  }
  return g;
}

}  // namespace

Index CochainComplex::compute_rank(Index degree) const {
  const SparseMatrix& s = coboundary_matrix(degree);
  if (s.rows() == 0 || s.cols() == 0) return 0;
  // Small systems get a direct SVD at the documented relative threshold;
  // larger ones go through the Gram matrix and a pivoted Cholesky, whose
  // resolution floor is sqrt-of-roundoff. Both paths flag ambiguous gaps.
  if (s.cols() <= 512 && s.rows() * s.cols() <= (Index{1} << 22)) return svd_rank(Matrix(s));
  return psd_rank(gram_of_sparse(s));
}

Index CochainComplex::rank(Index degree) const {
  if (degree < 0 || degree > 2) throw Error("coboundary: degree > 2 unsupported");
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (rank_[degree]) return *rank_[degree];
  }
  Index r = compute_rank(degree);
  std::lock_guard<std::mutex> lock(mu_);
  if (!rank_[degree]) rank_[degree] = r;
  return *rank_[degree];
}

Index CochainComplex::cohomology_dim(Index degree) const {
  if (degree < 0 || degree > 2) throw Error("cohomology_dim: degree > 2 unsupported");
  if (module_.dim == 0) return 0;
  const Index kernel = cochain_dim(degree) - rank(degree);
  const Index image = degree == 0 ? 0 : rank(degree - 1);
  return kernel - image;
}

CochainComplex::DegreeRow CochainComplex::degree_row(Index degree) const {
  DegreeRow row;
  row.degree = degree;
  row.dim_c = cochain_dim(degree);
  row.rank = module_.dim == 0 ? 0 : rank(degree);
  row.kernel = row.dim_c - row.rank;
  row.h = cohomology_dim(degree);
  return row;
}

Cochain CochainComplex::solve_coboundary(const Cochain& phi, double residual_tol) const {
  if (phi.degree != 2) throw InvariantError("solve_coboundary: expected a 2-cochain");
  const Index m = table_.dim;
  const Index p = module_.dim;
  if (phi.p != p || phi.m != m) throw InvariantError("solve_coboundary: cochain shape mismatch");
  Cochain theta = Cochain::zero(1, p, m);
  if (p == 0) return theta;

  Matrix d1(coboundary_matrix(1));
  Vector sol = min_norm_solve(d1, phi.vec());
  theta.values = Eigen::Map<const Matrix>(sol.data(), p, m);

  Cochain reached = coboundary(theta);
  double residual = 0.0;
  for (Index c = 0; c < reached.tuple_cols(); ++c)
    residual = std::max(residual, (reached.values.col(c) - phi.values.col(c)).norm());
  if (residual > residual_tol) {
    Index h2 = -1;
    try {
      h2 = cohomology_dim(2);
    } catch (const RankAmbiguityError&) {
    }
    std::ostringstream os;
    os << "solve_coboundary: no solution at tolerance " << residual_tol << " (residual "
       << residual << ", dim H^2 = " << h2 << ")";
    throw ObstructionError(os.str(), h2, residual);
  }
  return theta;
}

Index cohomology_dim(const AlgebraTable& table, const Bimodule& module, Index degree) {
  return CochainComplex(table, module).cohomology_dim(degree);
}

}  // namespace qrwalk
