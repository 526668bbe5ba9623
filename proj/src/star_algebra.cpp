#include "qrwalk/star_algebra.hpp"

#include "qrwalk/numeric.hpp"

#include <cstring>
#include <sstream>

namespace qrwalk {

Vector AlgebraTable::multiply(const Vector& a, const Vector& b) const {
  Vector out = Vector::Zero(dim);
  for (Index i = 0; i < dim; ++i)
    if (a(i) != 0.0) out.noalias() += a(i) * (left_mult[i] * b);
  return out;
}

Matrix AlgebraTable::right_mult(Index i) const {
  Matrix r(dim, dim);
  for (Index j = 0; j < dim; ++j) r.col(j) = left_mult[j].col(i);
  return r;
}

AlgebraTable dual_numbers() {
  AlgebraTable t;
  t.dim = 2;
  t.left_mult = {Matrix::Identity(2, 2), Matrix::Zero(2, 2)};
  t.left_mult[1](1, 0) = 1.0;  // e * 1 = e, e * e = 0
  t.unit = Vector::Zero(2);
  t.unit(0) = 1.0;
  return t;
}

namespace {

Vector vec_of(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix stack_columns(const std::vector<Matrix>& mats) {
  if (mats.empty()) return Matrix(0, 0);
  Matrix out(mats[0].size(), static_cast<Index>(mats.size()));
  for (Index j = 0; j < out.cols(); ++j) out.col(j) = vec_of(mats[j]);
  return out;
}

std::vector<Matrix> matrix_units(Index d, Index row0, Index col0, Index size) {
  std::vector<Matrix> units;
  for (Index i = 0; i < size; ++i)
    for (Index j = 0; j < size; ++j) {
      Matrix e = Matrix::Zero(d, d);
      e(row0 + i, col0 + j) = 1.0;
      units.push_back(e);
    }
  return units;
}

}  // namespace

StarAlgebra StarAlgebra::build(const std::vector<Matrix>& generators, double tol) {
  if (!(tol > 0)) throw InvariantError("build_algebra: tolerance must be positive");
  if (generators.empty()) throw InvariantError("build_algebra: no generators");
  const Index d = generators[0].rows();
  for (const Matrix& g : generators)
    if (g.rows() != g.cols() || g.rows() != d)
      throw InvariantError("build_algebra: generators must be square and of equal size");

  StarAlgebra alg;
  alg.ambient_dim_ = d;

  std::vector<Matrix> seed;
  seed.push_back(Matrix::Identity(d, d));
  for (const Matrix& g : generators) seed.push_back(g);
  SpanBasis span = orthonormal_span(stack_columns(seed));

  auto unpack = [d](const Matrix& q) {
    std::vector<Matrix> mats;
    for (Index j = 0; j < q.cols(); ++j)
      mats.push_back(Eigen::Map<const Matrix>(q.col(j).data(), d, d));
    return mats;
  };

  // Closure under products and adjoints until the span dimension stops
  // growing. The span can never exceed d^2; a larger rank would mean the
  // rank threshold misjudged the singular values.
  while (true) {
    std::vector<Matrix> basis = unpack(span.q);
    const Index m = static_cast<Index>(basis.size());
    if (m > d * d) {
      std::ostringstream os;
      os << "build_algebra: span dimension " << m << " exceeds ambient " << d * d
         << " (rank misjudgment)";
      throw InvariantError(os.str());
    }
    std::vector<Matrix> cand = basis;
    for (const Matrix& b : basis) cand.push_back(b.adjoint());
    for (const Matrix& a : basis)
      for (const Matrix& b : basis) cand.push_back(a * b);
    SpanBasis next = orthonormal_span(stack_columns(cand));
    if (next.rank == m) break;
    span = std::move(next);
  }

  // Hermitian orthonormal basis of the *-closed span: split each span
  // vector into Hermitian and anti-Hermitian parts and re-orthonormalize
  // over the reals. With a Hermitian basis the star table is exactly the
  // identity, so the adjoint is an exact involution on coefficients.
  {
    const Index m = span.rank;
    std::vector<Matrix> work;
    for (const Matrix& b : unpack(span.q)) {
      work.push_back(0.5 * (b + b.adjoint()));
      work.push_back((b - b.adjoint()) / Complex(0, 2));
    }
    std::vector<Matrix> accepted;
    while (static_cast<Index>(accepted.size()) < m) {
      size_t best = 0;
      double best_norm = -1.0;
      for (size_t i = 0; i < work.size(); ++i) {
        const double n = work[i].norm();
        if (n > best_norm) {
          best_norm = n;
          best = i;
        }
      }
      if (best_norm < 1e-8)
        throw InvariantError("build_algebra: Hermitian re-orthonormalization lost rank");
      Matrix v = work[best] / best_norm;
      for (int pass = 0; pass < 2; ++pass)
        for (const Matrix& h : accepted) v -= h.conjugate().cwiseProduct(v).sum().real() * h;
      v /= v.norm();
      v = 0.5 * (v + v.adjoint());
      for (Matrix& w : work) w -= v.conjugate().cwiseProduct(w).sum().real() * v;
      accepted.push_back(std::move(v));
    }
    alg.basis_ = std::move(accepted);
  }
  const Index m = static_cast<Index>(alg.basis_.size());
  alg.table_.dim = m;

  auto project = [&](const Matrix& x, const char* what) {
    double residual = 0.0;
    Vector c = alg.coords(x, &residual);
    if (residual > tol * std::max(1.0, x.norm())) {
      std::ostringstream os;
      os << "build_algebra: " << what << " leaves the span (residual " << residual << ")";
      throw InvariantError(os.str());
    }
    return c;
  };

  alg.table_.left_mult.resize(m);
  for (Index i = 0; i < m; ++i) {
    alg.table_.left_mult[i].resize(m, m);
    for (Index j = 0; j < m; ++j)
      alg.table_.left_mult[i].col(j) = project(alg.basis_[i] * alg.basis_[j], "basis product");
  }
  alg.star_table_.resize(m, m);
  for (Index i = 0; i < m; ++i)
    alg.star_table_.col(i) = project(alg.basis_[i].adjoint(), "basis adjoint");
  // The basis is Hermitian, so the star table is the identity up to
  // roundoff; snap it to keep the adjoint exact on coefficients.
  if ((alg.star_table_ - Matrix::Identity(m, m)).norm() < 1e-8)
    alg.star_table_ = Matrix::Identity(m, m);
  alg.table_.unit = project(Matrix::Identity(d, d), "identity");
  return alg;
}

StarAlgebra StarAlgebra::full_matrix(Index d) {
  return build(matrix_units(d, 0, 0, d));
}

StarAlgebra StarAlgebra::diagonal(Index n) {
  std::vector<Matrix> gens;
  for (Index i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    gens.push_back(e);
  }
  return build(gens);
}

StarAlgebra StarAlgebra::direct_sum(const std::vector<Index>& blocks) {
  Index d = 0;
  for (Index b : blocks) d += b;
  if (d == 0) throw InvariantError("direct_sum: empty block list");
  std::vector<Matrix> gens;
  Index off = 0;
  for (Index b : blocks) {
    auto units = matrix_units(d, off, off, b);
    gens.insert(gens.end(), units.begin(), units.end());
    off += b;
  }
  return build(gens);
}

Vector StarAlgebra::coords(const Matrix& x, double* residual) const {
  const Index m = table_.dim;
  Vector c(m);
  for (Index l = 0; l < m; ++l) c(l) = basis_[l].conjugate().cwiseProduct(x).sum();
  if (residual) *residual = (x - to_matrix(c)).norm();
  return c;
}

Matrix StarAlgebra::to_matrix(const Vector& coeffs) const {
  Matrix out = Matrix::Zero(ambient_dim_, ambient_dim_);
  for (Index l = 0; l < table_.dim; ++l) out += coeffs(l) * basis_[l];
  return out;
}

bool StarAlgebra::contains(const Matrix& x, double tol) const {
  if (x.rows() != ambient_dim_ || x.cols() != ambient_dim_) return false;
  double residual = 0.0;
  coords(x, &residual);
  return residual <= tol * std::max(1.0, x.norm());
}

Vector StarAlgebra::adjoint(const Vector& a) const {
  return star_table_ * a.conjugate();
}

std::vector<Vector> StarAlgebra::center() const {
  const Index m = table_.dim;
  Matrix stacked(m * m, m);
  for (Index i = 0; i < m; ++i)
    stacked.middleRows(i * m, m) = table_.left_mult[i] - table_.right_mult(i);
  Matrix null = nullspace(stacked, kRankRelTol, 1.0);
  std::vector<Vector> out;
  for (Index j = 0; j < null.cols(); ++j) out.push_back(null.col(j));
  return out;
}

std::uint64_t StarAlgebra::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, size_t size) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < size; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  const std::uint64_t dims[2] = {static_cast<std::uint64_t>(ambient_dim_),
                                 static_cast<std::uint64_t>(table_.dim)};
  mix(dims, sizeof(dims));
  for (const Matrix& b : basis_) mix(b.data(), sizeof(Complex) * b.size());
  return h;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.algebra != b.algebra || a.algebra == nullptr)
    throw InvariantError("algebra elements belong to different algebras");
  return {a.algebra, a.algebra->multiply(a.coeffs, b.coeffs)};
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.algebra != b.algebra || a.algebra == nullptr)
    throw InvariantError("algebra elements belong to different algebras");
  return {a.algebra, a.coeffs + b.coeffs};
}

AlgebraElement unit_element(const StarAlgebra& alg) {
  return {&alg, alg.unit()};
}

}  // namespace qrwalk
