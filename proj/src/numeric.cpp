#include "qrwalk/numeric.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qrwalk {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

[[noreturn]] void throw_ambiguous(const char* where, double below, double above) {
  std::ostringstream os;
  os << where << ": rank decision ambiguous, singular values near threshold ("
     << below << " dropped vs " << above << " kept)";
  throw RankAmbiguityError(os.str(), below, above);
}

}  // namespace

RankDecision decide_rank(const RealVector& sv, double rel_tol, double gap_factor,
                         double scale) {
  RankDecision out;
  if (sv.size() == 0) return out;
  out.scale = std::max(sv(0), scale);
  if (!(out.scale > 0)) return out;
  const double tol = rel_tol * out.scale;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) >= tol) {
      out.rank = i + 1;
      out.smallest_kept = sv(i);
    } else {
      out.largest_dropped = std::max(out.largest_dropped, sv(i));
    }
    if (sv(i) > tol / gap_factor && sv(i) < tol * gap_factor) out.ambiguous = true;
  }
  return out;
}

Index svd_rank(const Matrix& a, double rel_tol, double scale) {
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(a);
  RankDecision d = decide_rank(svd.singularValues(), rel_tol, kRankGapFactor, scale);
  if (d.ambiguous) throw_ambiguous("svd_rank", d.largest_dropped, d.smallest_kept);
  return d.rank;
}

SpanBasis orthonormal_span(const Matrix& columns, double rel_tol, double scale) {
  SpanBasis out;
  if (columns.cols() == 0 || columns.norm() <= rel_tol * scale) {
    out.q = Matrix(columns.rows(), 0);
    return out;
  }
  Eigen::BDCSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  RankDecision d = decide_rank(svd.singularValues(), rel_tol, kRankGapFactor, scale);
  if (d.ambiguous) throw_ambiguous("orthonormal_span", d.largest_dropped, d.smallest_kept);
  out.rank = d.rank;
  out.q = svd.matrixU().leftCols(d.rank);
  return out;
}

Matrix nullspace(const Matrix& a, double rel_tol, double scale) {
  if (a.rows() == 0 || a.norm() <= rel_tol * scale)
    return Matrix::Identity(a.cols(), a.cols());
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullV);
  RankDecision d = decide_rank(svd.singularValues(), rel_tol, kRankGapFactor, scale);
  if (d.ambiguous) throw_ambiguous("nullspace", d.largest_dropped, d.smallest_kept);
  return svd.matrixV().rightCols(a.cols() - d.rank);
}

Matrix min_norm_solve(const Matrix& a, const Matrix& rhs, double rel_tol) {
  if (a.cols() == 0) return Matrix(0, rhs.cols());
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rel_tol);
  return svd.solve(rhs);
}

// Diagonally pivoted Cholesky on a Hermitian PSD matrix (pstrf-style,
// panel factorization + full trailing GEMM update). The updated Schur
// diagonal drives both pivoting and the stopping test.
Index psd_rank(Matrix a, double sigma_rel_tol) {
  const Index n = a.rows();
  if (n == 0) return 0;
  RealVector d = a.diagonal().real();
  const double dmax0 = d.maxCoeff();
  if (!(dmax0 > 0)) return 0;
  // Threshold at eigenvalue level. The Gram form cannot resolve relative
  // singular values below sqrt(n * eps), so the floor keeps decisions
  // inside the representable range.
  const double tol = std::max(sigma_rel_tol * sigma_rel_tol, 100.0 * double(n) * kEps) * dmax0;
  const double gap2 = kRankGapFactor * kRankGapFactor;

  const Index nb = 48;
  Index rank = n;
  double smallest_kept = std::numeric_limits<double>::infinity();
  double largest_dropped = 0.0;
  bool stopped = false;

  for (Index k = 0; k < n && !stopped; k += nb) {
    const Index kend = std::min(k + nb, n);
    Index j = k;
    for (; j < kend; ++j) {
      Index p = j;
      for (Index i = j + 1; i < n; ++i)
        if (d(i) > d(p)) p = i;
      if (d(p) <= tol) {
        rank = j;
        largest_dropped = std::max(0.0, d(p));
        stopped = true;
        break;
      }
      if (p != j) {
        a.row(j).swap(a.row(p));
        a.col(j).swap(a.col(p));
        std::swap(d(j), d(p));
      }
      smallest_kept = std::min(smallest_kept, d(j));
      double ajj = std::sqrt(d(j));
      a(j, j) = ajj;
      if (j + 1 < n) {
        auto col = a.block(j + 1, j, n - j - 1, 1);
        if (j > k)
          col.noalias() -= a.block(j + 1, k, n - j - 1, j - k) * a.row(j).segment(k, j - k).adjoint();
        col /= ajj;
        for (Index i = j + 1; i < n; ++i) d(i) -= std::norm(a(i, j));
      }
    }
    const Index done = j;
    if (!stopped && done < n) {
      auto panel = a.block(done, k, n - done, done - k);
      a.block(done, done, n - done, n - done).noalias() -= panel * panel.adjoint();
      for (Index i = done; i < n; ++i) d(i) = a(i, i).real();
    }
  }

  const bool kept_close = rank > 0 && smallest_kept < tol * gap2;
  const bool dropped_close = rank < n && largest_dropped > tol / gap2;
  if (kept_close || dropped_close)
    throw_ambiguous("psd_rank", std::sqrt(largest_dropped / dmax0), std::sqrt(smallest_kept / dmax0));
  return rank;
}

Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvariantError("expm: matrix must be square");
  const Index n = a.rows();
  if (n == 0) return a;
  static const double b[14] = {64764752532480000., 32382376266240000., 7771770303897600.,
                               1187353796428800.,  129060195264000.,   10559470521600.,
                               670442572800.,      33522128640.,       1323241920.,
                               40840800.,          960960.,            16380.,
                               182.,               1.};
  const double theta13 = 5.371920351148152;
  const double nrm = a.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  int s = 0;
  if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
  const Matrix as = a / std::pow(2.0, s);
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = as * as;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u =
      as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const Matrix v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  Matrix f = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < s; ++i) f = f * f;
  return f;
}

}  // namespace qrwalk
