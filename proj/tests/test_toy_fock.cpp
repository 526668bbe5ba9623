#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qrwalk/toy_fock.hpp"
#include "test_models.hpp"

#include <cmath>

using namespace qrwalk;
using qrwalk::testing::unit_matrix;

TEST_CASE("compressed operator relations on explicit payloads") {
  const Index d = 2, nk = 2;
  std::mt19937_64 rng(1);
  Matrix q = random_matrix(d, d * nk, rng);
  Matrix q2 = random_matrix(d, d * nk, rng);
  Matrix r = random_matrix(d * nk, d, rng);

  // N^01_Q N^10_R = N^00_{QR}
  Matrix lhs = n_operator(Corner::MStar01, q, d, nk) * n_operator(Corner::M10, r, d, nk);
  CHECK((lhs - n_operator(Corner::A00, q * r, d, nk)).norm() < 1e-14);

  // N^01_Q N^01_{Q'} = 0
  CHECK((n_operator(Corner::MStar01, q, d, nk) * n_operator(Corner::MStar01, q2, d, nk)).norm() ==
        0.0);

  // (N^10_R)* = N^01_{R*}
  CHECK((n_operator(Corner::M10, r, d, nk).adjoint() -
         n_operator(Corner::MStar01, r.adjoint(), d, nk))
            .norm() == 0.0);

  CHECK_THROWS_AS(n_operator(Corner::M10, q, d, nk), InvariantError);
}

TEST_CASE("random payload relation sweep stays at machine precision") {
  for (auto [d, nk] : {std::pair<Index, Index>{2, 1}, {3, 2}}) {
    NRelationReport rep = verify_n_relations(d, nk, 50, 12345);
    CHECK(rep.max() <= 1e-12);
  }
}

TEST_CASE("vacuum slot") {
  ToySlot slot{2};
  CHECK(slot.dim() == 3);
  CHECK(slot.vacuum().norm() == 1.0);
  CHECK(slot.vacuum()(0) == Complex(1.0));
}

TEST_CASE("unitary one-step map is an exact homomorphism") {
  auto [alg, gen] = qrwalk::testing::m2_model();
  BlockHom beta = beta_unitary(alg, gen, 1e-2);
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    Vector x = qrwalk::testing::random_element(alg, rng);
    Vector y = qrwalk::testing::random_element(alg, rng);
    worst = std::max(worst, beta.homomorphism_defect(x, y));
  }
  CHECK(worst <= 1e-10);
  CHECK(beta.adjoint_defect() <= 1e-10);
  CHECK((beta.apply(alg.unit()) - Matrix::Identity(beta.hat_dim(), beta.hat_dim())).norm() <=
        1e-12);
}

TEST_CASE("unitary beta refuses non-full algebras") {
  auto diag = StarAlgebra::diagonal(2);
  LindbladGenerator gen(Matrix::Zero(2, 2), {});
  CHECK_THROWS_AS(beta_unitary(diag, gen, 1e-2), InvariantError);
}

TEST_CASE("the 00 block of the unitary beta tends to id + hL") {
  auto [alg, gen] = qrwalk::testing::m2_model();
  auto mismatch = [&](double h) {
    Matrix b00 = beta_unitary(alg, gen, h).beta00_matrix();
    Matrix lmat = generator_matrix(alg, gen);
    const Index m = alg.dim();
    return ((b00 - Matrix::Identity(m, m)) / h - lmat).norm();
  };
  const double m1 = mismatch(1e-3);
  const double m2 = mismatch(5e-4);
  CHECK(m1 / m2 == doctest::Approx(2.0).epsilon(0.10));
}

TEST_CASE("truncated beta at h -> 0 is the block-diagonal seed") {
  auto [alg, gen] = qrwalk::testing::m2_model();
  ELModule el = build_el(build_gns(alg, gen));
  ThetaFamily fam = ThetaFamily::seed(el);
  fam.extend_to(2);
  BlockHom beta = beta_truncated(fam, 0.0, 2);
  std::mt19937_64 rng(6);
  Vector x = qrwalk::testing::random_element(alg, rng);
  Matrix xm = alg.to_matrix(x);
  const Matrix e0 = embed_vacuum_block(2, 1);
  const Matrix e1 = embed_particle_block(2, 1);
  Matrix expect = e0 * xm * e0.adjoint() + e1 * el.pi_el(xm) * e1.adjoint();
  CHECK((beta.apply(x) - expect).norm() < 1e-13);
}

TEST_CASE("truncated and unitary beta agree corner-wise to the stated orders") {
  auto [alg, gen] = qrwalk::testing::m2_model();
  ELModule el = build_el(build_gns(alg, gen));
  ThetaFamily fam = ThetaFamily::seed(el);
  fam.extend_to(2);

  const Matrix e0 = embed_vacuum_block(2, 1);
  const Matrix e1 = embed_particle_block(2, 1);
  auto corner_diffs = [&](double h) {
    BlockHom tr = beta_truncated(fam, h, 2);
    BlockHom un = beta_unitary(alg, gen, h);
    double d00 = 0.0, d10 = 0.0;
    for (Index j = 0; j < alg.dim(); ++j) {
      Matrix diff = tr.apply(Vector::Unit(alg.dim(), j)) - un.apply(Vector::Unit(alg.dim(), j));
      d00 = std::max(d00, (e0.adjoint() * diff * e0).norm());
      d10 = std::max(d10, (e1.adjoint() * diff * e0).norm());
    }
    return std::pair{d00, d10};
  };
  auto [a00, a10] = corner_diffs(1e-2);
  auto [b00, b10] = corner_diffs(5e-3);
  const double slope00 = std::log2(a00 / b00);
  const double slope10 = std::log2(a10 / b10);
  // both share id + hL in corner 00 and sqrt(h) delta in corner 10, so the
  // differences vanish at least like h^{3/2}
  CHECK(slope00 >= 1.2);
  CHECK(slope10 >= 1.2);
  CHECK(slope00 <= 3.0);
  CHECK(slope10 <= 3.0);
}

TEST_CASE("walk basics: zero steps, identity, star and memory cap") {
  auto [alg, gen] = qrwalk::testing::m2_model();
  BlockHom beta = beta_unitary(alg, gen, 1e-2);
  std::mt19937_64 rng(7);
  Matrix x = alg.to_matrix(qrwalk::testing::random_element(alg, rng));

  WalkOperator j0 = walk(beta, x, 0);
  CHECK((j0.op - x).norm() < 1e-14);

  Walk w3(beta, 3);
  CHECK(w3.dim() == 2 * 8);
  Matrix j1 = w3.apply(alg.unit());
  CHECK((j1 - Matrix::Identity(w3.dim(), w3.dim())).norm() <= 1e-10);
  // star is respected
  Matrix jx = w3.apply(alg.coords(x));
  Matrix jxs = w3.apply(alg.coords(x.adjoint()));
  CHECK((jxs - jx.adjoint()).norm() <= 1e-10);

  CHECK_THROWS_AS(Walk(beta, 20, /*memory_cap_bytes=*/1 << 20), Error);
}

TEST_CASE("trivial generator walk is constant") {
  // no noise channel at all: one-dimensional slots, j_n(x) = x
  auto alg = StarAlgebra::full_matrix(2);
  LindbladGenerator trivial(Matrix::Zero(2, 2), {});
  ELModule el = build_el(build_gns(alg, trivial));
  ThetaFamily fam = ThetaFamily::seed(el);
  fam.extend_to(2);
  BlockHom beta = beta_truncated(fam, 1e-2, 2);
  std::mt19937_64 rng(8);
  Matrix x = alg.to_matrix(qrwalk::testing::random_element(alg, rng));
  WalkOperator j4 = walk(beta, x, 4);
  CHECK(j4.op.rows() == 2);
  CHECK((j4.op - x).norm() < 1e-12);

  // a zero Lindblad operator keeps the slot but the walk only loads the
  // vacuum corner: j_n(x) = x (x) P_Omega^n
  auto model = qrwalk::testing::zero_model();
  ELModule el0 = build_el(build_gns(model.algebra, model.generator));
  ThetaFamily fam0 = ThetaFamily::seed(el0);
  fam0.extend_to(2);
  BlockHom beta0 = beta_truncated(fam0, 1e-2, 2);
  Matrix p_vac = Matrix::Zero(2, 2);
  p_vac(0, 0) = 1.0;
  WalkOperator j2 = walk(beta0, x, 2);
  CHECK((j2.op - kron(kron(x, p_vac), p_vac)).norm() < 1e-12);
}

TEST_CASE("unitary walk at n = 6 is a homomorphism on the full tensor space") {
  auto [alg, gen] = qrwalk::testing::m2_model();
  BlockHom beta = beta_unitary(alg, gen, 1e-2);
  Walk w(beta, 6);
  std::mt19937_64 rng(9);
  Vector x = qrwalk::testing::random_element(alg, rng);
  Vector y = qrwalk::testing::random_element(alg, rng);
  Matrix defect = w.apply(alg.multiply(x, y)) - w.apply(x) * w.apply(y);
  CHECK(operator_norm(defect) <= 1e-9);
}

TEST_CASE("truncated walk defect grows at most linearly in the step count") {
  auto [alg, gen] = qrwalk::testing::m2_model();
  ELModule el = build_el(build_gns(alg, gen));
  ThetaFamily fam = ThetaFamily::seed(el);
  fam.extend_to(2);
  BlockHom beta = beta_truncated(fam, 1e-2, 2);
  std::mt19937_64 rng(10);
  Vector x = qrwalk::testing::random_element(alg, rng);
  Vector y = qrwalk::testing::random_element(alg, rng);
  const double single = beta.homomorphism_defect(x, y);
  const Index n = 5;
  Walk w(beta, n);
  const double walk_defect = operator_norm(w.apply(alg.multiply(x, y)) - w.apply(x) * w.apply(y));
  CHECK(walk_defect <= 2.0 * double(n) * single);
}

TEST_CASE("vacuum expectation: both routes agree") {
  auto [alg, gen] = qrwalk::testing::m2_model();
  for (const char* kind : {"unitary", "truncated"}) {
    BlockHom beta = [&] {
      if (std::string(kind) == "unitary") return beta_unitary(alg, gen, 0.05);
      ELModule el = build_el(build_gns(alg, gen));
      ThetaFamily fam = ThetaFamily::seed(el);
      fam.extend_to(2);
      return beta_truncated(fam, 0.05, 2);
    }();
    std::mt19937_64 rng(11);
    Vector x = qrwalk::testing::random_element(alg, rng);
    for (Index n : {Index(4), Index(8)}) {
      Vector fast = vacuum_expectation(beta, x, n);
      Vector full = vacuum_expectation_full(beta, x, n);
      CHECK((fast - full).norm() <= 1e-10);
    }
  }
}

TEST_CASE("semigroup oracle: amplitude damping decays E_11 exponentially") {
  auto [alg, gen] = qrwalk::testing::m2_model();
  Matrix e11 = unit_matrix(2, 0, 0);
  Matrix evolved = semigroup_apply(alg, gen, 1.0, e11);
  CHECK((evolved - std::exp(-1.0) * e11).norm() <= 1e-12);
  // L(E11) = -E11, so the semigroup acts by e^{-t} on it
  Matrix evolved2 = semigroup_apply(alg, gen, 2.5, e11);
  CHECK((evolved2 - std::exp(-2.5) * e11).norm() <= 1e-12);
}

TEST_CASE("semigroup convergence of the truncated walk is first order") {
  auto [alg, gen] = qrwalk::testing::m2_model();
  ELModule el = build_el(build_gns(alg, gen));
  ThetaFamily fam = ThetaFamily::seed(el);
  fam.extend_to(2);
  std::vector<double> h_list;
  for (int k = 4; k <= 8; ++k) h_list.push_back(std::pow(2.0, -k));
  auto rows = convergence_report(
      alg, gen, [&](double h) { return beta_truncated(fam, h, 2).beta00_matrix(); }, 1.0, h_list);
  CHECK(rows.size() == h_list.size() * alg.dim());
  const Index m = alg.dim();
  // every row carrying signal halves its error with h; rows at the
  // roundoff floor carry no convergence information
  for (size_t i = m; i < rows.size(); ++i) {
    if (rows[i].error <= 1e-12) continue;
    CHECK(rows[i].ratio >= 1.8);
    CHECK(rows[i].ratio <= 2.2);
  }
  // aggregate error per h behaves the same way
  for (size_t block = 1; block < h_list.size(); ++block) {
    double prev = 0.0, cur = 0.0;
    for (Index j = 0; j < m; ++j) {
      prev = std::max(prev, rows[(block - 1) * m + j].error);
      cur = std::max(cur, rows[block * m + j].error);
    }
    CHECK(prev / cur >= 1.8);
    CHECK(prev / cur <= 2.2);
  }

  // the polar-unitarized step happens to be second order on this model
  auto urows = convergence_report(
      alg, gen, [&](double h) { return beta_unitary(alg, gen, h).beta00_matrix(); }, 1.0, h_list);
  double worst = 0.0;
  for (size_t i = m; i < urows.size(); ++i)
    if (urows[i].error > 1e-12) worst = std::max(worst, std::abs(urows[i].ratio - 4.0));
  CHECK(worst < 0.2);

  CHECK_THROWS_AS(convergence_report(
                      alg, gen, [&](double h) { return beta_unitary(alg, gen, h).beta00_matrix(); },
                      1.0, std::vector<double>{0.3}),
                  InvariantError);
}

TEST_CASE("walks over proper subalgebras refuse once slot blocks leave A") {
  auto alg = StarAlgebra::diagonal(2);
  Matrix e12 = Matrix::Zero(2, 2);
  e12(0, 1) = 1.0;
  LindbladGenerator gen(Matrix::Zero(2, 2), {e12});
  ELModule el = build_el(build_gns(alg, gen));
  ThetaFamily fam = ThetaFamily::seed(el);
  fam.extend_to(2);
  BlockHom beta = beta_truncated(fam, 0.05, 2);
  // the off-diagonal corners land outside the diagonal algebra
  CHECK_THROWS_AS(Walk(beta, 2), InvariantError);

  // the vacuum iteration never leaves A and still converges at first order
  std::vector<double> h_list = {0.125, 0.0625, 0.03125};
  auto rows = convergence_report(
      alg, gen, [&](double h) { return beta_truncated(fam, h, 2).beta00_matrix(); }, 1.0, h_list);
  for (size_t block = 1; block < h_list.size(); ++block) {
    double prev = 0.0, cur = 0.0;
    for (Index j = 0; j < alg.dim(); ++j) {
      prev = std::max(prev, rows[(block - 1) * alg.dim() + j].error);
      cur = std::max(cur, rows[block * alg.dim() + j].error);
    }
    CHECK(prev / cur == doctest::Approx(2.0).epsilon(0.15));
  }
}

TEST_CASE("unitary walk on the M_3 model") {
  auto model = qrwalk::testing::m3_model();
  BlockHom beta = beta_unitary(model.algebra, model.generator, 0.05);
  Walk w(beta, 3);
  CHECK(w.dim() == 3 * 27);
  std::mt19937_64 rng(14);
  Vector x = qrwalk::testing::random_element(model.algebra, rng);
  Vector y = qrwalk::testing::random_element(model.algebra, rng);
  Matrix defect = w.apply(model.algebra.multiply(x, y)) - w.apply(x) * w.apply(y);
  CHECK(operator_norm(defect) <= 1e-9);
}

TEST_CASE("product states compress exponential vectors slot-wise") {
  Vector u(2);
  u << 1.0, 0.0;
  std::vector<Vector> samples = {Vector::Constant(1, Complex(0.5, 0.25)),
                                 Vector::Constant(1, Complex(-1.0, 0.0))};
  ProductState state = product_state_from_samples(u, samples, 0.04);
  CHECK(state.slots.size() == 2);
  CHECK(state.slots[0](0) == Complex(1.0));
  CHECK(std::abs(state.slots[0](1) - Complex(0.1, 0.05)) < 1e-15);
  Vector v = state_vector(state);
  CHECK(v.size() == 2 * 2 * 2);
  // <v, j_n(1) v> equals ||v||^2 for the unitary walk
  auto [alg, gen] = qrwalk::testing::m2_model();
  BlockHom beta = beta_unitary(alg, gen, 0.04);
  Walk w(beta, 2);
  Complex quad = v.adjoint() * w.apply(alg.unit()) * v;
  CHECK(std::abs(quad - Complex(v.squaredNorm())) < 1e-10);
}
