#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qrwalk/el_module.hpp"
#include "qrwalk/hochschild.hpp"
#include "cohomology_oracle.hpp"
#include "test_models.hpp"

using namespace qrwalk;

namespace {

Cochain random_cochain(const CochainComplex& complex, Index degree, std::mt19937_64& rng) {
  Cochain f = Cochain::zero(degree, complex.module().dim, complex.table().dim);
  f.values = random_matrix(f.values.rows(), f.values.cols(), rng);
  return f;
}

ELModule m2_el() {
  auto model = qrwalk::testing::m2_model();
  return build_el(build_gns(model.algebra, model.generator));
}

}  // namespace

TEST_CASE("coboundary of a coboundary vanishes") {
  ELModule el = m2_el();
  const StarAlgebra& alg = el.algebra();
  std::mt19937_64 rng(21);
  for (Corner c : kCorners) {
    CochainComplex complex(alg.table(), el.corner(c).actions);
    Cochain n0 = random_cochain(complex, 0, rng);
    auto [ok0, r0] = complex.is_cocycle(complex.coboundary(n0), 1e-10);
    CHECK(ok0);  // inner 1-cochains are cocycles
    Cochain f = random_cochain(complex, 1, rng);
    auto [ok1, r1] = complex.is_cocycle(complex.coboundary(f), 1e-10);
    CHECK(ok1);
  }
}

TEST_CASE("coboundary matrices compose to zero") {
  ELModule el = m2_el();
  const StarAlgebra& alg = el.algebra();
  for (Corner c : kCorners) {
    CochainComplex complex(alg.table(), el.corner(c).actions);
    for (Index n : {0, 1}) {
      SparseMatrix prod = complex.coboundary_matrix(n + 1) * complex.coboundary_matrix(n);
      CHECK(prod.norm() <= 1e-10);
    }
  }
}

TEST_CASE("matrix and dense evaluation of the coboundary agree") {
  ELModule el = m2_el();
  const StarAlgebra& alg = el.algebra();
  CochainComplex complex(alg.table(), el.corner(Corner::Ba11).actions);
  std::mt19937_64 rng(31);
  for (Index degree : {0, 1, 2}) {
    Cochain f = random_cochain(complex, degree, rng);
    Cochain d = complex.coboundary(f);
    Vector via_matrix = complex.coboundary_matrix(degree) * Vector(f.vec());
    CHECK((via_matrix - Vector(d.vec())).norm() < 1e-12);
  }
}

TEST_CASE("degree above two is rejected") {
  ELModule el = m2_el();
  CochainComplex complex(el.algebra().table(), el.corner(Corner::A00).actions);
  Cochain f = Cochain::zero(3, complex.module().dim, complex.table().dim);
  CHECK_THROWS_AS(complex.coboundary(f), Error);
  CHECK_THROWS_AS(complex.coboundary_matrix(3), Error);
  CHECK_THROWS_AS(complex.cohomology_dim(3), Error);
}

TEST_CASE("delta is a 1-cocycle over the M corner") {
  auto model = qrwalk::testing::m2_model();
  GnsData gns = build_gns(model.algebra, model.generator);
  ELModule el = build_el(gns);
  const CornerRep& m10 = el.corner(Corner::M10);
  CochainComplex complex(model.algebra.table(), m10.actions);
  Cochain delta = Cochain::zero(1, m10.dim(), model.algebra.dim());
  for (Index j = 0; j < model.algebra.dim(); ++j)
    delta.values.col(j) = m10.coords(gns.delta(model.algebra.basis()[j]));
  auto [ok, residual] = complex.is_cocycle(delta, 1e-10);
  CHECK(ok);
  CHECK(residual <= 1e-10);
}

TEST_CASE("H^n(M_2, M_2) and the corner cohomology vanish in degrees 1 and 2") {
  ELModule el = m2_el();
  const StarAlgebra& alg = el.algebra();

  Bimodule self = bimodule_over_self(alg.table());
  CochainComplex over_self(alg.table(), self);
  CHECK(over_self.cohomology_dim(0) == 1);  // center of M_2
  CHECK(over_self.cohomology_dim(1) == 0);
  CHECK(over_self.cohomology_dim(2) == 0);

  // brute-force oracle agreement on the full cochain spaces
  for (Index n : {0, 1, 2})
    CHECK(over_self.cohomology_dim(n) == oracle::brute_h(alg.table(), self, n));

  for (Corner c : kCorners) {
    CochainComplex complex(alg.table(), el.corner(c).actions);
    CHECK(complex.cohomology_dim(1) == 0);
    CHECK(complex.cohomology_dim(2) == 0);
    for (Index n : {0, 1, 2})
      CHECK(complex.cohomology_dim(n) ==
            oracle::brute_h(alg.table(), el.corner(c).actions, n));
  }
}

TEST_CASE("E_L as one bimodule gives the same cohomology as the corner sum") {
  ELModule el = m2_el();
  const StarAlgebra& alg = el.algebra();
  Bimodule whole = el.whole_bimodule();
  CHECK(whole.dim == 16);
  CHECK(whole.axiom_defect(alg.table()) < 1e-10);
  CochainComplex complex(alg.table(), whole);
  for (Index n : {0, 1, 2}) {
    Index corner_sum = 0;
    for (Corner c : kCorners)
      corner_sum += CochainComplex(alg.table(), el.corner(c).actions).cohomology_dim(n);
    CHECK(complex.cohomology_dim(n) == corner_sum);
    CHECK(complex.cohomology_dim(n) == oracle::brute_h(alg.table(), whole, n));
  }
}

TEST_CASE("dual numbers: the negative control has H^2 = 1") {
  AlgebraTable dual = dual_numbers();
  Bimodule self = bimodule_over_self(dual);
  CHECK(self.axiom_defect(dual) == 0.0);
  CochainComplex complex(dual, self);
  CHECK(complex.cohomology_dim(2) == 1);
  CHECK(oracle::brute_h(dual, self, 2) == 1);
}

TEST_CASE("is_cocycle on the quadratic GNS 2-cochain") {
  auto model = qrwalk::testing::m2_model();
  GnsData gns = build_gns(model.algebra, model.generator);
  ELModule el = build_el(gns);
  const CornerRep& ba = el.corner(Corner::Ba11);
  const Index m = model.algebra.dim();
  CochainComplex complex(model.algebra.table(), ba.actions);
  Cochain phi = Cochain::zero(2, ba.dim(), m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      // delta(x) delta^dag(y): (D x d) times (d x D) lands in B^a(M)
      Matrix value =
          gns.delta(model.algebra.basis()[i]) * gns.delta_dagger(model.algebra.basis()[j]);
      phi.values.col(i * m + j) = ba.coords(value);
    }
  auto [ok, residual] = complex.is_cocycle(phi, 1e-10);
  CHECK(ok);
  CHECK(residual <= 1e-10);

  std::mt19937_64 rng(41);
  Cochain noise = random_cochain(complex, 2, rng);
  auto [ok_noise, res_noise] = complex.is_cocycle(noise, 1e-10);
  CHECK_FALSE(ok_noise);
  CHECK(res_noise > 1e-3);
}

TEST_CASE("solve_coboundary reproduces coboundaries at minimum norm") {
  ELModule el = m2_el();
  const StarAlgebra& alg = el.algebra();
  CochainComplex complex(alg.table(), el.corner(Corner::Ba11).actions);
  std::mt19937_64 rng(51);

  Cochain zero_phi = Cochain::zero(2, complex.module().dim, alg.dim());
  Cochain zero_theta = complex.solve_coboundary(zero_phi);
  CHECK(zero_theta.values.norm() == 0.0);

  Cochain theta0 = random_cochain(complex, 1, rng);
  Cochain phi = complex.coboundary(theta0);
  Cochain theta = complex.solve_coboundary(phi);
  Cochain reached = complex.coboundary(theta);
  CHECK((reached.values - phi.values).norm() < 1e-9);
  // solutions differ from theta0 by a 1-cocycle in general
  CHECK((theta.values - theta0.values).norm() >= 0.0);

  // determinism: identical input, bitwise identical solution
  Cochain theta_again = complex.solve_coboundary(phi);
  CHECK((theta.values - theta_again.values).norm() == 0.0);
}

TEST_CASE("solve_coboundary surfaces the dual-numbers obstruction") {
  AlgebraTable dual = dual_numbers();
  Bimodule self = bimodule_over_self(dual);
  CochainComplex complex(dual, self);
  // representative of the nonzero class: phi(e, e) = 1, zero elsewhere
  Cochain phi = Cochain::zero(2, 2, 2);
  phi.values(0, 1 * 2 + 1) = 1.0;
  auto [ok, residual] = complex.is_cocycle(phi, 1e-12);
  CHECK(ok);
  try {
    complex.solve_coboundary(phi);
    FAIL("expected an obstruction");
  } catch (const ObstructionError& e) {
    CHECK(e.residual > 0.1);
    CHECK(e.h2_dim == 1);
  }
}

TEST_CASE("degree rows for the CLI table are consistent") {
  ELModule el = m2_el();
  CochainComplex complex(el.algebra().table(), el.corner(Corner::A00).actions);
  auto row = complex.degree_row(1);
  CHECK(row.dim_c == 16);
  CHECK(row.kernel == row.dim_c - row.rank);
  CHECK(row.h == complex.cohomology_dim(1));
}

TEST_CASE("M_3 corner cohomology vanishes and matches the brute oracle") {
  auto model = qrwalk::testing::m3_model();
  ELModule el = build_el(build_gns(model.algebra, model.generator));
  // H^1 on every corner; H^2 for the two cheap corners here, all four in
  // the acceptance suite
  for (Corner c : kCorners) {
    CochainComplex complex(model.algebra.table(), el.corner(c).actions);
    CHECK(complex.cohomology_dim(1) == 0);
  }
  for (Corner c : {Corner::A00, Corner::M10}) {
    CochainComplex complex(model.algebra.table(), el.corner(c).actions);
    CHECK(complex.cohomology_dim(2) == 0);
    CHECK(oracle::brute_h(model.algebra.table(), el.corner(c).actions, 2) == 0);
  }
}
