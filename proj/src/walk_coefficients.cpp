#include "qrwalk/walk_coefficients.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace qrwalk {

namespace {

using nlohmann::json;

constexpr int ci(Corner c) { return static_cast<int>(c); }

json matrix_to_json(const Matrix& a) {
  json rows = json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows, Index expect_rows, Index expect_cols) {
  if (!rows.is_array() || static_cast<Index>(rows.size()) != expect_rows)
    throw ConfigError("coefficient file: matrix row count mismatch");
  Matrix a(expect_rows, expect_cols);
  for (Index i = 0; i < expect_rows; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != expect_cols)
      throw ConfigError("coefficient file: matrix column count mismatch");
    for (Index j = 0; j < expect_cols; ++j)
      a(i, j) = Complex(row[j][0].get<double>(), row[j][1].get<double>());
  }
  return a;
}

std::string hash_string(std::uint64_t h) {
  std::ostringstream os;
  os << "0x" << std::hex << h;
  return os.str();
}

}  // namespace

ThetaFamily ThetaFamily::seed(ELModule el) {
  ThetaFamily fam(std::move(el));
  const StarAlgebra& alg = fam.el_.algebra();
  const GnsData& gns = fam.el_.gns();
  const Index m = alg.dim();

  fam.theta_.resize(2);
  auto& level0 = fam.theta_[0][ci(Corner::A00)];
  auto& l1_00 = fam.theta_[1][ci(Corner::A00)];
  auto& l1_10 = fam.theta_[1][ci(Corner::M10)];
  auto& l1_11 = fam.theta_[1][ci(Corner::Ba11)];
  for (Index j = 0; j < m; ++j) {
    const Matrix& b = alg.basis()[j];
    level0.push_back(b);
    l1_00.push_back(gns.generator().apply(b));
    l1_10.push_back(gns.delta(b));
    l1_11.push_back(fam.el_.pi_el(b));
  }
  fam.theta_[1][ci(Corner::MStar01)] = dagger_cochain(fam.el_, l1_10);
  fam.order_ = 1;
  return fam;
}

bool ThetaFamily::has(Index n, Corner c) const {
  if (n < 0 || n >= static_cast<Index>(theta_.size())) return false;
  if (n == 0) return c == Corner::A00;
  return !theta_[n][ci(c)].empty();
}

const std::vector<Matrix>& ThetaFamily::theta(Index n, Corner c) const {
  if (!has(n, c)) {
    std::ostringstream os;
    os << "theta_" << corner_name(c) << "^(" << n << ") is not available (order " << order_
       << ")";
    throw InvariantError(os.str());
  }
  return theta_[n][ci(c)];
}

Matrix ThetaFamily::eval(Index n, Corner c, const Vector& xcoeffs) const {
  const auto& values = theta(n, c);
  Matrix out = Matrix::Zero(values[0].rows(), values[0].cols());
  for (Index j = 0; j < xcoeffs.size(); ++j)
    if (xcoeffs(j) != 0.0) out += xcoeffs(j) * values[j];
  return out;
}

std::vector<Matrix>& ThetaFamily::slot(Index n, Corner c) {
  return theta_[n][ci(c)];
}

const CochainComplex& ThetaFamily::complex_for(Corner c) const {
  auto& ptr = complexes_[ci(c)];
  if (!ptr)
    ptr = std::make_shared<CochainComplex>(el_.algebra().table(), el_.corner(c).actions);
  return *ptr;
}

// Right-hand sides of the level-n coboundary equations, with the summation
// ranges of the inductive construction (boundary terms live on the d-theta
// side).
std::vector<Matrix> ThetaFamily::phi_rhs(Corner c, Index n) const {
  if (n < 2) throw InvariantError("phi_rhs: levels start at n = 2");
  const Index m = algebra().dim();
  auto term_shape = [&](Corner target) {
    const CornerRep& rep = el_.corner(target);
    return Matrix::Zero(rep.rows, rep.cols);
  };
  std::vector<Matrix> phi(m * m, term_shape(c));
  auto accumulate = [&](Corner cx, Index nx, Corner cy, Index ny) {
    const auto& tx = theta(nx, cx);
    const auto& ty = theta(ny, cy);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) phi[i * m + j] += tx[i] * ty[j];
  };
  switch (c) {
    case Corner::Ba11:
      for (Index k = 1; k <= n - 1; ++k) accumulate(Corner::M10, k, Corner::MStar01, n - k);
      for (Index k = 2; k <= n - 1; ++k) accumulate(Corner::Ba11, k, Corner::Ba11, n - k + 1);
      break;
    case Corner::M10:
      for (Index k = 1; k <= n - 1; ++k) accumulate(Corner::M10, k, Corner::A00, n - k);
      for (Index k = 2; k <= n; ++k) accumulate(Corner::Ba11, k, Corner::M10, n - k + 1);
      break;
    case Corner::MStar01:
      for (Index k = 1; k <= n - 1; ++k) accumulate(Corner::A00, k, Corner::MStar01, n - k);
      for (Index k = 1; k <= n - 1; ++k) accumulate(Corner::MStar01, k, Corner::Ba11, n - k + 1);
      break;
    case Corner::A00:
      for (Index k = 1; k <= n - 1; ++k) accumulate(Corner::A00, k, Corner::A00, n - k);
      for (Index k = 1; k <= n; ++k) accumulate(Corner::MStar01, k, Corner::M10, n - k + 1);
      break;
  }
  return phi;
}

void ThetaFamily::extend(Index level) {
  if (level != order_ + 1)
    throw InvariantError("extend: levels must be added one at a time");
  if (level < 2) throw InvariantError("extend: the seed already covers levels 0 and 1");
  const StarAlgebra& alg = el_.algebra();
  const Matrix& star = alg.star_table();
  const Index m = alg.dim();
  theta_.resize(level + 1);
  LevelRecord record;
  record.level = level;

  // Data dependencies force the corner order 11 -> 10 -> 01 -> 00.
  const std::array<Corner, 4> order_in_level = {Corner::Ba11, Corner::M10, Corner::MStar01,
                                                Corner::A00};
  for (Corner c : order_in_level) {
    const CornerRep& rep = el_.corner(c);
    std::vector<Matrix> phi = phi_rhs(c, level);

    // (phi_{mu nu}(y*, x*))* = phi_{nu mu}(x, y); the dagger partner of the
    // off-diagonal right-hand sides is the opposite corner.
    std::vector<Matrix> phi_partner =
        dagger_corner(c) == c ? phi : phi_rhs(dagger_corner(c), level);
    double sym_defect = 0.0;
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) {
        Matrix mirrored = Matrix::Zero(rep.rows, rep.cols);  // phi(y*, x*)
        for (Index k = 0; k < m; ++k)
          for (Index l = 0; l < m; ++l) {
            const Complex s = star(k, j) * star(l, i);
            if (s != 0.0) mirrored += s * phi[k * m + l];
          }
        sym_defect =
            std::max(sym_defect, (mirrored.adjoint() - phi_partner[i * m + j]).norm());
      }
    record.phi_dagger_defect[ci(c)] = sym_defect;

    const CochainComplex& complex = complex_for(c);
    Cochain phi_c = Cochain::zero(2, rep.dim(), m);
    double coord_residual = 0.0;
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) {
        double r = 0.0;
        phi_c.values.col(i * m + j) = rep.coords(phi[i * m + j], &r);
        coord_residual = std::max(coord_residual, r);
      }
    if (coord_residual > 1e-8) {
      std::ostringstream os;
      os << "extend: phi_" << corner_name(c) << "^(" << level << ") leaves its corner (residual "
         << coord_residual << ")";
      throw InvariantError(os.str());
    }

    auto [ok, cocycle_res] = complex.is_cocycle(phi_c, cocycle_tol);
    record.cocycle_residual[ci(c)] = cocycle_res;
    if (!ok) {
      std::ostringstream os;
      os << "extend: phi_" << corner_name(c) << "^(" << level
         << ") is not a 2-cocycle (residual " << cocycle_res << ")";
      throw InvariantError(os.str());
    }

    std::vector<Matrix> values(m);
    if (c == Corner::MStar01) {
      values = dagger_cochain(el_, theta(level, Corner::M10));
    } else {
      Cochain theta_c = complex.solve_coboundary(phi_c, solve_tol);
      for (Index j = 0; j < m; ++j) values[j] = rep.realize(theta_c.values.col(j));
      if (c == Corner::Ba11 || c == Corner::A00) {
        std::vector<Matrix> daggered = dagger_cochain(el_, values);
        for (Index j = 0; j < m; ++j) values[j] = 0.5 * (values[j] + daggered[j]);
      }
    }
    slot(level, c) = values;

    // Residual of the coboundary equation for the stored (symmetrized or
    // daggered) representative.
    Cochain theta_c = Cochain::zero(1, rep.dim(), m);
    for (Index j = 0; j < m; ++j) theta_c.values.col(j) = rep.coords(values[j]);
    Cochain reached = complex.coboundary(theta_c);
    double solve_res = 0.0;
    for (Index col = 0; col < reached.tuple_cols(); ++col)
      solve_res = std::max(solve_res, (reached.values.col(col) - phi_c.values.col(col)).norm());
    record.solve_residual[ci(c)] = solve_res;
    if (solve_res > solve_tol) {
      std::ostringstream os;
      os << "extend: coboundary residual for theta_" << corner_name(c) << "^(" << level << ") is "
         << solve_res;
      throw InvariantError(os.str());
    }
  }
  records_.push_back(record);
  order_ = level;
}

void ThetaFamily::extend_to(Index order) {
  while (order_ < order) extend(order_ + 1);
}

double ThetaFamily::dagger_defect() const {
  const StarAlgebra& alg = el_.algebra();
  const Matrix& star = alg.star_table();
  double worst = 0.0;
  for (Index n = 1; n <= order_; ++n)
    for (Corner c : kCorners)
      for (Index j = 0; j < alg.dim(); ++j) {
        Matrix lhs = eval(n, c, star.col(j));
        Matrix rhs = theta(n, dagger_corner(c))[j].adjoint();
        worst = std::max(worst, operator_norm(lhs - rhs));
      }
  return worst;
}

RelationReport verify_relations(const ThetaFamily& fam) {
  const StarAlgebra& alg = fam.algebra();
  const Index m = alg.dim();
  RelationReport report;
  report.by_level.assign(fam.order(), {});
  for (Index n = 1; n <= fam.order(); ++n) {
    auto& row = report.by_level[n - 1];
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < m; ++j) {
        const Matrix& x = alg.basis()[i];
        const Matrix& y = alg.basis()[j];
        Vector xy = alg.coords(x * y);
        Vector ei = Vector::Unit(m, i);
        Vector ej = Vector::Unit(m, j);

        Matrix r11 = fam.eval(n, Corner::Ba11, xy);
        for (Index k = 1; k <= n - 1; ++k)
          r11 -= fam.eval(k, Corner::M10, ei) * fam.eval(n - k, Corner::MStar01, ej);
        for (Index k = 1; k <= n; ++k)
          r11 -= fam.eval(k, Corner::Ba11, ei) * fam.eval(n - k + 1, Corner::Ba11, ej);

        Matrix r10 = fam.eval(n, Corner::M10, xy);
        for (Index k = 1; k <= n; ++k)
          r10 -= fam.eval(k, Corner::M10, ei) * fam.eval(n - k, Corner::A00, ej);
        for (Index k = 1; k <= n; ++k)
          r10 -= fam.eval(k, Corner::Ba11, ei) * fam.eval(n - k + 1, Corner::M10, ej);

        Matrix r01 = fam.eval(n, Corner::MStar01, xy);
        for (Index k = 0; k <= n - 1; ++k)
          r01 -= fam.eval(k, Corner::A00, ei) * fam.eval(n - k, Corner::MStar01, ej);
        for (Index k = 1; k <= n; ++k)
          r01 -= fam.eval(k, Corner::MStar01, ei) * fam.eval(n - k + 1, Corner::Ba11, ej);

        Matrix r00 = fam.eval(n, Corner::A00, xy);
        for (Index k = 0; k <= n; ++k)
          r00 -= fam.eval(k, Corner::A00, ei) * fam.eval(n - k, Corner::A00, ej);
        for (Index k = 1; k <= n; ++k)
          r00 -= fam.eval(k, Corner::MStar01, ei) * fam.eval(n - k + 1, Corner::M10, ej);

        row[ci(Corner::Ba11)] = std::max(row[ci(Corner::Ba11)], operator_norm(r11));
        row[ci(Corner::M10)] = std::max(row[ci(Corner::M10)], operator_norm(r10));
        row[ci(Corner::MStar01)] = std::max(row[ci(Corner::MStar01)], operator_norm(r01));
        row[ci(Corner::A00)] = std::max(row[ci(Corner::A00)], operator_norm(r00));
      }
    for (double v : row) report.max_residual = std::max(report.max_residual, v);
  }
  report.dagger_defect = fam.dagger_defect();
  return report;
}

Matrix BetaBlock::eval(Corner c, const Vector& xcoeffs) const {
  const auto& vals = values[ci(c)];
  Matrix out = Matrix::Zero(vals[0].rows(), vals[0].cols());
  for (Index j = 0; j < xcoeffs.size(); ++j)
    if (xcoeffs(j) != 0.0) out += xcoeffs(j) * vals[j];
  return out;
}

BetaBlock assemble_beta(const ThetaFamily& family, double h, Index order) {
  if (order > family.order())
    throw InvariantError("assemble_beta: requested order exceeds the family order");
  if (h < 0) throw InvariantError("assemble_beta: negative step size");
  BetaBlock beta{h, order, family.el(), {}};
  const Index m = family.algebra().dim();
  for (Corner c : kCorners) {
    const CornerRep& rep = family.el().corner(c);
    beta.values[ci(c)].assign(m, Matrix::Zero(rep.rows, rep.cols));
  }
  for (Index j = 0; j < m; ++j) {
    for (Index n = 0; n <= order; ++n) {
      const double w = n == 0 ? 1.0 : std::pow(h, double(n));
      beta.values[ci(Corner::A00)][j] += w * family.theta(n, Corner::A00)[j];
      if (n >= 1) {
        const double w_half = std::pow(h, double(n) - 0.5);
        const double w_11 = n == 1 ? 1.0 : std::pow(h, double(n) - 1.0);
        beta.values[ci(Corner::M10)][j] += w_half * family.theta(n, Corner::M10)[j];
        beta.values[ci(Corner::MStar01)][j] += w_half * family.theta(n, Corner::MStar01)[j];
        beta.values[ci(Corner::Ba11)][j] += w_11 * family.theta(n, Corner::Ba11)[j];
      }
    }
  }
  return beta;
}

std::array<double, 4> multiplicativity_defect(const BetaBlock& beta, const Vector& x,
                                              const Vector& y) {
  const StarAlgebra& alg = beta.el.algebra();
  Vector xy = alg.multiply(x, y);
  Matrix b00x = beta.eval(Corner::A00, x), b00y = beta.eval(Corner::A00, y);
  Matrix b01x = beta.eval(Corner::MStar01, x), b01y = beta.eval(Corner::MStar01, y);
  Matrix b10x = beta.eval(Corner::M10, x), b10y = beta.eval(Corner::M10, y);
  Matrix b11x = beta.eval(Corner::Ba11, x), b11y = beta.eval(Corner::Ba11, y);
  std::array<double, 4> out{};
  out[ci(Corner::A00)] = operator_norm(beta.eval(Corner::A00, xy) - b00x * b00y - b01x * b10y);
  out[ci(Corner::MStar01)] =
      operator_norm(beta.eval(Corner::MStar01, xy) - b00x * b01y - b01x * b11y);
  out[ci(Corner::M10)] = operator_norm(beta.eval(Corner::M10, xy) - b10x * b00y - b11x * b10y);
  out[ci(Corner::Ba11)] = operator_norm(beta.eval(Corner::Ba11, xy) - b10x * b01y - b11x * b11y);
  return out;
}

std::array<double, 4> max_multiplicativity_defect(const BetaBlock& beta) {
  const Index m = beta.el.algebra().dim();
  std::array<double, 4> out{};
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      auto d = multiplicativity_defect(beta, Vector::Unit(m, i), Vector::Unit(m, j));
      for (int c = 0; c < 4; ++c) out[c] = std::max(out[c], d[c]);
    }
  return out;
}

double beta_dagger_defect(const BetaBlock& beta) {
  const StarAlgebra& alg = beta.el.algebra();
  const Matrix& star = alg.star_table();
  double worst = 0.0;
  for (Corner c : kCorners)
    for (Index j = 0; j < alg.dim(); ++j) {
      Matrix lhs = beta.eval(c, star.col(j));
      Matrix rhs = beta.eval(dagger_corner(c), Vector::Unit(alg.dim(), j)).adjoint();
      worst = std::max(worst, operator_norm(lhs - rhs));
    }
  return worst;
}

double beta_unit_defect(const BetaBlock& beta) {
  const Vector one = beta.el.algebra().unit();
  double worst = 0.0;
  for (Corner c : kCorners)
    worst = std::max(worst, operator_norm(beta.eval(c, one) - beta.el.unit(c)));
  return worst;
}

void save_theta_family(const ThetaFamily& family, const std::string& path) {
  const ELModule& el = family.el();
  const StarAlgebra& alg = el.algebra();
  json doc;
  doc["format"] = "qrwalk-theta-v1";
  doc["algebra_hash"] = hash_string(alg.content_hash());
  doc["ambient_dim"] = alg.ambient_dim();
  doc["algebra_dim"] = alg.dim();
  doc["multiplicity"] = el.gns().multiplicity();
  doc["dim_m"] = el.gns().dim_m();
  doc["order"] = family.order();
  json basis = json::array();
  for (const Matrix& b : el.gns().m_basis()) basis.push_back(matrix_to_json(b));
  doc["gns_basis"] = std::move(basis);

  json levels = json::array();
  for (Index n = 0; n <= family.order(); ++n) {
    json level;
    level["n"] = n;
    json theta;
    static const char* keys[4] = {"00", "01", "10", "11"};
    for (Corner c : kCorners) {
      if (!family.has(n, c)) continue;
      json values = json::array();
      for (const Matrix& v : family.theta(n, c)) values.push_back(matrix_to_json(v));
      theta[keys[ci(c)]] = std::move(values);
    }
    level["theta"] = std::move(theta);
    levels.push_back(std::move(level));
  }
  doc["levels"] = std::move(levels);

  json records = json::array();
  for (const LevelRecord& r : family.records()) {
    json rec;
    rec["level"] = r.level;
    rec["cocycle_residual"] = r.cocycle_residual;
    rec["solve_residual"] = r.solve_residual;
    rec["phi_dagger_defect"] = r.phi_dagger_defect;
    records.push_back(std::move(rec));
  }
  doc["records"] = std::move(records);

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open coefficient file for writing: " + path);
  out << doc.dump(1) << "\n";
}

ThetaFamily load_theta_family(const ELModule& el, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open coefficient file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("coefficient file parse error: ") + e.what());
  }
  if (doc.value("format", "") != "qrwalk-theta-v1")
    throw ConfigError("coefficient file: unknown format");
  const StarAlgebra& alg = el.algebra();
  if (doc.value("algebra_hash", "") != hash_string(alg.content_hash()))
    throw ConfigError("coefficient file: algebra hash mismatch");
  if (doc["ambient_dim"].get<Index>() != alg.ambient_dim() ||
      doc["algebra_dim"].get<Index>() != alg.dim() ||
      doc["multiplicity"].get<Index>() != el.gns().multiplicity() ||
      doc["dim_m"].get<Index>() != el.gns().dim_m())
    throw ConfigError("coefficient file: dimensions do not match the module");

  ThetaFamily fam = ThetaFamily::seed(el);
  const Index order = doc["order"].get<Index>();
  fam.theta_.resize(order + 1);
  static const char* keys[4] = {"00", "01", "10", "11"};
  for (const json& level : doc["levels"]) {
    const Index n = level["n"].get<Index>();
    if (n < 0 || n > order) throw ConfigError("coefficient file: level out of range");
    const json& theta = level["theta"];
    for (Corner c : kCorners) {
      if (!theta.contains(keys[ci(c)])) continue;
      const CornerRep& rep = el.corner(c);
      std::vector<Matrix> values;
      for (const json& v : theta[keys[ci(c)]])
        values.push_back(matrix_from_json(v, rep.rows, rep.cols));
      if (static_cast<Index>(values.size()) != alg.dim())
        throw ConfigError("coefficient file: wrong number of basis values");
      fam.theta_[n][ci(c)] = std::move(values);
    }
  }
  fam.order_ = order;
  fam.records_.clear();
  for (const json& rec : doc.value("records", json::array())) {
    LevelRecord r;
    r.level = rec["level"].get<Index>();
    for (int c = 0; c < 4; ++c) {
      r.cocycle_residual[c] = rec["cocycle_residual"][c].get<double>();
      r.solve_residual[c] = rec["solve_residual"][c].get<double>();
      r.phi_dagger_defect[c] = rec["phi_dagger_defect"][c].get<double>();
    }
    fam.records_.push_back(r);
  }
  return fam;
}

}  // namespace qrwalk
