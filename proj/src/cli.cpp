#include "qrwalk/cli.hpp"

#include "qrwalk/el_module.hpp"
#include "qrwalk/gns.hpp"
#include "qrwalk/hochschild.hpp"
#include "qrwalk/numeric.hpp"
#include "qrwalk/toy_fock.hpp"
#include "qrwalk/walk_coefficients.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace qrwalk {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_residual(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

void print_table_header(std::ostream& out) {
  out << std::left << std::setw(10) << "module" << std::right << std::setw(8) << "degree"
      << std::setw(10) << "dim_C" << std::setw(10) << "rank_d" << std::setw(10) << "dim_ker"
      << std::setw(10) << "dim_H" << "\n";
}

void print_table_row(std::ostream& out, const std::string& name,
                     const CochainComplex::DegreeRow& r) {
  out << std::left << std::setw(10) << name << std::right << std::setw(8) << r.degree
      << std::setw(10) << r.dim_c << std::setw(10) << r.rank << std::setw(10) << r.kernel
      << std::setw(10) << r.h << "\n";
}

}  // namespace

int cmd_gns(const ExperimentConfig& cfg, double tol, std::ostream& out) {
  StarAlgebra alg = cfg.make_algebra();
  LindbladGenerator gen = cfg.make_generator();
  GnsData gns = build_gns(alg, gen, cfg.gns_tol);
  ELModule el = build_el(gns, cfg.gns_tol);

  double residual = gns.identity_residual();
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < 100; ++i) {
    Matrix x = alg.to_matrix(random_matrix(alg.dim(), 1, rng).col(0));
    Matrix y = alg.to_matrix(random_matrix(alg.dim(), 1, rng).col(0));
    residual = std::max(residual, gns_defect(gns, x, y));
  }

  out << "dim M = " << gns.dim_m() << "\n";
  out << "dim B^a(M) = " << el.corner(Corner::Ba11).dim() << "\n";
  out << "max GNS identity residual = " << fmt_residual(residual) << "\n";
  return residual <= tol ? kExitOk : kExitInvariant;
}

int cmd_cohomology(const ExperimentConfig& cfg, Index degree, std::ostream& out) {
  if (degree < 0 || degree > 2) throw ConfigError("cohomology degree must be 0, 1 or 2");
  print_table_header(out);
  if (cfg.is_table_algebra()) {
    CochainComplex complex(*cfg.table, bimodule_over_self(*cfg.table));
    for (Index n = 0; n <= degree; ++n) print_table_row(out, "A", complex.degree_row(n));
    return kExitOk;
  }
  StarAlgebra alg = cfg.make_algebra();
  LindbladGenerator gen = cfg.make_generator();
  GnsData gns = build_gns(alg, gen, cfg.gns_tol);
  ELModule el = build_el(gns, cfg.gns_tol);
  std::array<std::vector<CochainComplex::DegreeRow>, 4> rows;
  for (Corner c : kCorners) {
    CochainComplex complex(alg.table(), el.corner(c).actions);
    for (Index n = 0; n <= degree; ++n) rows[static_cast<int>(c)].push_back(complex.degree_row(n));
  }
  for (Corner c : kCorners)
    for (const auto& r : rows[static_cast<int>(c)]) print_table_row(out, corner_name(c), r);
  for (Index n = 0; n <= degree; ++n) {
    CochainComplex::DegreeRow sum;
    sum.degree = n;
    for (Corner c : kCorners) {
      const auto& r = rows[static_cast<int>(c)][n];
      sum.dim_c += r.dim_c;
      sum.rank += r.rank;
      sum.kernel += r.kernel;
      sum.h += r.h;
    }
    print_table_row(out, "E_L", sum);
  }
  return kExitOk;
}

int cmd_coeffs(const ExperimentConfig& cfg, Index order, double tol, const std::string& out_path,
               std::ostream& out) {
  StarAlgebra alg = cfg.make_algebra();
  LindbladGenerator gen = cfg.make_generator();
  GnsData gns = build_gns(alg, gen, cfg.gns_tol);
  ELModule el = build_el(gns, cfg.gns_tol);

  Index h2 = 0;
  for (Corner c : kCorners)
    h2 += CochainComplex(alg.table(), el.corner(c).actions).cohomology_dim(2);
  out << "dim H^2(A, E_L) = " << h2 << "\n";
  if (h2 > 0)
    throw ObstructionError("H^2(A, E_L) != 0: the coefficient induction is obstructed (dim " +
                               std::to_string(h2) + ")",
                           h2, 0.0);

  ThetaFamily family = ThetaFamily::seed(el);
  family.cocycle_tol = cfg.cocycle_tol;
  family.solve_tol = cfg.solve_tol;
  family.extend_to(order);
  for (const LevelRecord& r : family.records()) {
    double cocycle = 0.0, solve = 0.0;
    for (int c = 0; c < 4; ++c) {
      cocycle = std::max(cocycle, r.cocycle_residual[c]);
      solve = std::max(solve, r.solve_residual[c]);
    }
    out << "level " << r.level << ": cocycle residual " << fmt_residual(cocycle)
        << ", solve residual " << fmt_residual(solve) << "\n";
  }

  RelationReport rep = verify_relations(family);
  out << "max relation residual = " << fmt_residual(rep.max_residual) << "\n";
  out << "max dagger defect = " << fmt_residual(rep.dagger_defect) << "\n";
  const double unit_defect = beta_unit_defect(assemble_beta(family, 1.0, order));
  if (unit_defect > 1e-10)
    out << "warning: beta(1) deviates from the block identity by " << fmt_residual(unit_defect)
        << "\n";

  save_theta_family(family, out_path);
  out << "coefficients written to " << out_path << "\n";
  return rep.max_residual <= tol ? kExitOk : kExitInvariant;
}

int cmd_walk(const ExperimentConfig& cfg, const std::string& out_path, std::ostream& out) {
  if (cfg.h_list.empty()) throw ConfigError("cmd_walk needs a non-empty h_list");
  StarAlgebra alg = cfg.make_algebra();
  LindbladGenerator gen = cfg.make_generator();

  std::function<Matrix(double)> beta00_of_h;
  std::shared_ptr<ThetaFamily> family;
  if (cfg.walk_beta == "unitary") {
    beta00_of_h = [&](double h) { return beta_unitary(alg, gen, h).beta00_matrix(); };
  } else {
    GnsData gns = build_gns(alg, gen, cfg.gns_tol);
    family = std::make_shared<ThetaFamily>(ThetaFamily::seed(build_el(gns, cfg.gns_tol)));
    family->cocycle_tol = cfg.cocycle_tol;
    family->solve_tol = cfg.solve_tol;
    family->extend_to(cfg.walk_order);
    beta00_of_h = [&, family](double h) {
      return beta_truncated(*family, h, cfg.walk_order).beta00_matrix();
    };
  }

  auto rows = convergence_report(alg, gen, beta00_of_h, cfg.t, cfg.h_list);

  std::ofstream csv(out_path);
  if (!csv) throw ConfigError("cannot open walk report for writing: " + out_path);
  csv << "h,n,basis_index,error,ratio\n";
  for (const ConvergenceRow& r : rows) {
    csv << fmt_double(r.h) << "," << r.n << "," << r.basis_index << "," << fmt_double(r.error)
        << ",";
    if (!std::isnan(r.ratio)) csv << fmt_double(r.ratio);
    csv << "\n";
  }

  const Index m = alg.dim();
  for (size_t i = m; i < rows.size(); i += m) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (Index j = 0; j < m; ++j) {
      if (rows[i + j].error <= 1e-12) continue;  // below the roundoff floor
      lo = std::min(lo, rows[i + j].ratio);
      hi = std::max(hi, rows[i + j].ratio);
    }
    out << "h = " << fmt_double(rows[i].h) << ", n = " << rows[i].n << ": error ratio in [";
    if (hi == 0.0)
      out << "-, -]\n";
    else
      out << fmt_residual(lo) << ", " << fmt_residual(hi) << "]\n";
  }
  out << "report written to " << out_path << "\n";

  if (cfg.walk_dump_steps > 0 && !cfg.out_walk_dump.empty()) {
    BlockHom beta = cfg.walk_beta == "unitary"
                        ? beta_unitary(alg, gen, cfg.h_list.front())
                        : beta_truncated(*family, cfg.h_list.front(), cfg.walk_order);
    Walk wk(beta, cfg.walk_dump_steps, cfg.memory_cap_bytes);
    std::ofstream dump(cfg.out_walk_dump);
    if (!dump) throw ConfigError("cannot open walk dump: " + cfg.out_walk_dump);
    for (Index j = 0; j < m; ++j) {
      Matrix op = wk.apply(Vector::Unit(m, j));
      dump << "basis " << j << " steps " << cfg.walk_dump_steps << " rows " << op.rows()
           << " cols " << op.cols() << "\n";
      for (Index r = 0; r < op.rows(); ++r) {
        for (Index c = 0; c < op.cols(); ++c) {
          if (c) dump << " ";
          dump << fmt_double(op(r, c).real()) << " " << fmt_double(op(r, c).imag());
        }
        dump << "\n";
      }
    }
    out << "walk operators dumped to " << cfg.out_walk_dump << "\n";
  }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"GNS bimodules, Hochschild cohomology, walk coefficients and toy Fock walks"};
  app.require_subcommand(1);

  std::string config_path;
  double tol_gns = 1e-10;
  double tol_coeffs = 1e-8;
  Index degree = 2;
  Index order = 0;  // 0: use the config value
  std::string out_path;

  CLI::App* sub_gns = app.add_subcommand("gns", "build the GNS bimodule and report residuals");
  CLI::App* sub_coh = app.add_subcommand("cohomology", "Hochschild cohomology table");
  CLI::App* sub_coeffs = app.add_subcommand("coeffs", "run the coefficient induction");
  CLI::App* sub_walk = app.add_subcommand("walk", "semigroup convergence of the walk");
  for (CLI::App* sub : {sub_gns, sub_coh, sub_coeffs, sub_walk})
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
  sub_gns->add_option("--tol", tol_gns, "residual gate for exit status");
  sub_coh->add_option("--degree", degree, "highest cohomology degree (0-2)");
  sub_coeffs->add_option("--order", order, "series order N");
  sub_coeffs->add_option("--tol", tol_coeffs, "relation residual gate");
  sub_coeffs->add_option("--out", out_path, "coefficient file path");
  sub_walk->add_option("--out", out_path, "CSV report path");

  std::vector<std::string> argv_strings = args;
  argv_strings.insert(argv_strings.begin(), "qrwalk");
  std::vector<const char*> argv;
  for (const std::string& s : argv_strings) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (app.got_subcommand(sub_gns)) return cmd_gns(cfg, tol_gns, out);
    if (app.got_subcommand(sub_coh)) return cmd_cohomology(cfg, degree, out);
    if (app.got_subcommand(sub_coeffs))
      return cmd_coeffs(cfg, order > 0 ? order : cfg.order, tol_coeffs,
                        out_path.empty() ? cfg.out_coeffs : out_path, out);
    if (app.got_subcommand(sub_walk))
      return cmd_walk(cfg, out_path.empty() ? cfg.out_walk_csv : out_path, out);
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ObstructionError& e) {
    err << "obstruction: " << e.what() << "\n";
    return kExitObstruction;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
}

}  // namespace qrwalk
