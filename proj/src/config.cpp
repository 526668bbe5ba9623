#include "qrwalk/config.hpp"

#include <json.hpp>

#include <fstream>

namespace qrwalk {

namespace {

using nlohmann::json;

Complex parse_entry(const json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return Complex(e[0].get<double>(), e[1].get<double>());
  throw ConfigError("matrix entries must be numbers or [re, im] pairs");
}

Matrix parse_matrix(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw ConfigError("matrix must be a non-empty row list");
  const Index r = static_cast<Index>(rows.size());
  const Index c = static_cast<Index>(rows[0].size());
  Matrix out(r, c);
  for (Index i = 0; i < r; ++i) {
    if (!rows[i].is_array() || static_cast<Index>(rows[i].size()) != c)
      throw ConfigError("matrix rows must have equal length");
    for (Index j = 0; j < c; ++j) out(i, j) = parse_entry(rows[i][j]);
  }
  return out;
}

Vector parse_vector(const json& entries) {
  if (!entries.is_array()) throw ConfigError("expected a list of entries");
  Vector out(static_cast<Index>(entries.size()));
  for (Index i = 0; i < out.size(); ++i) out(i) = parse_entry(entries[i]);
  return out;
}

AlgebraTable parse_table(const json& spec) {
  AlgebraTable t;
  t.dim = spec.at("dim").get<Index>();
  if (t.dim <= 0) throw ConfigError("table: dim must be positive");
  const json& product = spec.at("product");
  if (static_cast<Index>(product.size()) != t.dim)
    throw ConfigError("table: product must have dim rows");
  t.left_mult.assign(t.dim, Matrix::Zero(t.dim, t.dim));
  for (Index i = 0; i < t.dim; ++i) {
    if (static_cast<Index>(product[i].size()) != t.dim)
      throw ConfigError("table: product rows must have dim entries");
    for (Index j = 0; j < t.dim; ++j) {
      Vector c = parse_vector(product[i][j]);
      if (c.size() != t.dim) throw ConfigError("table: coefficient vectors must have length dim");
      t.left_mult[i].col(j) = c;
    }
  }
  t.unit = parse_vector(spec.at("unit"));
  if (t.unit.size() != t.dim) throw ConfigError("table: unit must have length dim");
  return t;
}

}  // namespace

StarAlgebra ExperimentConfig::make_algebra() const {
  try {
    if (is_table_algebra())
      throw ConfigError("this command needs a matrix-realized *-algebra, not a bare table");
    if (!preset.empty()) {
      if (preset == "full_matrix") return StarAlgebra::full_matrix(preset_dim);
      if (preset == "diagonal") return StarAlgebra::diagonal(preset_dim);
      if (preset == "direct_sum") return StarAlgebra::direct_sum(preset_blocks);
      throw ConfigError("unknown algebra preset: " + preset);
    }
    if (basis) return StarAlgebra::build(*basis);
    throw ConfigError("config has no algebra spec");
  } catch (const InvariantError& e) {
    throw ConfigError(std::string("algebra spec invalid: ") + e.what());
  }
}

LindbladGenerator ExperimentConfig::make_generator() const {
  if (!has_generator) throw ConfigError("config has no generator spec");
  try {
    return LindbladGenerator(*hamiltonian, lindblad);
  } catch (const InvariantError& e) {
    throw ConfigError(std::string("generator spec invalid: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  ExperimentConfig cfg;
  try {
    const json& alg = doc.at("algebra");
    if (alg.contains("preset")) {
      cfg.preset = alg["preset"].get<std::string>();
      if (cfg.preset == "full_matrix")
        cfg.preset_dim = alg.at("d").get<Index>();
      else if (cfg.preset == "diagonal")
        cfg.preset_dim = alg.at("n").get<Index>();
      else if (cfg.preset == "direct_sum")
        for (const json& b : alg.at("blocks")) cfg.preset_blocks.push_back(b.get<Index>());
      else
        throw ConfigError("unknown algebra preset: " + cfg.preset);
    } else if (alg.contains("basis")) {
      std::vector<Matrix> basis;
      for (const json& b : alg["basis"]) basis.push_back(parse_matrix(b));
      cfg.basis = std::move(basis);
    } else if (alg.contains("table")) {
      cfg.table = parse_table(alg["table"]);
    } else {
      throw ConfigError("algebra spec must give a preset, a basis, or a table");
    }

    if (doc.contains("generator")) {
      const json& gen = doc["generator"];
      cfg.hamiltonian = parse_matrix(gen.at("H"));
      for (const json& l : gen.value("lindblad", json::array()))
        cfg.lindblad.push_back(parse_matrix(l));
      cfg.has_generator = true;
      const Index d = cfg.hamiltonian->rows();
      if (cfg.hamiltonian->cols() != d) throw ConfigError("H must be square");
      if (hermitian_defect(*cfg.hamiltonian) > 1e-12 * std::max(1.0, cfg.hamiltonian->norm()))
        throw ConfigError("H must be Hermitian");
      for (const Matrix& l : cfg.lindblad)
        if (l.rows() != d || l.cols() != d)
          throw ConfigError("Lindblad operators must match the dimension of H");
    }

    if (doc.contains("run")) {
      const json& run = doc["run"];
      cfg.order = run.value("order", cfg.order);
      cfg.t = run.value("t", cfg.t);
      cfg.seed = run.value("seed", cfg.seed);
      cfg.memory_cap_bytes = run.value("memory_cap_bytes", cfg.memory_cap_bytes);
      cfg.walk_beta = run.value("walk_beta", cfg.walk_beta);
      cfg.walk_order = run.value("walk_order", cfg.walk_order);
      cfg.walk_dump_steps = run.value("walk_dump_steps", cfg.walk_dump_steps);
      for (const json& h : run.value("h_list", json::array()))
        cfg.h_list.push_back(h.get<double>());
      if (run.contains("tolerances")) {
        const json& tol = run["tolerances"];
        cfg.gns_tol = tol.value("gns", cfg.gns_tol);
        cfg.cocycle_tol = tol.value("cocycle", cfg.cocycle_tol);
        cfg.solve_tol = tol.value("solve", cfg.solve_tol);
      }
    }
    if (doc.contains("output")) {
      const json& outp = doc["output"];
      cfg.out_coeffs = outp.value("coeffs", cfg.out_coeffs);
      cfg.out_walk_csv = outp.value("walk_csv", cfg.out_walk_csv);
      cfg.out_walk_dump = outp.value("walk_dump", cfg.out_walk_dump);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config structure error: ") + e.what());
  }

  if (!(cfg.gns_tol > 0) || !(cfg.cocycle_tol > 0) || !(cfg.solve_tol > 0))
    throw ConfigError("all tolerances must be positive");
  if (cfg.order < 1) throw ConfigError("order must be at least 1");
  if (!(cfg.t > 0)) throw ConfigError("t must be positive");
  for (size_t i = 1; i < cfg.h_list.size(); ++i)
    if (!(cfg.h_list[i] < cfg.h_list[i - 1]))
      throw ConfigError("h_list must be strictly decreasing");
  for (double h : cfg.h_list)
    if (!(h > 0)) throw ConfigError("h_list entries must be positive");
  if (cfg.walk_beta != "unitary" && cfg.walk_beta != "truncated")
    throw ConfigError("walk_beta must be \"unitary\" or \"truncated\"");
  return cfg;
}

}  // namespace qrwalk
