#pragma once

#include "qrwalk/lindblad.hpp"
#include "qrwalk/star_algebra.hpp"
#include "qrwalk/toy_fock.hpp"
#include "qrwalk/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qrwalk {

/// One experiment: algebra spec, generator spec, run parameters, outputs.
/// Matrices are lists of rows, complex entries as [re, im] pairs (plain
/// numbers are accepted as reals).
struct ExperimentConfig {
  // algebra: preset, explicit basis, or bare multiplication table
  std::string preset;  // "full_matrix" | "diagonal" | "direct_sum" | ""
  Index preset_dim = 0;
  std::vector<Index> preset_blocks;
  std::optional<std::vector<Matrix>> basis;
  std::optional<AlgebraTable> table;

  std::optional<Matrix> hamiltonian;
  std::vector<Matrix> lindblad;
  bool has_generator = false;

  Index order = 4;
  double t = 1.0;
  std::vector<double> h_list;
  std::uint64_t seed = 1;
  std::size_t memory_cap_bytes = kDefaultWalkMemoryCap;
  double gns_tol = 1e-10;
  double cocycle_tol = 1e-9;
  double solve_tol = 1e-9;
  std::string walk_beta = "unitary";  // or "truncated"
  Index walk_order = 2;
  Index walk_dump_steps = 0;

  std::string out_coeffs = "coeffs.json";
  std::string out_walk_csv = "walk.csv";
  std::string out_walk_dump;

  bool is_table_algebra() const { return table.has_value(); }
  StarAlgebra make_algebra() const;
  LindbladGenerator make_generator() const;
};

ExperimentConfig load_config(const std::string& path);

}  // namespace qrwalk
