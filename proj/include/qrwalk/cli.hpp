#pragma once

#include "qrwalk/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qrwalk {

/// Exit codes: 0 success, 1 invariant failure, 2 config error,
/// 3 cohomological obstruction.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitObstruction = 3;

int cmd_gns(const ExperimentConfig& cfg, double tol, std::ostream& out);
int cmd_cohomology(const ExperimentConfig& cfg, Index degree, std::ostream& out);
int cmd_coeffs(const ExperimentConfig& cfg, Index order, double tol, const std::string& out_path,
               std::ostream& out);
int cmd_walk(const ExperimentConfig& cfg, const std::string& out_path, std::ostream& out);

/// Full command-line front end; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qrwalk
