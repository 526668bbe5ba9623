#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <stdexcept>
#include <string>

namespace qrwalk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent input data (config files, malformed matrices).
struct ConfigError : Error {
  using Error::Error;
};

/// A structural property that must hold failed numerically.
struct InvariantError : Error {
  using Error::Error;
};

/// A rank decision could not be made safely: singular values sit too close
/// to the threshold to tell zero from nonzero.
struct RankAmbiguityError : InvariantError {
  RankAmbiguityError(const std::string& msg, double below, double above)
      : InvariantError(msg), largest_dropped(below), smallest_kept(above) {}
  double largest_dropped;
  double smallest_kept;
};

/// Second cohomology does not vanish (or a coboundary equation has no
/// solution at the requested tolerance).
struct ObstructionError : Error {
  ObstructionError(const std::string& msg, Index dim, double res)
      : Error(msg), h2_dim(dim), residual(res) {}
  Index h2_dim;
  double residual;
};

Matrix kron(const Matrix& a, const Matrix& b);

/// Largest singular value.
double operator_norm(const Matrix& a);

double hermitian_defect(const Matrix& a);

/// Complex standard Gaussian entries (unit total variance per entry).
Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng);

Matrix random_hermitian(Index n, std::mt19937_64& rng);

}  // namespace qrwalk
