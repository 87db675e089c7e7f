#pragma once

#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace chanlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Ordered tensor-factor dimensions of a Hilbert-space side.
using Dims = std::vector<Index>;

inline Index dim_product(const Dims& dims) {
  Index p = 1;
  for (Index d : dims) p *= d;
  return p;
}

//=========================================================================
// Numerical tolerances
//=========================================================================

/// Shared tolerances. `eigenvalue_cutoff` defines the support everywhere:
/// eigenvalues at or below it are treated as exact zeros, so that relative
/// entropy, pseudo-inverses and Petz powers agree on one support notion.
struct Tolerance {
  double eigenvalue_cutoff = 1e-10;
  double hermiticity_tol = 1e-9;
  double trace_tol = 1e-9;
};

//=========================================================================
// Errors
//=========================================================================

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// Input failed a structural precondition (hermiticity, positivity, rank,
/// normalization, ...). `deviation` quantifies how badly.
struct ValidationError : Error {
  ValidationError(const std::string& msg, double dev = 0.0)
      : Error(msg), deviation(dev) {}
  double deviation;
};

/// supp(rho) is not contained in supp(sigma); carries the index of the
/// offending kernel eigenvector of sigma.
struct SupportError : Error {
  SupportError(const std::string& msg, Index idx, double overlap)
      : Error(msg), eigenvector_index(idx), rho_overlap(overlap) {}
  Index eigenvector_index;
  double rho_overlap;
};

}  // namespace chanlab
