#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include <Eigen/SVD>

#include "chanlab/core.hpp"

namespace chanlab {

//=========================================================================
// Operator: dense complex matrix tagged with tensor-factor dimensions
//=========================================================================

/// Universal carrier for states, observables, Kraus maps and isometries.
/// `row_dims`/`col_dims` record the tensor-factor structure of the output
/// and input spaces; their products must match the matrix shape.
class Operator {
 public:
  Operator() = default;

  Operator(Matrix entries, Dims row_dims, Dims col_dims)
      : mat_(std::move(entries)),
        row_dims_(std::move(row_dims)),
        col_dims_(std::move(col_dims)) {
    validate_dims(row_dims_, mat_.rows(), "row");
    validate_dims(col_dims_, mat_.cols(), "col");
  }

  /// Square operator with identical factor structure on both sides.
  static Operator square(Matrix entries, Dims factor_dims) {
    Dims cols = factor_dims;
    return Operator(std::move(entries), std::move(factor_dims), std::move(cols));
  }

  /// Single-factor operator (no internal tensor structure).
  static Operator dense(Matrix entries) {
    Dims r{entries.rows()}, c{entries.cols()};
    return Operator(std::move(entries), std::move(r), std::move(c));
  }

  const Matrix& mat() const { return mat_; }
  const Dims& row_dims() const { return row_dims_; }
  const Dims& col_dims() const { return col_dims_; }
  Index rows() const { return mat_.rows(); }
  Index cols() const { return mat_.cols(); }
  bool is_square() const { return mat_.rows() == mat_.cols(); }

  Operator adjoint() const { return Operator(mat_.adjoint(), col_dims_, row_dims_); }

 private:
  static void validate_dims(const Dims& dims, Index extent, const char* side) {
    if (dims.empty()) throw DimensionError(std::string(side) + "_dims must be non-empty");
    for (Index d : dims)
      if (d < 1) throw DimensionError(std::string(side) + "_dims entries must be >= 1");
    if (dim_product(dims) != extent) {
      std::ostringstream os;
      os << "product of " << side << "_dims (" << dim_product(dims)
         << ") does not match matrix extent (" << extent << ")";
      throw DimensionError(os.str());
    }
  }

  Matrix mat_;
  Dims row_dims_;
  Dims col_dims_;
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Tensor product; factor lists concatenate.
inline Operator tensor(const Operator& a, const Operator& b) {
  Dims rd = a.row_dims();
  rd.insert(rd.end(), b.row_dims().begin(), b.row_dims().end());
  Dims cd = a.col_dims();
  cd.insert(cd.end(), b.col_dims().begin(), b.col_dims().end());
  return Operator(kron(a.mat(), b.mat()), std::move(rd), std::move(cd));
}

//=========================================================================
// Hermitian spectral decomposition
//=========================================================================

/// Spectral data of a Hermitian operator: eigenvalues descending,
/// eigenvector columns unitary, sum(l_i v_i v_i^dag) reconstructs the input.
struct HermitianEigensystem {
  RealVector eigenvalues;
  Matrix eigenvectors;
  Index source_dim = 0;

  Matrix reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
           eigenvectors.adjoint();
  }
};

namespace detail {

/// Deterministic eigenvector phase: first component above threshold is made
/// real positive. Keeps golden files reproducible.
inline void fix_column_phases(Matrix& vecs) {
  constexpr double kPhaseTol = 1e-7;
  for (Index j = 0; j < vecs.cols(); ++j) {
    for (Index i = 0; i < vecs.rows(); ++i) {
      double m = std::abs(vecs(i, j));
      if (m > kPhaseTol) {
        vecs.col(j) *= std::conj(vecs(i, j)) / m;
        break;
      }
    }
  }
}

}  // namespace detail

inline HermitianEigensystem herm_eigendecompose(const Matrix& m,
                                                const Tolerance& tol = {}) {
  if (m.rows() != m.cols()) throw DimensionError("herm_eigendecompose: matrix must be square");
  const double dev = (m - m.adjoint()).norm();
  if (dev > tol.hermiticity_tol)
    throw ValidationError("herm_eigendecompose: hermiticity deviation beyond tolerance", dev);
  // Symmetrize; accumulated float error from channel application is expected.
  Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw Error("herm_eigendecompose: eigensolver failed to converge");

  const Index n = m.rows();
  HermitianEigensystem sys;
  sys.source_dim = n;
  sys.eigenvalues = solver.eigenvalues().reverse();
  sys.eigenvectors = solver.eigenvectors().rowwise().reverse();
  detail::fix_column_phases(sys.eigenvectors);
  return sys;
}

inline HermitianEigensystem herm_eigendecompose(const Operator& m,
                                                const Tolerance& tol = {}) {
  return herm_eigendecompose(m.mat(), tol);
}

//=========================================================================
// Matrix functions on the support
//=========================================================================

/// Scalar function tag for matrix_function_on_support.
struct ScalarFn {
  enum class Kind { log, sqrt, power } kind;
  double exponent = 0.0;

  static ScalarFn log() { return {Kind::log, 0.0}; }
  static ScalarFn sqrt() { return {Kind::sqrt, 0.0}; }
  static ScalarFn power(double p) { return {Kind::power, p}; }

  double operator()(double x) const {
    switch (kind) {
      case Kind::log: return std::log(x);
      case Kind::sqrt: return std::sqrt(x);
      case Kind::power: return std::pow(x, exponent);
    }
    return 0.0;
  }
};

namespace detail {

/// f applied to eigenvalues strictly above the cutoff; eigenvalues at or
/// below it map to `kernel_value`. Rejects inputs with eigenvalues below
/// -cutoff (not PSD).
inline Matrix spectral_apply(const Matrix& m, const std::function<Complex(double)>& f,
                             Complex kernel_value, const Tolerance& tol) {
  HermitianEigensystem sys = herm_eigendecompose(m, tol);
  const Index n = sys.source_dim;
  if (n > 0 && sys.eigenvalues(n - 1) < -tol.eigenvalue_cutoff)
    throw ValidationError("matrix function: negative eigenvalue below -cutoff (input not PSD)",
                          sys.eigenvalues(n - 1));
  Vector fvals(n);
  for (Index i = 0; i < n; ++i)
    fvals(i) = sys.eigenvalues(i) > tol.eigenvalue_cutoff ? f(sys.eigenvalues(i)) : kernel_value;
  return sys.eigenvectors * fvals.asDiagonal() * sys.eigenvectors.adjoint();
}

}  // namespace detail

/// Pseudo-function on the support of a Hermitian PSD matrix: zero
/// eigenvalues map to 0, so power(-1) composed with m is the support
/// projector rather than a divide-by-zero.
inline Matrix matrix_function_on_support(const Matrix& m, const ScalarFn& f,
                                         const Tolerance& tol = {}) {
  return detail::spectral_apply(
      m, [&f](double x) { return Complex(f(x), 0.0); }, Complex(0.0, 0.0), tol);
}

inline Operator matrix_function_on_support(const Operator& m, const ScalarFn& f,
                                           const Tolerance& tol = {}) {
  return Operator(matrix_function_on_support(m.mat(), f, tol), m.row_dims(), m.col_dims());
}

/// m^{it} = exp(it log m) on the support; acts as the identity on the
/// kernel so that degenerate reference states stay well-defined.
inline Matrix imaginary_power(const Matrix& m, double t, const Tolerance& tol = {}) {
  return detail::spectral_apply(
      m, [t](double x) { return std::exp(Complex(0.0, t * std::log(x))); },
      Complex(1.0, 0.0), tol);
}

/// Projector onto the support (eigenvalues above the cutoff).
inline Matrix support_projector(const Matrix& m, const Tolerance& tol = {}) {
  return detail::spectral_apply(
      m, [](double) { return Complex(1.0, 0.0); }, Complex(0.0, 0.0), tol);
}

//=========================================================================
// Norms and fidelity
//=========================================================================

/// Trace norm ||M||_1 = Tr sqrt(M^dag M) = sum of singular values.
inline double trace_norm(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("trace_norm: matrix must be square");
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

inline double trace_norm(const Operator& m) { return trace_norm(m.mat()); }

/// Largest singular value.
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline double operator_norm(const Operator& m) { return operator_norm(m.mat()); }

/// F(rho, sigma) = ||rho^{1/2} sigma^{1/2}||_1 on Hermitian PSD inputs.
inline double fidelity(const Matrix& rho, const Matrix& sigma, const Tolerance& tol = {}) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DimensionError("fidelity: dimension mismatch");
  Matrix sr = matrix_function_on_support(rho, ScalarFn::sqrt(), tol);
  Matrix ss = matrix_function_on_support(sigma, ScalarFn::sqrt(), tol);
  return trace_norm(Matrix(sr * ss));
}

}  // namespace chanlab
