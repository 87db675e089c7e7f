#pragma once

#include <functional>

#include "chanlab/entropy.hpp"

namespace chanlab {

//=========================================================================
// Quantum channels in the operator-sum representation
//=========================================================================

/// CPTP map as an ordered Kraus list {M_l}, each out_dim x in_dim, with
/// sum M_l^dag M_l = I. After canonicalization the list never exceeds
/// in_dim * out_dim operators.
class KrausChannel {
 public:
  const std::vector<Matrix>& kraus() const { return kraus_; }
  Index in_dim() const { return in_dim_; }
  Index out_dim() const { return out_dim_; }

  /// sum_l M_l X M_l^dag for any linear input (not only states).
  Matrix apply_matrix(const Matrix& x) const {
    if (x.rows() != in_dim_ || x.cols() != in_dim_)
      throw DimensionError("KrausChannel: input dimension mismatch");
    Matrix out = Matrix::Zero(out_dim_, out_dim_);
    for (const Matrix& m : kraus_) out += m * x * m.adjoint();
    return out;
  }

  double completeness_residual() const {
    Matrix s = Matrix::Zero(in_dim_, in_dim_);
    for (const Matrix& m : kraus_) s += m.adjoint() * m;
    return operator_norm(Matrix(s - Matrix::Identity(in_dim_, in_dim_)));
  }

  /// Verified constructor; canonicalizes through the Choi operator when
  /// the raw list exceeds in_dim * out_dim entries.
  static KrausChannel make(std::vector<Matrix> kraus, Index in_dim, Index out_dim,
                           const Tolerance& tol = {});

  /// Skips the completeness check. For maps that are trace-preserving
  /// only on a support (Petz on degenerate references) or up to
  /// quadrature error (universal recovery).
  static KrausChannel trusted(std::vector<Matrix> kraus, Index in_dim, Index out_dim) {
    check_shapes(kraus, in_dim, out_dim);
    return KrausChannel(std::move(kraus), in_dim, out_dim);
  }

 private:
  KrausChannel(std::vector<Matrix> kraus, Index in_dim, Index out_dim)
      : kraus_(std::move(kraus)), in_dim_(in_dim), out_dim_(out_dim) {}

  static void check_shapes(const std::vector<Matrix>& kraus, Index in_dim, Index out_dim) {
    if (in_dim < 1 || out_dim < 1)
      throw DimensionError("KrausChannel: dimensions must be positive");
    for (const Matrix& m : kraus)
      if (m.rows() != out_dim || m.cols() != in_dim)
        throw DimensionError("KrausChannel: Kraus operator shape mismatch");
  }

  std::vector<Matrix> kraus_;
  Index in_dim_;
  Index out_dim_;
};

inline DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho,
                             const Tolerance& tol = {}) {
  if (rho.dim() != ch.in_dim())
    throw DimensionError("apply: state dimension does not match channel input");
  return make_density(Operator::dense(ch.apply_matrix(rho.mat())), tol);
}

//=========================================================================
// Choi representation and channel-state duality
//=========================================================================

/// Choi operator (id_R (x) N)(|Gamma><Gamma|) on R (x) B with R isomorphic
/// to the input space. PSD iff the map is completely positive; partial
/// trace over B equals I_R iff trace-preserving.
struct ChoiOperator {
  Operator matrix;  // factors {in_dim, out_dim} on both sides
  Index in_dim = 0;
  Index out_dim = 0;
};

namespace detail {

/// |phi> = (I (x) M)|Gamma>: component on |i>_R |b>_B is M(b, i).
inline Vector choi_vector(const Matrix& m) {
  const Index in = m.cols(), out = m.rows();
  Vector phi(in * out);
  for (Index i = 0; i < in; ++i)
    for (Index b = 0; b < out; ++b) phi(i * out + b) = m(b, i);
  return phi;
}

}  // namespace detail

inline ChoiOperator choi_of(const KrausChannel& ch) {
  const Index d = ch.in_dim() * ch.out_dim();
  Matrix c = Matrix::Zero(d, d);
  for (const Matrix& m : ch.kraus()) {
    const Vector phi = detail::choi_vector(m);
    c += phi * phi.adjoint();
  }
  return ChoiOperator{Operator::square(std::move(c), Dims{ch.in_dim(), ch.out_dim()}),
                      ch.in_dim(), ch.out_dim()};
}

/// Choi operator of an arbitrary linear map, sum_ij |i><j| (x) f(|i><j|).
/// Accepts non-channels so the pedagogical counterexamples (transpose map)
/// can be fed through the same formula and flagged non-PSD.
inline ChoiOperator choi_of_linear_map(const std::function<Matrix(const Matrix&)>& f,
                                       Index in_dim, Index out_dim) {
  const Index d = in_dim * out_dim;
  Matrix c = Matrix::Zero(d, d);
  for (Index i = 0; i < in_dim; ++i)
    for (Index j = 0; j < in_dim; ++j) {
      Matrix e = Matrix::Zero(in_dim, in_dim);
      e(i, j) = Complex(1.0, 0.0);
      const Matrix fe = f(e);
      if (fe.rows() != out_dim || fe.cols() != out_dim)
        throw DimensionError("choi_of_linear_map: map output shape mismatch");
      c.block(i * out_dim, j * out_dim, out_dim, out_dim) = fe;
    }
  return ChoiOperator{Operator::square(std::move(c), Dims{in_dim, out_dim}), in_dim, out_dim};
}

/// Reverse direction of the Choi-Kraus theorem: eigendecompose the Choi
/// operator, keep eigenvalues above the cutoff, reshape each weighted
/// eigenvector |phi_l> into M_l : |psi> -> <psi*|phi_l>. Kraus count
/// equals the Choi rank, hence never exceeds in_dim * out_dim.
inline KrausChannel kraus_from_choi(const ChoiOperator& choi, const Tolerance& tol = {}) {
  HermitianEigensystem sys = herm_eigendecompose(choi.matrix.mat(), tol);
  const Index n = sys.eigenvalues.size();
  if (n > 0 && sys.eigenvalues(n - 1) < -tol.eigenvalue_cutoff)
    throw ValidationError("kraus_from_choi: Choi operator is not PSD", sys.eigenvalues(n - 1));

  std::vector<Matrix> kraus;
  for (Index l = 0; l < n; ++l) {
    if (sys.eigenvalues(l) <= tol.eigenvalue_cutoff) continue;
    const Vector phi = std::sqrt(sys.eigenvalues(l)) * sys.eigenvectors.col(l);
    Matrix m(choi.out_dim, choi.in_dim);
    for (Index i = 0; i < choi.in_dim; ++i)
      for (Index b = 0; b < choi.out_dim; ++b) m(b, i) = phi(i * choi.out_dim + b);
    kraus.push_back(std::move(m));
  }
  return KrausChannel::trusted(std::move(kraus), choi.in_dim, choi.out_dim);
}

inline KrausChannel KrausChannel::make(std::vector<Matrix> kraus, Index in_dim, Index out_dim,
                                       const Tolerance& tol) {
  check_shapes(kraus, in_dim, out_dim);
  KrausChannel ch(std::move(kraus), in_dim, out_dim);
  const double residual = ch.completeness_residual();
  if (residual > 1e-8)
    throw ValidationError("KrausChannel: completeness residual beyond tolerance", residual);
  if (static_cast<Index>(ch.kraus_.size()) > in_dim * out_dim)
    return kraus_from_choi(choi_of(ch), tol);
  return ch;
}

//=========================================================================
// CPTP verification
//=========================================================================

struct CptpReport {
  double completeness_residual = 0.0;
  double choi_min_eigenvalue = 0.0;
  bool trace_preserving = false;
  bool completely_positive = false;
  bool passed = false;
};

inline CptpReport verify_cptp(const KrausChannel& ch) {
  CptpReport r;
  r.completeness_residual = ch.completeness_residual();
  r.trace_preserving = r.completeness_residual <= 1e-8;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(choi_of(ch).matrix.mat(), Eigen::EigenvaluesOnly);
  r.choi_min_eigenvalue = solver.eigenvalues().minCoeff();
  r.completely_positive = r.choi_min_eigenvalue >= -1e-9;
  r.passed = r.trace_preserving && r.completely_positive;
  return r;
}

//=========================================================================
// Isometric dilation
//=========================================================================

/// V = sum_j M_j (x) |e_j>_E with V^dag V = I; the channel is
/// Tr_E[V X V^dag].
struct IsometricDilation {
  Operator v;  // (out_dim * env_dim) x in_dim, row factors {out_dim, env_dim}
  Index env_dim = 0;

  Matrix apply_and_trace_env(const Matrix& x) const {
    const Index out = v.row_dims()[0], env = v.row_dims()[1];
    const Matrix big = v.mat() * x * v.mat().adjoint();
    Matrix result = Matrix::Zero(out, out);
    for (Index b = 0; b < out; ++b)
      for (Index b2 = 0; b2 < out; ++b2)
        for (Index j = 0; j < env; ++j) result(b, b2) += big(b * env + j, b2 * env + j);
    return result;
  }
};

inline IsometricDilation dilate(const KrausChannel& ch) {
  const Index env = static_cast<Index>(ch.kraus().size());
  Matrix v = Matrix::Zero(ch.out_dim() * env, ch.in_dim());
  for (Index j = 0; j < env; ++j)
    for (Index b = 0; b < ch.out_dim(); ++b) v.row(b * env + j) = ch.kraus()[j].row(b);
  return IsometricDilation{Operator(std::move(v), Dims{ch.out_dim(), env}, Dims{ch.in_dim()}),
                           env};
}

/// Unitary change of Kraus representation, N_j = sum_i W_ij M_i; the Choi
/// operator, and hence the channel, is unchanged.
inline KrausChannel rotate_kraus(const KrausChannel& ch, const Matrix& w) {
  const Index k = static_cast<Index>(ch.kraus().size());
  if (w.rows() != k || w.cols() != k)
    throw DimensionError("rotate_kraus: rotation must act on the Kraus index space");
  const double udev = operator_norm(Matrix(w.adjoint() * w - Matrix::Identity(k, k)));
  if (udev > 1e-8) throw ValidationError("rotate_kraus: rotation is not unitary", udev);

  std::vector<Matrix> rotated(static_cast<std::size_t>(k),
                              Matrix::Zero(ch.out_dim(), ch.in_dim()));
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < k; ++i)
      rotated[static_cast<std::size_t>(j)] += w(i, j) * ch.kraus()[static_cast<std::size_t>(i)];
  return KrausChannel::trusted(std::move(rotated), ch.in_dim(), ch.out_dim());
}

//=========================================================================
// Adjoint and composition
//=========================================================================

/// N^dag with Kraus list {M_l^dag}: unital rather than trace-preserving,
/// and the dual of N under the trace inner product <N(t), w> = <t, N^dag(w)>.
struct AdjointChannel {
  std::vector<Matrix> kraus;  // each in_dim x out_dim of the forward channel
  Index in_dim = 0;           // = forward out_dim
  Index out_dim = 0;          // = forward in_dim

  Matrix apply_matrix(const Matrix& x) const {
    if (x.rows() != in_dim || x.cols() != in_dim)
      throw DimensionError("AdjointChannel: input dimension mismatch");
    Matrix out = Matrix::Zero(out_dim, out_dim);
    for (const Matrix& m : kraus) out += m * x * m.adjoint();
    return out;
  }
};

inline AdjointChannel adjoint(const KrausChannel& ch) {
  AdjointChannel a;
  a.in_dim = ch.out_dim();
  a.out_dim = ch.in_dim();
  for (const Matrix& m : ch.kraus()) a.kraus.push_back(m.adjoint());
  return a;
}

/// (second o first); the raw product list is canonicalized through the
/// Choi operator whenever it exceeds the Choi-rank bound.
inline KrausChannel compose(const KrausChannel& second, const KrausChannel& first,
                            const Tolerance& tol = {}) {
  if (first.out_dim() != second.in_dim())
    throw DimensionError("compose: channel dimensions do not chain");
  std::vector<Matrix> product;
  for (const Matrix& a : first.kraus())
    for (const Matrix& b : second.kraus()) product.push_back(b * a);
  KrausChannel raw =
      KrausChannel::trusted(std::move(product), first.in_dim(), second.out_dim());
  if (static_cast<Index>(raw.kraus().size()) > raw.in_dim() * raw.out_dim())
    return kraus_from_choi(choi_of(raw), tol);
  return raw;
}

//=========================================================================
// Counterexample maps (not channels)
//=========================================================================

inline Matrix pauli_x() { return (Matrix(2, 2) << 0, 1, 1, 0).finished(); }
inline Matrix pauli_y() {
  return (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
}
inline Matrix pauli_z() { return (Matrix(2, 2) << 1, 0, 0, -1).finished(); }

/// E(rho) = exp(i pi X Tr[X rho]) rho exp(-i pi X Tr[X rho]): trace
/// preserving but nonlinear, so not a channel. Evaluated exactly as
/// written, on qubit states only.
inline DensityOperator nonlinear_counterexample(const DensityOperator& rho,
                                                const Tolerance& tol = {}) {
  if (rho.dim() != 2)
    throw DimensionError("nonlinear_counterexample: defined on qubit states only");
  const double x = std::real((pauli_x() * rho.mat()).trace());
  const double angle = M_PI * x;
  const Matrix u = std::cos(angle) * Matrix::Identity(2, 2) +
                   Complex(0.0, 1.0) * std::sin(angle) * pauli_x();
  return make_density(Operator::square(Matrix(u * rho.mat() * u.adjoint()), rho.factor_dims()),
                      tol);
}

/// The transpose map, positive but not completely positive.
inline Matrix transpose_map(const Matrix& x) { return x.transpose(); }

//=========================================================================
// Monotonicity of relative entropy
//=========================================================================

/// D(rho||sigma) >= D(N(rho)||N(sigma)): a channel can only degrade
/// distinguishability.
inline InequalityReport monotonicity_audit(const KrausChannel& ch, const DensityOperator& rho,
                                           const DensityOperator& sigma,
                                           const EntropyConfig& cfg = {},
                                           const Tolerance& tol = {}) {
  const double before = relative_entropy(rho, sigma, cfg, tol);
  const double after = relative_entropy(apply(ch, rho, tol), apply(ch, sigma, tol), cfg, tol);
  return InequalityReport::make("relative_entropy_monotonicity", after, before, 1e-8);
}

//=========================================================================
// Random channels (plumbing for fuzz suites and demos)
//=========================================================================

/// Channel drawn from a Haar-random isometric dilation with the given
/// environment dimension.
inline KrausChannel random_channel(Index in_dim, Index out_dim, Index env_dim, Rng& rng) {
  // The dilation needs out_dim * env_dim >= in_dim for an isometry to exist.
  while (out_dim * env_dim < in_dim) ++env_dim;
  const Matrix v = rng.haar_isometry(out_dim * env_dim, in_dim);
  std::vector<Matrix> kraus;
  for (Index j = 0; j < env_dim; ++j) {
    Matrix m(out_dim, in_dim);
    for (Index b = 0; b < out_dim; ++b) m.row(b) = v.row(b * env_dim + j);
    kraus.push_back(std::move(m));
  }
  return KrausChannel::make(std::move(kraus), in_dim, out_dim);
}

}  // namespace chanlab
