#pragma once

#include <optional>

#include "chanlab/channels.hpp"

namespace chanlab {

//=========================================================================
// Quadrature for the universal recovery integral
//=========================================================================

/// beta0(t) = (pi/2) / (cosh(pi t) + 1); integrates to 1 with
/// antiderivative (1/2) tanh(pi t / 2).
inline double beta0(double t) { return 0.5 * M_PI / (std::cosh(M_PI * t) + 1.0); }

namespace detail {

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    nodes[static_cast<std::size_t>(i)] = -x;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
    weights[static_cast<std::size_t>(i)] = w;
  }
}

}  // namespace detail

/// Symmetric composite Gauss-Legendre grid on [-T, T]. The default
/// (T = 8, 43 panels x 3 points = 129 nodes) keeps the analytic tail mass
/// 1 - tanh(pi T / 2) below 1e-8 and the discrete beta0 mass within 1e-7
/// of 1.
struct QuadratureGrid {
  RealVector nodes;
  RealVector weights;
  double truncation = 0.0;

  static QuadratureGrid make(double truncation = 8.0, int panels = 43,
                             int points_per_panel = 3) {
    if (truncation <= 0.0 || panels < 1 || points_per_panel < 1)
      throw DimensionError("QuadratureGrid: invalid parameters");
    std::vector<double> gx, gw;
    detail::gauss_legendre(points_per_panel, gx, gw);

    QuadratureGrid g;
    g.truncation = truncation;
    const Index total = static_cast<Index>(panels) * points_per_panel;
    g.nodes.resize(total);
    g.weights.resize(total);
    const double width = 2.0 * truncation / panels;
    Index at = 0;
    for (int p = 0; p < panels; ++p) {
      const double a = -truncation + p * width;
      const double mid = a + 0.5 * width;
      for (int i = 0; i < points_per_panel; ++i, ++at) {
        g.nodes(at) = mid + 0.5 * width * gx[static_cast<std::size_t>(i)];
        g.weights(at) = 0.5 * width * gw[static_cast<std::size_t>(i)];
      }
    }
    return g;
  }

  /// Discrete mass sum w_k beta0(t_k); the continuum value is 1.
  double beta0_mass() const {
    double m = 0.0;
    for (Index k = 0; k < nodes.size(); ++k) m += weights(k) * beta0(nodes(k));
    return m;
  }

  void validate(double mass_tol = 1e-6) const {
    const double deficit = std::abs(beta0_mass() - 1.0);
    if (deficit > mass_tol)
      throw ValidationError("QuadratureGrid: beta0 mass deficit beyond tolerance", deficit);
    for (Index k = 0; k < nodes.size(); ++k) {
      const double mirror = nodes(nodes.size() - 1 - k);
      if (std::abs(nodes(k) + mirror) > 1e-12)
        throw ValidationError("QuadratureGrid: nodes are not symmetric about 0",
                              std::abs(nodes(k) + mirror));
    }
  }
};

//=========================================================================
// The Petz map
//=========================================================================

/// P_{sigma,N} : rho -> sigma^{1/2} N^dag[ N(sigma)^{-1/2} rho
/// N(sigma)^{-1/2} ] sigma^{1/2}, assembled as the Kraus list
/// { sigma^{1/2} M_l^dag N(sigma)^{-1/2} }. Trace-preserving on the
/// support of N(sigma); the support condition on inputs is checked at
/// application time.
class PetzMap {
 public:
  PetzMap(DensityOperator sigma, KrausChannel forward, const Tolerance& tol = {})
      : sigma_(std::move(sigma)), forward_(std::move(forward)), tol_(tol) {
    if (sigma_.dim() != forward_.in_dim())
      throw DimensionError("PetzMap: reference state does not match channel input");
    sigma_sqrt_ = matrix_function_on_support(sigma_.mat(), ScalarFn::sqrt(), tol_);
    n_sigma_ = forward_.apply_matrix(sigma_.mat());
    n_sigma_inv_sqrt_ = matrix_function_on_support(n_sigma_, ScalarFn::power(-0.5), tol_);
    n_sigma_eigs_ = herm_eigendecompose(n_sigma_, tol_);

    std::vector<Matrix> kraus;
    for (const Matrix& m : forward_.kraus())
      kraus.push_back(sigma_sqrt_ * m.adjoint() * n_sigma_inv_sqrt_);
    reverse_ = KrausChannel::trusted(std::move(kraus), forward_.out_dim(), forward_.in_dim());
  }

  const KrausChannel& reverse() const { return *reverse_; }
  const KrausChannel& forward() const { return forward_; }
  const DensityOperator& sigma() const { return sigma_; }
  const Matrix& n_sigma() const { return n_sigma_; }

  /// ||sum P_l^dag P_l - Pi_supp|| where Pi_supp projects onto
  /// supp N(sigma); the CPTP-on-support certificate.
  double support_completeness_residual() const {
    Matrix s = Matrix::Zero(forward_.out_dim(), forward_.out_dim());
    for (const Matrix& m : reverse_->kraus()) s += m.adjoint() * m;
    return operator_norm(Matrix(s - support_projector(n_sigma_, tol_)));
  }

  Matrix apply_matrix(const Matrix& rho) const {
    check_support(rho);
    return reverse_->apply_matrix(rho);
  }

  DensityOperator apply(const DensityOperator& rho) const {
    return make_density(Operator::dense(apply_matrix(rho.mat())), tol_);
  }

 private:
  void check_support(const Matrix& rho) const {
    for (Index i = 0; i < n_sigma_eigs_.eigenvalues.size(); ++i) {
      if (n_sigma_eigs_.eigenvalues(i) > tol_.eigenvalue_cutoff) continue;
      const Vector v = n_sigma_eigs_.eigenvectors.col(i);
      const double overlap = std::real((v.adjoint() * rho * v)(0, 0));
      if (overlap > tol_.eigenvalue_cutoff)
        throw SupportError("PetzMap: input escapes supp N(sigma)", i, overlap);
    }
  }

  DensityOperator sigma_;
  KrausChannel forward_;
  Tolerance tol_;
  Matrix sigma_sqrt_;
  Matrix n_sigma_;
  Matrix n_sigma_inv_sqrt_;
  HermitianEigensystem n_sigma_eigs_;
  std::optional<KrausChannel> reverse_;
};

inline PetzMap petz_map(const DensityOperator& sigma, const KrausChannel& ch,
                        const Tolerance& tol = {}) {
  return PetzMap(sigma, ch, tol);
}

/// D(rho||sigma) - D(N(rho)||N(sigma)) >= 0 by monotonicity; <= 1e-8 is
/// the exact-recoverability certificate.
inline double recoverability_gap(const KrausChannel& ch, const DensityOperator& rho,
                                 const DensityOperator& sigma, const EntropyConfig& cfg = {},
                                 const Tolerance& tol = {}) {
  return relative_entropy(rho, sigma, cfg, tol) -
         relative_entropy(apply(ch, rho, tol), apply(ch, sigma, tol), cfg, tol);
}

//=========================================================================
// Universal recovery
//=========================================================================

/// R_{sigma,N}(rho) = int dt beta0(t) sigma^{-it/2} P[ N(sigma)^{it/2}
/// rho N(sigma)^{-it/2} ] sigma^{it/2}, discretized on a quadrature grid.
/// Rotations act as the identity on the kernels of sigma and N(sigma).
/// For small dimensions the channel is materialized as a canonical Kraus
/// list; otherwise it is applied node-by-node with a fixed summation
/// order.
class RecoveryChannel {
 public:
  RecoveryChannel(DensityOperator sigma, KrausChannel forward, QuadratureGrid grid,
                  const Tolerance& tol = {})
      : petz_(std::move(sigma), std::move(forward), tol), grid_(std::move(grid)), tol_(tol) {
    grid_.validate();
    const KrausChannel& fwd = petz_.forward();
    for (Index k = 0; k < grid_.nodes.size(); ++k) {
      const double t = grid_.nodes(k);
      const double scale = std::sqrt(grid_.weights(k) * beta0(t));
      const Matrix rot_out = imaginary_power(petz_.sigma().mat(), -0.5 * t, tol_);
      const Matrix rot_in = imaginary_power(petz_.n_sigma(), 0.5 * t, tol_);
      for (const Matrix& p : petz_.reverse().kraus())
        node_kraus_.push_back(scale * (rot_out * p * rot_in));
    }
    if (std::max(fwd.in_dim(), fwd.out_dim()) <= 8) {
      ChoiOperator choi = choi_of(
          KrausChannel::trusted(node_kraus_, fwd.out_dim(), fwd.in_dim()));
      materialized_ = kraus_from_choi(choi, tol_);
    }
  }

  Index in_dim() const { return petz_.forward().out_dim(); }
  Index out_dim() const { return petz_.forward().in_dim(); }
  const QuadratureGrid& grid() const { return grid_; }
  const PetzMap& petz() const { return petz_; }
  const std::optional<KrausChannel>& materialized() const { return materialized_; }

  Matrix apply_matrix(const Matrix& rho) const {
    if (rho.rows() != in_dim() || rho.cols() != in_dim())
      throw DimensionError("RecoveryChannel: input dimension mismatch");
    if (materialized_) return materialized_->apply_matrix(rho);
    Matrix out = Matrix::Zero(out_dim(), out_dim());
    for (const Matrix& k : node_kraus_) out += k * rho * k.adjoint();
    return out;
  }

  /// R^dag, the adjoint under the trace inner product (unital up to
  /// quadrature error). Used for operator reconstruction.
  Matrix apply_adjoint(const Matrix& x) const {
    if (x.rows() != out_dim() || x.cols() != out_dim())
      throw DimensionError("RecoveryChannel: adjoint input dimension mismatch");
    Matrix out = Matrix::Zero(in_dim(), in_dim());
    const std::vector<Matrix>& ops = materialized_ ? materialized_->kraus() : node_kraus_;
    for (const Matrix& k : ops) out += k.adjoint() * x * k;
    return out;
  }

  DensityOperator apply(const DensityOperator& rho) const {
    Matrix out = apply_matrix(rho.mat());
    // Quadrature leaves the trace within the grid mass deficit of 1;
    // renormalization would hide it, so only the hermitian part is fixed.
    Tolerance relaxed = tol_;
    relaxed.trace_tol = std::max(relaxed.trace_tol, 1e-5);
    return make_density(Operator::dense(std::move(out)), relaxed);
  }

 private:
  PetzMap petz_;
  QuadratureGrid grid_;
  Tolerance tol_;
  std::vector<Matrix> node_kraus_;
  std::optional<KrausChannel> materialized_;
};

inline RecoveryChannel universal_recovery(const DensityOperator& sigma, const KrausChannel& ch,
                                          const QuadratureGrid& grid, const Tolerance& tol = {}) {
  return RecoveryChannel(sigma, ch, grid, tol);
}

//=========================================================================
// Recovery reporting
//=========================================================================

/// Dashboard for the reversibility theorems: the recoverability gap, the
/// recovery fidelity, the slack of gap + 2 log F >= 0, and the L1
/// residual of the recovered state.
struct RecoveryReport {
  double gap = 0.0;
  double recovery_fidelity = 0.0;
  double bound_slack = 0.0;
  double trace_distance_residual = 0.0;
  bool fvdg_consistent = false;  // residual <= 2 sqrt(gap) + tolerance
};

inline RecoveryReport recovery_report(const KrausChannel& ch, const DensityOperator& rho,
                                      const DensityOperator& sigma, const QuadratureGrid& grid,
                                      const EntropyConfig& cfg = {}, const Tolerance& tol = {}) {
  RecoveryChannel recovery(sigma, ch, grid, tol);
  const Matrix n_rho = ch.apply_matrix(rho.mat());
  const Matrix recovered = recovery.apply_matrix(n_rho);

  RecoveryReport r;
  r.gap = recoverability_gap(ch, rho, sigma, cfg, tol);
  r.recovery_fidelity = fidelity(rho.mat(), recovered, tol);
  r.bound_slack = r.gap + 2.0 * cfg.from_nats(std::log(r.recovery_fidelity));
  r.trace_distance_residual = trace_norm(Matrix(rho.mat() - recovered));
  r.fvdg_consistent =
      r.trace_distance_residual <= 2.0 * std::sqrt(std::max(r.gap, 0.0)) + 1e-6;
  return r;
}

//=========================================================================
// The erasure example
//=========================================================================

/// Code isometry V|a> = |a>_1 (x) |chi>_{2 Abar} into
/// H_A (x) H_Abar with H_A = (H_1 (x) H_2) + H_3, followed by erasure of
/// H_Abar. The Petz map with any full-rank diagonal reference recovers
/// every code state exactly.
struct ErasureExample {
  KrausChannel channel;    // N(rho) = Tr_Abar(V rho V^dag), code -> A
  Operator code_isometry;  // V
  DensityOperator sigma;   // fiducial full-rank reference on the code
  double max_petz_residual = 0.0;   // max ||rho - P(N(rho))||_1 over probes
  double max_pair_gap = 0.0;        // max recoverability gap over probe pairs
  double chi_trace = 0.0;           // <chi|chi> recovered through partial traces
};

inline ErasureExample erasure_example(Index d_code, Index d1, Index d2, Index d3, Index d_abar,
                                      const RealVector& sigma_spectrum, std::uint64_t seed,
                                      Index n_random_states = 20, const Tolerance& tol = {}) {
  if (d1 != d_code) throw DimensionError("erasure_example: d1 must equal d_code");
  if (d2 < 1 || d3 < 0 || d_abar < 1) throw DimensionError("erasure_example: invalid dims");
  if (sigma_spectrum.size() != d_code)
    throw DimensionError("erasure_example: sigma spectrum size mismatch");
  for (Index a = 0; a < d_code; ++a)
    if (sigma_spectrum(a) <= 0.0)
      throw ValidationError("erasure_example: sigma spectrum must be strictly positive",
                            sigma_spectrum(a));
  if (std::abs(sigma_spectrum.sum() - 1.0) > tol.trace_tol)
    throw ValidationError("erasure_example: sigma spectrum must sum to 1",
                          sigma_spectrum.sum() - 1.0);

  const Index d_a = d1 * d2 + d3;

  // The same fixed |chi> for every code basis vector.
  Rng rng(seed);
  Vector chi = rng.gaussian_vector(d2 * d_abar);
  chi /= chi.norm();

  Matrix v = Matrix::Zero(d_a * d_abar, d_code);
  for (Index a = 0; a < d_code; ++a)
    for (Index m = 0; m < d2; ++m)
      for (Index mu = 0; mu < d_abar; ++mu)
        v((a * d2 + m) * d_abar + mu, a) = chi(m * d_abar + mu);

  // Kraus operators of Tr_Abar(V . V^dag): one per Abar basis vector.
  std::vector<Matrix> kraus;
  for (Index mu = 0; mu < d_abar; ++mu) {
    Matrix m(d_a, d_code);
    for (Index x = 0; x < d_a; ++x) m.row(x) = v.row(x * d_abar + mu);
    kraus.push_back(std::move(m));
  }

  ErasureExample ex{
      KrausChannel::make(std::move(kraus), d_code, d_a, tol),
      Operator(std::move(v), Dims{d_a, d_abar}, Dims{d_code}),
      make_density(Matrix(sigma_spectrum.cast<Complex>().asDiagonal()), Dims{d_code}, tol)};

  // Tr chi = Tr_2(Tr_Abar |chi><chi|) reproduced through the pipeline.
  PureState chi_state = PureState::normalized(chi, Dims{d2, d_abar}, tol);
  ex.chi_trace = std::real(partial_trace(chi_state.to_density().op(), {0}).mat().trace());

  PetzMap petz(ex.sigma, ex.channel, tol);
  std::vector<DensityOperator> probes;
  for (Index a = 0; a < d_code; ++a) {
    Vector e = Vector::Zero(d_code);
    e(a) = Complex(1.0, 0.0);
    probes.push_back(PureState::unchecked(std::move(e), Dims{d_code}).to_density());
  }
  for (Index i = 0; i < n_random_states; ++i) {
    Rng sub = rng.substream(static_cast<std::uint64_t>(i));
    probes.push_back(random_density(d_code, 1 + static_cast<Index>(sub.integer(
                                                   static_cast<std::uint64_t>(d_code))),
                                    sub, tol));
  }

  for (const DensityOperator& rho : probes) {
    const Matrix recovered = petz.apply_matrix(ex.channel.apply_matrix(rho.mat()));
    ex.max_petz_residual =
        std::max(ex.max_petz_residual, trace_norm(Matrix(rho.mat() - recovered)));
    ex.max_pair_gap =
        std::max(ex.max_pair_gap, std::abs(recoverability_gap(ex.channel, rho, ex.sigma,
                                                              EntropyConfig{}, tol)));
  }
  return ex;
}

}  // namespace chanlab
