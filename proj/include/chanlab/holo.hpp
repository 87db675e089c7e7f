#pragma once

#include "chanlab/recovery.hpp"

namespace chanlab {

//=========================================================================
// Toy subregion reconstruction: a code factor a (x) abar embedded by an
// isometry J into a bipartite boundary A (x) Abar. Operators on a are
// reconstructed on A through the universal recovery channel of the wedge
// channel N(rho_a) = Tr_Abar[ J (rho_a (x) sigma_abar) J^dag ].
//
// Relative entropies in this module are measured in bits, so that the
// chain constants delta_1 = 2 sqrt(eps) and delta_2 = sqrt(2 ln2 eps)
// are simultaneously valid.
//=========================================================================

struct WedgeDims {
  Index d_a = 2;
  Index d_abar = 2;
  Index d_A = 4;
  Index d_Abar = 4;
};

enum class EmbeddingKind { product_wedge, random_isometry };

/// Certified isometry J : H_a (x) H_abar -> H_A (x) H_Abar together with
/// the fixed full-rank reference states on a and abar.
struct CodeEmbedding {
  Operator j;  // row factors {d_A, d_Abar}, col factors {d_a, d_abar}
  WedgeDims dims;
  DensityOperator sigma_a;
  DensityOperator sigma_abar;

  DensityOperator reference_code_state() const { return tensor(sigma_a, sigma_abar); }

  /// Boundary image J rho J^dag of a full code state.
  Operator boundary_state(const DensityOperator& rho_code) const {
    return Operator::square(Matrix(j.mat() * rho_code.mat() * j.mat().adjoint()),
                            Dims{dims.d_A, dims.d_Abar});
  }

  /// (J rho J^dag)_A.
  DensityOperator boundary_reduced(const DensityOperator& rho_code,
                                   const Tolerance& tol = {}) const {
    return make_density(partial_trace(boundary_state(rho_code), {0}), tol);
  }

  DensityOperator bulk_reduced(const DensityOperator& rho_code, const Tolerance& tol = {}) const {
    return partial_trace(rho_code, {0}, tol);
  }
};

/// product_wedge factorizes J = I_a (x) |chi>_2 (x) W so the wedge
/// channel preserves relative entropies exactly (measured gap 0);
/// random_isometry draws J from the uniform isometry distribution.
inline CodeEmbedding build_embedding(EmbeddingKind kind, const WedgeDims& dims,
                                     std::uint64_t seed, const Tolerance& tol = {}) {
  const Index code_dim = dims.d_a * dims.d_abar;
  const Index boundary_dim = dims.d_A * dims.d_Abar;
  if (code_dim > boundary_dim)
    throw DimensionError("build_embedding: code dimension exceeds boundary dimension");

  Rng rng(seed);
  Matrix j;
  switch (kind) {
    case EmbeddingKind::random_isometry:
      j = rng.haar_isometry(boundary_dim, code_dim);
      break;
    case EmbeddingKind::product_wedge: {
      if (dims.d_A % dims.d_a != 0)
        throw DimensionError("build_embedding: product wedge needs d_a to divide d_A");
      if (dims.d_Abar < dims.d_abar)
        throw DimensionError("build_embedding: product wedge needs d_Abar >= d_abar");
      const Index d2 = dims.d_A / dims.d_a;
      Vector chi = rng.gaussian_vector(d2);
      chi /= chi.norm();
      const Matrix w = rng.haar_isometry(dims.d_Abar, dims.d_abar);
      // J = I_a (x) chi (x) W; row order (a, m, Y) matches {d_A, d_Abar}.
      j = kron(kron(Matrix::Identity(dims.d_a, dims.d_a), Matrix(chi)), w);
      break;
    }
  }

  Rng rng_a = rng.substream(1), rng_ab = rng.substream(2);
  CodeEmbedding emb{Operator(std::move(j), Dims{dims.d_A, dims.d_Abar},
                             Dims{dims.d_a, dims.d_abar}),
                    dims, random_density(dims.d_a, dims.d_a, rng_a, tol),
                    random_density(dims.d_abar, dims.d_abar, rng_ab, tol)};

  const double iso_dev = operator_norm(
      Matrix(emb.j.mat().adjoint() * emb.j.mat() - Matrix::Identity(code_dim, code_dim)));
  if (iso_dev > 1e-8)
    throw ValidationError("build_embedding: J is not an isometry", iso_dev);
  return emb;
}

/// The wedge channel a -> A, in Kraus form via the environment
/// construction: Abar is traced out and sigma_abar enters through its
/// purification.
inline KrausChannel wedge_channel(const CodeEmbedding& emb, const Tolerance& tol = {}) {
  const WedgeDims& d = emb.dims;
  HermitianEigensystem sig = herm_eigendecompose(emb.sigma_abar.mat(), tol);
  const Matrix& j = emb.j.mat();

  std::vector<Matrix> kraus;
  for (Index mu = 0; mu < d.d_Abar; ++mu) {
    for (Index nu = 0; nu < d.d_abar; ++nu) {
      if (sig.eigenvalues(nu) <= tol.eigenvalue_cutoff) continue;
      const double scale = std::sqrt(sig.eigenvalues(nu));
      Matrix m = Matrix::Zero(d.d_A, d.d_a);
      for (Index x = 0; x < d.d_A; ++x)
        for (Index p = 0; p < d.d_a; ++p) {
          Complex acc(0.0, 0.0);
          for (Index q = 0; q < d.d_abar; ++q)
            acc += j(x * d.d_Abar + mu, p * d.d_abar + q) * sig.eigenvectors(q, nu);
          m(x, p) = scale * acc;
        }
      kraus.push_back(std::move(m));
    }
  }
  return KrausChannel::make(std::move(kraus), d.d_a, d.d_A, tol);
}

//=========================================================================
// Measuring the relative-entropy gap
//=========================================================================

struct GapEntry {
  double bulk = 0.0;      // D(rho_a || sigma_a)
  double boundary = 0.0;  // D(rho_A || sigma_A)
  double gap = 0.0;       // |boundary - bulk|
  bool supported = true;  // false when a support condition failed
  std::string error;
};

struct EpsilonReport {
  double epsilon = 0.0;
  std::vector<GapEntry> per_pair;
};

/// Max over probe pairs of |D(rho_A||sigma_A) - D(rho_a||sigma_a)|, with
/// boundary reduced states from J rho J^dag of full code states. Support
/// violations are listed per pair rather than aborting the sweep.
inline EpsilonReport measure_epsilon(
    const CodeEmbedding& emb,
    const std::vector<std::pair<DensityOperator, DensityOperator>>& probe_pairs,
    const EntropyConfig& cfg = {EntropyConfig::LogBase::bits}, const Tolerance& tol = {}) {
  EpsilonReport report;
  for (const auto& [rho, sigma] : probe_pairs) {
    GapEntry e;
    try {
      e.bulk = relative_entropy(emb.bulk_reduced(rho, tol), emb.bulk_reduced(sigma, tol), cfg,
                                tol);
      e.boundary = relative_entropy(emb.boundary_reduced(rho, tol),
                                    emb.boundary_reduced(sigma, tol), cfg, tol);
      e.gap = std::abs(e.boundary - e.bulk);
      report.epsilon = std::max(report.epsilon, e.gap);
    } catch (const SupportError& err) {
      e.supported = false;
      e.error = err.what();
    }
    report.per_pair.push_back(std::move(e));
  }
  return report;
}

/// Haar-random pure code states; probe index 0 is the reference state
/// sigma_a (x) sigma_abar.
inline std::vector<DensityOperator> default_probes(const CodeEmbedding& emb, int count,
                                                   std::uint64_t seed) {
  std::vector<DensityOperator> probes;
  probes.push_back(emb.reference_code_state());
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    Rng sub = rng.substream(static_cast<std::uint64_t>(i));
    probes.push_back(
        random_pure(Dims{emb.dims.d_a, emb.dims.d_abar}, sub).to_density());
  }
  return probes;
}

namespace detail {

/// The pair set whose measured gap feeds the bound chain: for each probe
/// rho, the product-state pair driving step 1 and the JLMS "trivial
/// case" pair driving step 2, plus the probe against the reference.
inline std::vector<std::pair<DensityOperator, DensityOperator>> chain_pairs(
    const CodeEmbedding& emb, const std::vector<DensityOperator>& probes,
    const Tolerance& tol) {
  std::vector<std::pair<DensityOperator, DensityOperator>> pairs;
  const DensityOperator ref = emb.reference_code_state();
  for (const DensityOperator& rho : probes) {
    const DensityOperator product = tensor(emb.bulk_reduced(rho, tol), emb.sigma_abar);
    pairs.emplace_back(rho, ref);
    pairs.emplace_back(product, ref);
    pairs.emplace_back(product, rho);
  }
  return pairs;
}

}  // namespace detail

//=========================================================================
// Operator reconstruction O_A = R^dag[phi_a]
//=========================================================================

struct ReconstructionEntry {
  std::string label;
  double lhs = 0.0;  // |<O_A>_boundary - <phi_a>_bulk|
  double rhs = 0.0;  // delta * ||phi_a||
  bool passed = false;
};

struct ReconstructionReport {
  double epsilon_measured = 0.0;  // bits
  double delta1 = 0.0;            // 2 sqrt(eps)
  double delta2 = 0.0;            // sqrt(2 ln2 eps)
  double delta = 0.0;             // delta1 + delta2
  std::vector<ReconstructionEntry> per_operator;
  bool all_passed = true;
};

inline ReconstructionReport make_chain_constants(double epsilon) {
  ReconstructionReport r;
  r.epsilon_measured = epsilon;
  r.delta1 = 2.0 * std::sqrt(std::max(epsilon, 0.0));
  r.delta2 = std::sqrt(2.0 * M_LN2 * std::max(epsilon, 0.0));
  r.delta = r.delta1 + r.delta2;
  return r;
}

/// Builds R = universal_recovery(sigma_a, wedge channel) and verifies
/// |Tr[O_A (J rho J^dag)_A] - Tr[phi_a rho_a]| <= delta ||phi_a|| over
/// the probe set, with delta measured from the probes themselves.
inline std::pair<Operator, ReconstructionReport> reconstruct(
    const CodeEmbedding& emb, const Operator& phi_a, const QuadratureGrid& grid,
    const std::vector<DensityOperator>& probes, const Tolerance& tol = {}) {
  if (phi_a.rows() != emb.dims.d_a || phi_a.cols() != emb.dims.d_a)
    throw DimensionError("reconstruct: phi_a must act on the a factor");

  const KrausChannel wedge = wedge_channel(emb, tol);
  const RecoveryChannel recovery(emb.sigma_a, wedge, grid, tol);
  const Matrix o_a = recovery.apply_adjoint(phi_a.mat());

  const EntropyConfig bits{EntropyConfig::LogBase::bits};
  EpsilonReport eps = measure_epsilon(emb, detail::chain_pairs(emb, probes, tol), bits, tol);
  for (const GapEntry& e : eps.per_pair)
    if (!e.supported)
      throw SupportError("reconstruct: probe pair violates support conditions", 0, 0.0);

  ReconstructionReport report = make_chain_constants(eps.epsilon);
  const double phi_norm = operator_norm(phi_a);
  // The quadrature mass deficit leaks into every expectation value.
  const double quad_tol = 1e-6 * std::max(1.0, phi_norm);

  for (std::size_t i = 0; i < probes.size(); ++i) {
    const DensityOperator& rho = probes[i];
    const double boundary =
        std::real((o_a * emb.boundary_reduced(rho, tol).mat()).trace());
    const double bulk = std::real((phi_a.mat() * emb.bulk_reduced(rho, tol).mat()).trace());
    ReconstructionEntry entry;
    entry.label = "probe_" + std::to_string(i);
    entry.lhs = std::abs(boundary - bulk);
    entry.rhs = report.delta * phi_norm;
    entry.passed = entry.lhs <= entry.rhs + quad_tol;
    report.all_passed = report.all_passed && entry.passed;
    report.per_operator.push_back(std::move(entry));
  }
  return {Operator::square(o_a, Dims{emb.dims.d_A}), report};
}

//=========================================================================
// The three-step bound chain, replayed numerically
//=========================================================================

struct BoundChainStep {
  // step 1: ||rho_a - R(N[rho_a])||_1 <= 2 sqrt(eps)
  double step1_lhs = 0.0, step1_rhs = 0.0;
  // step 2: ||N(rho_a) - (J rho J^dag)_A||_1 <= sqrt(2 ln2 eps)
  double step2_lhs = 0.0, step2_rhs = 0.0;
  // data processing inside the triangle step
  double dp_lhs = 0.0, dp_rhs = 0.0;
  // final: ||rho_a - R[(J rho J^dag)_A]||_1 <= delta1 + delta2
  double final_lhs = 0.0, final_rhs = 0.0;
  bool passed = false;
};

struct BoundChainReport {
  double epsilon = 0.0;
  double delta1 = 0.0, delta2 = 0.0, delta = 0.0;
  std::vector<BoundChainStep> per_probe;
  bool all_passed = true;
};

inline BoundChainReport bound_chain_audit(const CodeEmbedding& emb,
                                          const std::vector<DensityOperator>& probes,
                                          const QuadratureGrid& grid,
                                          const Tolerance& tol = {}) {
  const KrausChannel wedge = wedge_channel(emb, tol);
  const RecoveryChannel recovery(emb.sigma_a, wedge, grid, tol);
  const EntropyConfig bits{EntropyConfig::LogBase::bits};
  EpsilonReport eps = measure_epsilon(emb, detail::chain_pairs(emb, probes, tol), bits, tol);

  BoundChainReport report;
  const ReconstructionReport c = make_chain_constants(eps.epsilon);
  report.epsilon = c.epsilon_measured;
  report.delta1 = c.delta1;
  report.delta2 = c.delta2;
  report.delta = c.delta;
  const double quad_tol = 1e-6;

  for (const DensityOperator& rho : probes) {
    const Matrix rho_a = emb.bulk_reduced(rho, tol).mat();
    const Matrix rho_A = emb.boundary_reduced(rho, tol).mat();
    const Matrix n_rho_a = wedge.apply_matrix(rho_a);

    BoundChainStep s;
    s.step1_lhs = trace_norm(Matrix(rho_a - recovery.apply_matrix(n_rho_a)));
    s.step1_rhs = report.delta1;
    s.step2_lhs = trace_norm(Matrix(n_rho_a - rho_A));
    s.step2_rhs = report.delta2;
    s.dp_lhs = trace_norm(
        Matrix(recovery.apply_matrix(n_rho_a) - recovery.apply_matrix(rho_A)));
    s.dp_rhs = s.step2_lhs;
    s.final_lhs = trace_norm(Matrix(rho_a - recovery.apply_matrix(rho_A)));
    s.final_rhs = report.delta;
    s.passed = s.step1_lhs <= s.step1_rhs + quad_tol && s.step2_lhs <= s.step2_rhs + quad_tol &&
               s.dp_lhs <= s.dp_rhs + quad_tol && s.final_lhs <= s.final_rhs + quad_tol;
    report.all_passed = report.all_passed && s.passed;
    report.per_probe.push_back(s);
  }
  return report;
}

}  // namespace chanlab
