#pragma once

#include <optional>
#include <string>

#include "chanlab/states.hpp"

namespace chanlab {

//=========================================================================
// Entropic functionals and inequality audits
//=========================================================================

/// Fixes the logarithm base for one computation run; every quantity in a
/// report shares it. Conversions: bits = nats / ln 2.
struct EntropyConfig {
  enum class LogBase { nats, bits };
  LogBase base = LogBase::nats;

  double from_nats(double x) const { return base == LogBase::nats ? x : x / M_LN2; }
  double log(double x) const { return from_nats(std::log(x)); }
};

/// One audited inequality, lhs <= rhs. slack = rhs - lhs; passed iff
/// slack >= -tol.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool passed = false;
  double tol = 1e-9;
  std::optional<std::uint64_t> seed;

  static InequalityReport make(std::string name, double lhs, double rhs, double tol = 1e-9) {
    InequalityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.tol = tol;
    r.passed = r.slack >= -tol;
    return r;
  }
};

//=========================================================================
// Von Neumann and relative entropy
//=========================================================================

/// S(rho) = -Tr(rho log rho) = -sum p_i log p_i over eigenvalues above the
/// cutoff, with 0 log 0 = 0.
inline double von_neumann_entropy(const DensityOperator& rho, const EntropyConfig& cfg = {},
                                  const Tolerance& tol = {}) {
  HermitianEigensystem sys = herm_eigendecompose(rho.mat(), tol);
  double s = 0.0;
  for (Index i = 0; i < sys.eigenvalues.size(); ++i) {
    const double p = sys.eigenvalues(i);
    if (p > tol.eigenvalue_cutoff) s -= p * std::log(p);
  }
  return cfg.from_nats(s);
}

/// D(rho||sigma) = Tr(rho log rho) - Tr(rho log sigma). Requires
/// supp rho within supp sigma: every kernel eigenvector of sigma must
/// carry no rho weight, else a SupportError identifies it.
inline double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                               const EntropyConfig& cfg = {}, const Tolerance& tol = {}) {
  if (rho.dim() != sigma.dim())
    throw DimensionError("relative_entropy: dimension mismatch");

  HermitianEigensystem ssys = herm_eigendecompose(sigma.mat(), tol);
  for (Index i = 0; i < ssys.eigenvalues.size(); ++i) {
    if (ssys.eigenvalues(i) > tol.eigenvalue_cutoff) continue;
    const Vector v = ssys.eigenvectors.col(i);
    const double overlap = std::real((v.adjoint() * rho.mat() * v)(0, 0));
    if (overlap > tol.eigenvalue_cutoff)
      throw SupportError("relative_entropy: supp(rho) escapes supp(sigma)", i, overlap);
  }

  HermitianEigensystem rsys = herm_eigendecompose(rho.mat(), tol);
  double tr_rho_log_rho = 0.0;
  for (Index i = 0; i < rsys.eigenvalues.size(); ++i) {
    const double p = rsys.eigenvalues(i);
    if (p > tol.eigenvalue_cutoff) tr_rho_log_rho += p * std::log(p);
  }
  const Matrix log_sigma = matrix_function_on_support(sigma.mat(), ScalarFn::log(), tol);
  const double tr_rho_log_sigma = std::real((rho.mat() * log_sigma).trace());
  return cfg.from_nats(tr_rho_log_rho - tr_rho_log_sigma);
}

//=========================================================================
// Trace distance and the optimal distinguishing measurement
//=========================================================================

/// d(rho, sigma) = (1/2) sum |lambda_i| of rho - sigma, together with the
/// sign eigenprojectors of the difference. Measuring them induces
/// classical distributions whose L1 distance saturates the bound.
struct TraceDistanceReport {
  double distance = 0.0;
  std::vector<Operator> optimal_projectors;  // P+, P-, and kernel projector if any
  double classical_l1 = 0.0;
};

inline TraceDistanceReport trace_distance_report(const DensityOperator& rho,
                                                 const DensityOperator& sigma,
                                                 const Tolerance& tol = {}) {
  if (rho.dim() != sigma.dim())
    throw DimensionError("trace_distance_report: dimension mismatch");
  const Matrix delta = rho.mat() - sigma.mat();
  HermitianEigensystem sys = herm_eigendecompose(delta, tol);

  const Index n = sys.source_dim;
  Matrix plus = Matrix::Zero(n, n), minus = Matrix::Zero(n, n), kernel = Matrix::Zero(n, n);
  double dist = 0.0;
  bool has_kernel = false;
  for (Index i = 0; i < n; ++i) {
    const double l = sys.eigenvalues(i);
    dist += 0.5 * std::abs(l);
    const Matrix proj = sys.eigenvectors.col(i) * sys.eigenvectors.col(i).adjoint();
    if (l > tol.eigenvalue_cutoff)
      plus += proj;
    else if (l < -tol.eigenvalue_cutoff)
      minus += proj;
    else {
      kernel += proj;
      has_kernel = true;
    }
  }

  TraceDistanceReport out;
  out.distance = dist;
  out.optimal_projectors.push_back(Operator::square(plus, rho.factor_dims()));
  out.optimal_projectors.push_back(Operator::square(minus, rho.factor_dims()));
  if (has_kernel) out.optimal_projectors.push_back(Operator::square(kernel, rho.factor_dims()));
  for (const Operator& e : out.optimal_projectors)
    out.classical_l1 += 0.5 * std::abs(std::real((delta * e.mat()).trace()));
  return out;
}

//=========================================================================
// Pinsker, the subadditivity family and additivity
//=========================================================================

/// D(rho||sigma) >= c ||rho - sigma||_1^2 with c = 1/2 in nats and
/// c = 1/(2 ln 2) in bits.
inline InequalityReport pinsker_audit(const DensityOperator& rho, const DensityOperator& sigma,
                                      const EntropyConfig& cfg = {}, const Tolerance& tol = {}) {
  const double d = relative_entropy(rho, sigma, cfg, tol);
  const double t1 = trace_norm(Matrix(rho.mat() - sigma.mat()));
  const double c = cfg.base == EntropyConfig::LogBase::nats ? 0.5 : 0.5 / M_LN2;
  return InequalityReport::make("pinsker", c * t1 * t1, d);
}

/// Subadditivity, Araki-Lieb and strong subadditivity on a state tagged
/// with exactly three factors A, B, C.
inline std::vector<InequalityReport> inequality_suite(const DensityOperator& rho_abc,
                                                      const EntropyConfig& cfg = {},
                                                      const Tolerance& tol = {}) {
  if (rho_abc.factor_dims().size() != 3)
    throw DimensionError("inequality_suite: state must carry exactly three factors");
  const auto s = [&](std::vector<std::size_t> keep) {
    return von_neumann_entropy(partial_trace(rho_abc, std::move(keep), tol), cfg, tol);
  };
  const double sa = s({0}), sb = s({1}), sab = s({0, 1}), sbc = s({1, 2});
  const double sabc = von_neumann_entropy(rho_abc, cfg, tol);

  std::vector<InequalityReport> out;
  out.push_back(InequalityReport::make("subadditivity", sab, sa + sb));
  out.push_back(InequalityReport::make("araki_lieb", std::abs(sa - sb), sab));
  out.push_back(InequalityReport::make("strong_subadditivity", sabc + sb, sab + sbc));
  return out;
}

/// |D(rho (x) chi || sigma (x) tau) - D(rho||sigma) - D(chi||tau)| small.
/// sigma and tau must be full-rank.
inline InequalityReport additivity_check(const DensityOperator& rho_a,
                                         const DensityOperator& chi_b,
                                         const DensityOperator& sigma_a,
                                         const DensityOperator& tau_b,
                                         const EntropyConfig& cfg = {},
                                         const Tolerance& tol = {}) {
  for (const DensityOperator* s : {&sigma_a, &tau_b}) {
    HermitianEigensystem sys = herm_eigendecompose(s->mat(), tol);
    if (sys.eigenvalues(sys.eigenvalues.size() - 1) <= tol.eigenvalue_cutoff)
      throw ValidationError("additivity_check: reference state is rank-deficient",
                            sys.eigenvalues(sys.eigenvalues.size() - 1));
  }
  const double joint = relative_entropy(tensor(rho_a, chi_b), tensor(sigma_a, tau_b), cfg, tol);
  const double parts =
      relative_entropy(rho_a, sigma_a, cfg, tol) + relative_entropy(chi_b, tau_b, cfg, tol);
  InequalityReport r = InequalityReport::make("relative_entropy_additivity", joint, parts, 1e-8);
  r.passed = std::abs(r.slack) <= r.tol;  // equality, not one-sided
  return r;
}

//=========================================================================
// The evaporation-entropy contradiction audit
//=========================================================================

/// Entropies of the mode pair A, B and the collected radiation R.
struct AmpssEntropies {
  double s_a = 0.0, s_b = 0.0, s_ab = 0.0;
  double s_r = 0.0, s_br = 0.0, s_abr = 0.0;
};

/// Pure arithmetic on supplied entropies. Conditions:
///   (i)   S(A) = S(B) != 0 and S(AB) = 0
///   (ii)  S(ABR) = S(R)
///   (iii) S(BR) < S(R)      (strict; tested as slack <= -1e-9)
///   (iv)  S(AB) + S(BR) >= S(ABR) + S(B)
/// Asserting all four replays the chain
///   S(R)+S(B) = S(ABR)+S(B) <= S(AB)+S(BR) < S(AB)+S(R) = S(R),
/// which is impossible for S(B) > 0.
struct AmpssReport {
  bool cond_entangled_pure_pair = false;  // (i)
  bool cond_radiation_closure = false;    // (ii)
  bool cond_entropy_decrease = false;     // (iii)
  bool cond_iii_marginal = false;         // |S(BR) - S(R)| within tolerance
  bool cond_ssa = false;                  // (iv), as a numeric fact about the inputs
  double chain_start = 0.0;               // S(R) + S(B)
  double chain_after_ii = 0.0;            // S(ABR) + S(B)
  double chain_after_iv = 0.0;            // S(AB) + S(BR)
  double chain_after_iii = 0.0;           // S(AB) + S(R)
  double chain_end = 0.0;                 // S(R)
  bool contradiction = false;             // chain forces S(R)+S(B) < S(R)
  bool jointly_consistent = true;         // not all of (i)-(iv) can be asserted
};

inline AmpssReport ampss_audit(const AmpssEntropies& s, double tol = 1e-9) {
  AmpssReport r;
  r.cond_entangled_pure_pair =
      std::abs(s.s_a - s.s_b) <= tol && s.s_a > tol && std::abs(s.s_ab) <= tol;
  r.cond_radiation_closure = std::abs(s.s_abr - s.s_r) <= tol;
  r.cond_entropy_decrease = s.s_br - s.s_r <= -tol;
  r.cond_iii_marginal = std::abs(s.s_br - s.s_r) < tol;
  r.cond_ssa = s.s_ab + s.s_br - s.s_abr - s.s_b >= -tol;

  r.chain_start = s.s_r + s.s_b;
  r.chain_after_ii = s.s_abr + s.s_b;
  r.chain_after_iv = s.s_ab + s.s_br;
  r.chain_after_iii = s.s_ab + s.s_r;
  r.chain_end = s.s_r;

  // With (i)-(iii) holding numerically, asserting (iv) closes the chain
  // into S(R)+S(B) < S(R), contradicting S(B) > 0.
  r.contradiction =
      r.cond_entangled_pure_pair && r.cond_radiation_closure && r.cond_entropy_decrease;
  r.jointly_consistent = !r.contradiction;
  return r;
}

/// Entropies of a concrete tripartite state, factors read as (A, B, R).
inline AmpssEntropies ampss_entropies(const DensityOperator& rho_abr,
                                      const EntropyConfig& cfg = {}, const Tolerance& tol = {}) {
  if (rho_abr.factor_dims().size() != 3)
    throw DimensionError("ampss_entropies: state must carry exactly three factors");
  const auto s = [&](std::vector<std::size_t> keep) {
    return von_neumann_entropy(partial_trace(rho_abr, std::move(keep), tol), cfg, tol);
  };
  AmpssEntropies out;
  out.s_a = s({0});
  out.s_b = s({1});
  out.s_ab = s({0, 1});
  out.s_r = s({2});
  out.s_br = s({1, 2});
  out.s_abr = von_neumann_entropy(rho_abr, cfg, tol);
  return out;
}

}  // namespace chanlab
