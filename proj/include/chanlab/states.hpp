#pragma once

#include <algorithm>
#include <limits>

#include "chanlab/operator.hpp"
#include "chanlab/random.hpp"

namespace chanlab {

//=========================================================================
// Validated states on multipartite Hilbert spaces
//=========================================================================

/// Which density-operator axiom failed, and by how much.
struct DensityCheck {
  double hermiticity_deviation = 0.0;
  double min_eigenvalue = 0.0;
  double trace_deviation = 0.0;
  bool hermitian = false;
  bool positive = false;
  bool normalized = false;

  bool ok() const { return hermitian && positive && normalized; }
};

inline DensityCheck check_density(const Operator& op, const Tolerance& tol = {}) {
  DensityCheck c;
  if (!op.is_square()) {
    c.hermiticity_deviation = std::numeric_limits<double>::infinity();
    return c;
  }
  c.hermiticity_deviation = (op.mat() - op.mat().adjoint()).norm();
  c.hermitian = c.hermiticity_deviation <= tol.hermiticity_tol;
  c.trace_deviation = std::abs(op.mat().trace() - Complex(1.0, 0.0));
  c.normalized = c.trace_deviation <= tol.trace_tol;
  if (c.hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (op.mat() + op.mat().adjoint()),
                                                 Eigen::EigenvaluesOnly);
    c.min_eigenvalue = solver.eigenvalues().minCoeff();
    c.positive = c.min_eigenvalue >= -tol.eigenvalue_cutoff;
  }
  return c;
}

/// A certified density operator: Hermitian, PSD and unit-trace within
/// tolerance. The type is the certificate; downstream operations require
/// certified inputs so axiom violations surface as first-class errors.
class DensityOperator {
 public:
  const Operator& op() const { return op_; }
  const Matrix& mat() const { return op_.mat(); }
  const Dims& factor_dims() const { return op_.row_dims(); }
  Index dim() const { return op_.rows(); }

  /// Skips validation. For internal plumbing where validity holds by
  /// construction; public entry point is make_density.
  static DensityOperator trusted(Operator op) { return DensityOperator(std::move(op)); }

 private:
  explicit DensityOperator(Operator op) : op_(std::move(op)) {}
  Operator op_;
};

inline DensityOperator make_density(Operator op, const Tolerance& tol = {}) {
  if (!op.is_square()) throw DimensionError("make_density: matrix must be square");
  const DensityCheck c = check_density(op, tol);
  if (!c.hermitian)
    throw ValidationError("make_density: hermiticity violation", c.hermiticity_deviation);
  if (!c.positive)
    throw ValidationError("make_density: positivity violation", c.min_eigenvalue);
  if (!c.normalized)
    throw ValidationError("make_density: trace violation", c.trace_deviation);
  // Symmetrize the accepted matrix so downstream spectral calls are exact.
  Matrix h = 0.5 * (op.mat() + op.mat().adjoint());
  return DensityOperator::trusted(Operator(std::move(h), op.row_dims(), op.col_dims()));
}

inline DensityOperator make_density(Matrix m, Dims factor_dims, const Tolerance& tol = {}) {
  return make_density(Operator::square(std::move(m), std::move(factor_dims)), tol);
}

/// Normalized element of a multipartite Hilbert space.
class PureState {
 public:
  const Vector& amplitudes() const { return amps_; }
  const Dims& factor_dims() const { return dims_; }
  Index dim() const { return amps_.size(); }

  static PureState normalized(Vector amps, Dims factor_dims, const Tolerance& tol = {}) {
    if (dim_product(factor_dims) != amps.size())
      throw DimensionError("PureState: factor dims do not match amplitude count");
    const double dev = std::abs(amps.squaredNorm() - 1.0);
    if (dev > tol.trace_tol)
      throw ValidationError("PureState: normalization violation", dev);
    return PureState(std::move(amps), std::move(factor_dims));
  }

  /// Unchecked construction, used for the unnormalized |Gamma> variant.
  static PureState unchecked(Vector amps, Dims factor_dims) {
    if (dim_product(factor_dims) != amps.size())
      throw DimensionError("PureState: factor dims do not match amplitude count");
    return PureState(std::move(amps), std::move(factor_dims));
  }

  DensityOperator to_density() const {
    Matrix m = amps_ * amps_.adjoint();
    return DensityOperator::trusted(Operator::square(std::move(m), dims_));
  }

 private:
  PureState(Vector amps, Dims dims) : amps_(std::move(amps)), dims_(std::move(dims)) {}
  Vector amps_;
  Dims dims_;
};

//=========================================================================
// Tensor product and partial trace
//=========================================================================

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::trusted(tensor(a.op(), b.op()));
}

inline PureState tensor(const PureState& a, const PureState& b) {
  Vector out(a.dim() * b.dim());
  for (Index i = 0; i < a.dim(); ++i)
    out.segment(i * b.dim(), b.dim()) = a.amplitudes()(i) * b.amplitudes();
  Dims dims = a.factor_dims();
  dims.insert(dims.end(), b.factor_dims().begin(), b.factor_dims().end());
  return PureState::unchecked(std::move(out), std::move(dims));
}

/// Partial trace over the factors not listed in `keep`, implementing
/// Tr_B O = sum_mu <mu| O |mu> on the traced side. Factors are addressed
/// by index; the result keeps them in their original order.
inline Operator partial_trace(const Operator& op, std::vector<std::size_t> keep) {
  if (!op.is_square() || op.row_dims() != op.col_dims())
    throw DimensionError("partial_trace: operator must be square with matching factors");
  const Dims& dims = op.row_dims();
  const std::size_t n = dims.size();
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty()) throw DimensionError("partial_trace: keep set must be non-empty");
  for (std::size_t k : keep)
    if (k >= n) throw DimensionError("partial_trace: factor index out of range");

  std::vector<Index> strides(n);
  Index s = 1;
  for (std::size_t i = n; i-- > 0;) {
    strides[i] = s;
    s *= dims[i];
  }

  std::vector<std::size_t> traced;
  for (std::size_t i = 0; i < n; ++i)
    if (!std::binary_search(keep.begin(), keep.end(), i)) traced.push_back(i);

  const auto offsets = [&](const std::vector<std::size_t>& factors) {
    Index count = 1;
    for (std::size_t f : factors) count *= dims[f];
    std::vector<Index> out(static_cast<std::size_t>(count), 0);
    for (Index lin = 0; lin < count; ++lin) {
      Index rem = lin, off = 0;
      for (std::size_t i = factors.size(); i-- > 0;) {
        off += (rem % dims[factors[i]]) * strides[factors[i]];
        rem /= dims[factors[i]];
      }
      out[static_cast<std::size_t>(lin)] = off;
    }
    return out;
  };

  const std::vector<Index> keep_off = offsets(keep);
  const std::vector<Index> traced_off = offsets(traced);

  const Index kd = static_cast<Index>(keep_off.size());
  Matrix out = Matrix::Zero(kd, kd);
  const Matrix& m = op.mat();
  for (Index r = 0; r < kd; ++r)
    for (Index c = 0; c < kd; ++c) {
      Complex acc(0.0, 0.0);
      for (Index t : traced_off) acc += m(keep_off[static_cast<std::size_t>(r)] + t,
                                          keep_off[static_cast<std::size_t>(c)] + t);
      out(r, c) = acc;
    }

  Dims kept_dims;
  for (std::size_t k : keep) kept_dims.push_back(dims[k]);
  return Operator::square(std::move(out), std::move(kept_dims));
}

inline DensityOperator partial_trace(const DensityOperator& rho, std::vector<std::size_t> keep,
                                     const Tolerance& tol = {}) {
  return make_density(partial_trace(rho.op(), std::move(keep)), tol);
}

//=========================================================================
// Schmidt decomposition and purification
//=========================================================================

/// |psi> = sum_j c_j |phi_j>_A |chi_j>_B with c_j > 0 descending and both
/// vector families orthonormal.
struct SchmidtDecomposition {
  RealVector coefficients;
  Matrix left_vectors;
  Matrix right_vectors;

  Vector reconstruct() const {
    const Index da = left_vectors.rows(), db = right_vectors.rows();
    Vector out = Vector::Zero(da * db);
    for (Index j = 0; j < coefficients.size(); ++j)
      for (Index a = 0; a < da; ++a)
        out.segment(a * db, db) += coefficients(j) * left_vectors(a, j) * right_vectors.col(j);
    return out;
  }
};

/// Schmidt decomposition across the cut after the first `left_factors`
/// factors.
inline SchmidtDecomposition schmidt(const PureState& psi, std::size_t left_factors,
                                    const Tolerance& tol = {}) {
  const Dims& dims = psi.factor_dims();
  if (dims.size() < 2) throw DimensionError("schmidt: state must have at least two factors");
  if (left_factors == 0 || left_factors >= dims.size())
    throw DimensionError("schmidt: cut must leave factors on both sides");

  Index da = 1, db = 1;
  for (std::size_t i = 0; i < dims.size(); ++i)
    (i < left_factors ? da : db) *= dims[static_cast<std::size_t>(i)];

  Matrix m(da, db);
  for (Index a = 0; a < da; ++a) m.row(a) = psi.amplitudes().segment(a * db, db).transpose();

  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol.eigenvalue_cutoff) ++rank;

  SchmidtDecomposition out;
  out.coefficients = sv.head(rank);
  out.left_vectors = svd.matrixU().leftCols(rank);
  out.right_vectors = svd.matrixV().leftCols(rank).conjugate();
  // Phase-fix the left family; compensate on the right so the
  // reconstruction is unchanged.
  for (Index j = 0; j < rank; ++j) {
    for (Index i = 0; i < out.left_vectors.rows(); ++i) {
      const double mag = std::abs(out.left_vectors(i, j));
      if (mag > 1e-7) {
        const Complex ph = std::conj(out.left_vectors(i, j)) / mag;
        out.left_vectors.col(j) *= ph;
        out.right_vectors.col(j) *= std::conj(ph);
        break;
      }
    }
  }
  return out;
}

/// Maximally entangled state on d x d. Unnormalized: sum_i |i>|i> with
/// <Gamma|Gamma> = d; normalized: amplitudes 1/sqrt(d).
inline PureState max_entangled(Index d, bool normalized = true) {
  if (d < 1) throw DimensionError("max_entangled: dimension must be >= 1");
  Vector amps = Vector::Zero(d * d);
  const Complex a = normalized ? Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0)
                               : Complex(1.0, 0.0);
  for (Index i = 0; i < d; ++i) amps(i * d + i) = a;
  return PureState::unchecked(std::move(amps), Dims{d, d});
}

/// Pure state on dim x rank(rho) whose partial trace over the appended
/// ancilla factor reproduces rho.
inline PureState purify(const DensityOperator& rho, const Tolerance& tol = {}) {
  HermitianEigensystem sys = herm_eigendecompose(rho.mat(), tol);
  Index rank = 0;
  while (rank < sys.eigenvalues.size() && sys.eigenvalues(rank) > tol.eigenvalue_cutoff) ++rank;
  rank = std::max<Index>(rank, 1);

  const Index d = rho.dim();
  Vector amps = Vector::Zero(d * rank);
  for (Index a = 0; a < rank; ++a) {
    const double p = std::max(sys.eigenvalues(a), 0.0);
    for (Index i = 0; i < d; ++i) amps(i * rank + a) += std::sqrt(p) * sys.eigenvectors(i, a);
  }
  Dims dims = rho.factor_dims();
  dims.push_back(rank);
  return PureState::normalized(std::move(amps), std::move(dims), tol);
}

//=========================================================================
// Seeded random states
//=========================================================================

/// Unitarily invariant random pure state: independent complex-normal
/// amplitudes, then normalized.
inline PureState random_pure(Dims factor_dims, Rng& rng) {
  Vector v = rng.gaussian_vector(dim_product(factor_dims));
  v /= v.norm();
  return PureState::unchecked(std::move(v), std::move(factor_dims));
}

inline PureState random_pure(Dims factor_dims, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure(std::move(factor_dims), rng);
}

/// Random density operator of the stated rank: partial trace of a uniform
/// pure state on dim (x) rank.
inline DensityOperator random_density(Index dim, Index rank, Rng& rng,
                                      const Tolerance& tol = {}) {
  if (rank < 1 || rank > dim)
    throw DimensionError("random_density: rank must satisfy 1 <= rank <= dim");
  PureState psi = random_pure(Dims{dim, rank}, rng);
  return partial_trace(psi.to_density(), {0}, tol);
}

inline DensityOperator random_density(Index dim, Index rank, std::uint64_t seed,
                                      const Tolerance& tol = {}) {
  Rng rng(seed);
  return random_density(dim, rank, rng, tol);
}

/// Fidelity on certified states.
inline double fidelity(const DensityOperator& rho, const DensityOperator& sigma,
                       const Tolerance& tol = {}) {
  return fidelity(rho.mat(), sigma.mat(), tol);
}

}  // namespace chanlab
