#pragma once

#include <cctype>
#include <map>
#include <optional>

#include "chanlab/random.hpp"

namespace chanlab {

//=========================================================================
// Statevector simulation
//=========================================================================

/// Normalized state of n qubits (n <= 20). Basis index bit p corresponds
/// to qubit n-1-p, so |x_1 x_2 ... x_n> has index with x_1 most
/// significant, matching the usual binary-string labels.
struct StateVector {
  Vector amplitudes;
  int n_qubits = 0;

  static StateVector computational_basis(int n, std::uint64_t bits) {
    StateVector s;
    s.n_qubits = n;
    s.amplitudes = Vector::Zero(Index(1) << n);
    s.amplitudes(static_cast<Index>(bits)) = Complex(1.0, 0.0);
    return s;
  }

  static StateVector from_amplitudes(Vector amps, int n, const Tolerance& tol = {}) {
    if (amps.size() != (Index(1) << n))
      throw DimensionError("StateVector: amplitude count is not 2^n");
    const double dev = std::abs(amps.squaredNorm() - 1.0);
    if (dev > tol.trace_tol) throw ValidationError("StateVector: not normalized", dev);
    return StateVector{std::move(amps), n};
  }

  Complex inner(const StateVector& other) const { return amplitudes.dot(other.amplitudes); }

  /// |<this|other>|^2, the global-phase-quotiented overlap.
  double overlap(const StateVector& other) const { return std::norm(inner(other)); }
};

//=========================================================================
// Pauli strings with phase tracking
//=========================================================================

/// phase * prod_j X_j^{x_j} Z_j^{z_j} with phase in {1, i, -1, -i}.
/// Masks live in amplitude-bit space: bit (n-1-i) acts on qubit i.
class PauliString {
 public:
  static PauliString identity(int n) { return PauliString(n, 0, 0, Complex(1.0, 0.0)); }

  /// Single-qubit X/Y/Z at 0-based qubit index; Y is stored as i X Z.
  static PauliString single(int n, int qubit, char kind) {
    if (qubit < 0 || qubit >= n) throw DimensionError("PauliString: qubit index out of range");
    const std::uint64_t bit = 1ULL << (n - 1 - qubit);
    switch (kind) {
      case 'X': return PauliString(n, bit, 0, Complex(1.0, 0.0));
      case 'Z': return PauliString(n, 0, bit, Complex(1.0, 0.0));
      case 'Y': return PauliString(n, bit, bit, Complex(0.0, 1.0));
    }
    throw Error("PauliString: unknown Pauli kind");
  }

  /// Product of single-qubit operators of one kind, e.g. Z on {0, 1}.
  static PauliString string(int n, char kind, const std::vector<int>& qubits) {
    PauliString p = identity(n);
    for (int q : qubits) p = p * single(n, q, kind);
    return p;
  }

  int n_qubits() const { return n_; }
  Complex phase() const { return phase_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  PauliString operator*(const PauliString& o) const {
    if (n_ != o.n_) throw DimensionError("PauliString: qubit count mismatch");
    // X^x1 Z^z1 X^x2 Z^z2 = (-1)^{z1.x2} X^{x1+x2} Z^{z1+z2}
    const int swaps = __builtin_popcountll(z_ & o.x_);
    Complex phase = phase_ * o.phase_;
    if (swaps & 1) phase = -phase;
    return PauliString(n_, x_ ^ o.x_, z_ ^ o.z_, phase);
  }

  bool commutes_with(const PauliString& o) const {
    return ((__builtin_popcountll(x_ & o.z_) + __builtin_popcountll(z_ & o.x_)) & 1) == 0;
  }

  bool is_hermitian() const {
    const bool odd_xz = (__builtin_popcountll(x_ & z_) & 1) != 0;
    const bool real_phase = std::abs(phase_.imag()) < 1e-12;
    return odd_xz != real_phase;
  }

  /// P^2 = phase^2 (-1)^{|x.z|} I; +1 for Hermitian strings.
  Complex square_scalar() const {
    Complex s = phase_ * phase_;
    if (__builtin_popcountll(x_ & z_) & 1) s = -s;
    return s;
  }

  int weight() const { return __builtin_popcountll(x_ | z_); }

  StateVector apply(const StateVector& in) const {
    if (in.n_qubits != n_) throw DimensionError("PauliString: state size mismatch");
    Vector out = Vector::Zero(in.amplitudes.size());
    for (Index b = 0; b < in.amplitudes.size(); ++b) {
      const Complex a = in.amplitudes(b);
      if (a == Complex(0.0, 0.0)) continue;
      Complex c = phase_ * a;
      if (__builtin_popcountll(static_cast<std::uint64_t>(b) & z_) & 1) c = -c;
      out(b ^ static_cast<Index>(x_)) += c;
    }
    return StateVector{std::move(out), n_};
  }

  /// Dense matrix form, for small n only (tests and algebra checks).
  Matrix to_matrix() const {
    const Index dim = Index(1) << n_;
    Matrix m = Matrix::Zero(dim, dim);
    for (Index b = 0; b < dim; ++b) {
      Complex c = phase_;
      if (__builtin_popcountll(static_cast<std::uint64_t>(b) & z_) & 1) c = -c;
      m(b ^ static_cast<Index>(x_), b) = c;
    }
    return m;
  }

  /// 1-based label like "Z5" or "X1X2X3"; "I" for the identity.
  std::string label() const {
    std::string out;
    for (int q = 0; q < n_; ++q) {
      const std::uint64_t bit = 1ULL << (n_ - 1 - q);
      const bool x = x_ & bit, z = z_ & bit;
      if (!x && !z) continue;
      out += x && z ? 'Y' : (x ? 'X' : 'Z');
      out += std::to_string(q + 1);
    }
    return out.empty() ? "I" : out;
  }

  /// Parses labels of the same form ("Z5", "X1X2X3", "I"), 1-based.
  static PauliString from_label(const std::string& text, int n) {
    PauliString p = identity(n);
    std::size_t i = 0;
    if (text == "I" || text.empty()) return p;
    while (i < text.size()) {
      const char kind = text[i++];
      if (kind != 'X' && kind != 'Y' && kind != 'Z')
        throw Error("PauliString: bad label '" + text + "'");
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i) throw Error("PauliString: label missing qubit index in '" + text + "'");
      const int qubit = std::stoi(text.substr(i, j - i)) - 1;
      p = p * single(n, qubit, kind);
      i = j;
    }
    return p;
  }

 private:
  PauliString(int n, std::uint64_t x, std::uint64_t z, Complex phase)
      : n_(n), x_(x), z_(z), phase_(phase) {
    if (n < 1 || n > 63) throw DimensionError("PauliString: qubit count out of range");
  }

  int n_;
  std::uint64_t x_;
  std::uint64_t z_;
  Complex phase_;
};

inline StateVector apply_pauli(const StateVector& state, const PauliString& p) {
  return p.apply(state);
}

//=========================================================================
// Stabilizer codes
//=========================================================================

/// Generator eigenvalue readout, one +1/-1 entry per generator.
struct Syndrome {
  std::vector<int> bits;

  bool operator<(const Syndrome& o) const { return bits < o.bits; }
  bool operator==(const Syndrome& o) const { return bits == o.bits; }

  bool all_plus() const {
    for (int b : bits)
      if (b != +1) return false;
    return true;
  }
};

/// A code given by its codewords, stabilizer generators, logical
/// operators, and a syndrome -> correction lookup table. Unknown
/// syndromes decode to "uncorrectable", never to a guess.
struct StabilizerCode {
  std::string name;
  int n = 0;
  StateVector logical_zero;
  StateVector logical_one;
  std::vector<PauliString> generators;
  PauliString logical_x = PauliString::identity(1);
  PauliString logical_z = PauliString::identity(1);
  std::map<Syndrome, PauliString> decode_table;
};

namespace detail {

/// Syndrome of a Pauli error from commutation alone: generator g reads -1
/// iff it anticommutes with the error.
inline Syndrome commutation_syndrome(const StabilizerCode& code, const PauliString& error) {
  Syndrome s;
  for (const PauliString& g : code.generators)
    s.bits.push_back(g.commutes_with(error) ? +1 : -1);
  return s;
}

}  // namespace detail

/// GHZ-basis codewords (|0...0> +- |1...1>)/sqrt(2) on n qubits.
inline StateVector ghz_codeword(int n, bool minus) {
  Vector amps = Vector::Zero(Index(1) << n);
  const double a = M_SQRT1_2;
  amps(0) = Complex(a, 0.0);
  amps((Index(1) << n) - 1) = Complex(minus ? -a : a, 0.0);
  return StateVector{std::move(amps), n};
}

/// The rudimentary 3-qubit code: codewords (|000> +- |111>)/sqrt(2),
/// stabilizers <Z1Z2, Z2Z3>. Detects one bit flip; a single phase flip
/// acts as logical X and is reported, not corrected. Y errors are handled
/// as iXZ: the bit-flip part corrects, the phase-flip part flips the
/// logical state (an extension of the published table).
inline StabilizerCode three_qubit_code() {
  StabilizerCode code;
  code.name = "three_qubit";
  code.n = 3;
  code.logical_zero = ghz_codeword(3, false);
  code.logical_one = ghz_codeword(3, true);
  code.generators = {PauliString::string(3, 'Z', {0, 1}), PauliString::string(3, 'Z', {1, 2})};
  code.logical_x = PauliString::single(3, 0, 'Z');          // any Z_i
  code.logical_z = PauliString::string(3, 'X', {0, 1, 2});  // X1 X2 X3

  code.decode_table.insert_or_assign(Syndrome{{+1, +1}}, PauliString::identity(3));
  for (int q = 0; q < 3; ++q) {
    const PauliString err = PauliString::single(3, q, 'X');
    code.decode_table.insert_or_assign(detail::commutation_syndrome(code, err), err);
  }
  return code;
}

/// The 9-qubit Shor code: blocks of the 3-qubit codeword, Z-pair
/// stabilizers within blocks plus two six-fold X strings across blocks.
/// Bit flips are pinpointed to a qubit; phase flips only to a block, and
/// the correction applies Z to the block's first qubit (any qubit in the
/// block works, the representative is canonical for deterministic
/// goldens).
inline StabilizerCode shor_code() {
  StabilizerCode code;
  code.name = "shor";
  code.n = 9;

  const StateVector plus = ghz_codeword(3, false), minus = ghz_codeword(3, true);
  const auto triple = [](const StateVector& b) {
    Vector amps = Vector::Zero(512);
    for (Index i = 0; i < 8; ++i)
      for (Index j = 0; j < 8; ++j)
        for (Index k = 0; k < 8; ++k)
          amps((i << 6) | (j << 3) | k) = b.amplitudes(i) * b.amplitudes(j) * b.amplitudes(k);
    return StateVector{std::move(amps), 9};
  };
  code.logical_zero = triple(plus);
  code.logical_one = triple(minus);

  for (int block = 0; block < 3; ++block) {
    const int q = 3 * block;
    code.generators.push_back(PauliString::string(9, 'Z', {q, q + 1}));
    code.generators.push_back(PauliString::string(9, 'Z', {q + 1, q + 2}));
  }
  code.generators.push_back(PauliString::string(9, 'X', {0, 1, 2, 3, 4, 5}));
  code.generators.push_back(PauliString::string(9, 'X', {3, 4, 5, 6, 7, 8}));

  code.logical_z = PauliString::string(9, 'X', {0, 1, 2});  // X1 X2 X3
  code.logical_x = PauliString::string(9, 'Z', {0, 3, 6});  // Z1 Z4 Z7

  code.decode_table.insert_or_assign(
      detail::commutation_syndrome(code, PauliString::identity(9)), PauliString::identity(9));
  for (int q = 0; q < 9; ++q) {
    const PauliString x_err = PauliString::single(9, q, 'X');
    code.decode_table.insert_or_assign(detail::commutation_syndrome(code, x_err), x_err);

    // Z anywhere in a block shares a syndrome; correct on the block head.
    const PauliString z_err = PauliString::single(9, q, 'Z');
    const PauliString z_fix = PauliString::single(9, 3 * (q / 3), 'Z');
    code.decode_table.insert_or_assign(detail::commutation_syndrome(code, z_err), z_fix);

    const PauliString y_err = PauliString::single(9, q, 'Y');
    code.decode_table.insert_or_assign(detail::commutation_syndrome(code, y_err), x_err * z_fix);
  }
  return code;
}

//=========================================================================
// Encoding, measurement, decoding
//=========================================================================

inline StateVector encode(const StabilizerCode& code, Complex alpha, Complex beta,
                          const Tolerance& tol = {}) {
  const double dev = std::abs(std::norm(alpha) + std::norm(beta) - 1.0);
  if (dev > tol.trace_tol)
    throw ValidationError("encode: logical amplitudes are not normalized", dev);
  Vector amps = alpha * code.logical_zero.amplitudes + beta * code.logical_one.amplitudes;
  return StateVector{std::move(amps), code.n};
}

struct NotEigenstateError : Error {
  NotEigenstateError(const std::string& msg, double plus, double minus)
      : Error(msg), p_plus(plus), p_minus(minus) {}
  double p_plus;
  double p_minus;
};

/// Deterministic eigenvalue readout <psi|g|psi> per generator, rounded to
/// +-1. States outside an eigenspace (non-Pauli corruption) are a hard
/// error.
inline Syndrome measure_syndrome_direct(const StabilizerCode& code, const StateVector& state) {
  Syndrome s;
  for (const PauliString& g : code.generators) {
    const Complex e = state.inner(g.apply(state));
    if (std::abs(std::abs(e.real()) - 1.0) > 1e-6 || std::abs(e.imag()) > 1e-6)
      throw NotEigenstateError("measure_syndrome_direct: state is not a generator eigenstate",
                               0.5 * (1.0 + e.real()), 0.5 * (1.0 - e.real()));
    s.bits.push_back(e.real() > 0 ? +1 : -1);
  }
  return s;
}

/// Table lookup; std::nullopt marks an uncorrectable syndrome (e.g. a
/// multi-error pattern outside the single-error tables).
inline std::optional<PauliString> decode(const StabilizerCode& code, const Syndrome& syndrome) {
  if (syndrome.bits.size() != code.generators.size())
    throw DimensionError("decode: syndrome length mismatch");
  const auto it = code.decode_table.find(syndrome);
  if (it == code.decode_table.end()) return std::nullopt;
  return it->second;
}

//=========================================================================
// Round trip and the ancilla measurement circuit
//=========================================================================

struct RoundtripReport {
  Syndrome syndrome;
  std::optional<PauliString> correction;
  double fidelity = 0.0;          // |<psi_in|psi_out>|^2
  double flip_fidelity = 0.0;     // |<Xbar psi_in|psi_out>|^2
  bool logical_preserved = false;
  bool logical_flipped = false;
  bool uncorrectable = false;
};

/// encode -> error -> measure -> decode -> correct, reporting whether the
/// logical state survived up to global phase.
inline RoundtripReport roundtrip(const StabilizerCode& code, Complex alpha, Complex beta,
                                 const PauliString& error, const Tolerance& tol = {}) {
  const StateVector psi = encode(code, alpha, beta, tol);
  const StateVector corrupted = error.apply(psi);

  RoundtripReport r;
  r.syndrome = measure_syndrome_direct(code, corrupted);
  r.correction = decode(code, r.syndrome);
  if (!r.correction) {
    r.uncorrectable = true;
    r.fidelity = psi.overlap(corrupted);
    return r;
  }
  const StateVector repaired = r.correction->apply(corrupted);
  r.fidelity = psi.overlap(repaired);
  r.flip_fidelity = code.logical_x.apply(psi).overlap(repaired);
  r.logical_preserved = r.fidelity >= 1.0 - 1e-9;
  r.logical_flipped = r.flip_fidelity >= 1.0 - 1e-9;
  return r;
}

/// Result of the ancilla-based measurement circuit. In the eigenstate
/// case the outcome is deterministic and the data state is returned
/// unchanged; otherwise the Born probabilities are reported and the
/// outcome is only sampled when a seed is supplied.
struct CircuitMeasurement {
  std::optional<int> outcome;  // +1 or -1 once determined
  StateVector post_state;      // data qubits after the measurement
  double p_plus = 0.0;
  double p_minus = 0.0;
  bool deterministic = false;
};

/// Simulates ancilla-based syndrome extraction: ancilla |0>, CNOTs from
/// the generator's support into the ancilla, with Hadamard conjugation of the
/// data qubits for X-type generators, then a computational-basis ancilla
/// measurement.
inline CircuitMeasurement circuit_syndrome(const StabilizerCode& code, const StateVector& state,
                                           std::size_t generator_index,
                                           std::optional<std::uint64_t> sample_seed = std::nullopt) {
  if (generator_index >= code.generators.size())
    throw DimensionError("circuit_syndrome: generator index out of range");
  const PauliString& g = code.generators[generator_index];
  if (g.x_mask() != 0 && g.z_mask() != 0)
    throw Error("circuit_syndrome: generator must be pure X-type or Z-type");
  const bool x_type = g.x_mask() != 0;
  const std::uint64_t support = x_type ? g.x_mask() : g.z_mask();

  const int n = code.n;
  const Index dim = Index(1) << n;

  // Work register = data (amplitude bits shifted left) + ancilla (LSB).
  Vector work = Vector::Zero(dim << 1);
  for (Index b = 0; b < dim; ++b) work(b << 1) = state.amplitudes(b);

  const auto hadamard_support = [&]() {
    Vector next = Vector::Zero(work.size());
    for (Index w = 0; w < work.size(); ++w) {
      const Complex a = work(w);
      if (a == Complex(0.0, 0.0)) continue;
      const std::uint64_t data = static_cast<std::uint64_t>(w) >> 1;
      // Expand H on every support qubit of this basis state at once.
      std::vector<int> qubits;
      for (int p = 0; p < n; ++p)
        if (support & (1ULL << p)) qubits.push_back(p);
      const std::size_t k = qubits.size();
      const double scale = std::pow(M_SQRT1_2, static_cast<double>(k));
      for (std::uint64_t pattern = 0; pattern < (1ULL << k); ++pattern) {
        std::uint64_t target = data;
        int sign = 0;
        for (std::size_t q = 0; q < k; ++q) {
          const std::uint64_t bit = 1ULL << qubits[q];
          const bool in_bit = (data & bit) != 0;
          const bool out_bit = (pattern >> q) & 1;
          if (in_bit && out_bit) sign ^= 1;
          target = out_bit ? (target | bit) : (target & ~bit);
        }
        next((static_cast<Index>(target) << 1) | (w & 1)) +=
            (sign ? -scale : scale) * a;
      }
    }
    work = std::move(next);
  };

  if (x_type) hadamard_support();

  // CNOTs from each support qubit into the ancilla fold the support
  // parity into the ancilla bit.
  {
    Vector next = Vector::Zero(work.size());
    for (Index w = 0; w < work.size(); ++w) {
      if (work(w) == Complex(0.0, 0.0)) continue;
      const std::uint64_t data = static_cast<std::uint64_t>(w) >> 1;
      const std::uint64_t parity =
          static_cast<std::uint64_t>(__builtin_popcountll(data & support)) & 1ULL;
      next((static_cast<Index>(data) << 1) | ((w & 1) ^ static_cast<Index>(parity))) += work(w);
    }
    work = std::move(next);
  }

  if (x_type) hadamard_support();

  CircuitMeasurement result;
  for (Index w = 0; w < work.size(); ++w) {
    if ((w & 1) == 0)
      result.p_plus += std::norm(work(w));
    else
      result.p_minus += std::norm(work(w));
  }

  int anc_bit;
  if (std::max(result.p_plus, result.p_minus) >= 1.0 - 1e-6) {
    result.deterministic = true;
    anc_bit = result.p_plus >= result.p_minus ? 0 : 1;
  } else if (sample_seed) {
    Rng rng(*sample_seed);
    anc_bit = rng.uniform() < result.p_minus ? 1 : 0;
  } else {
    // Probabilistic branch without a sampling seed: report Born
    // probabilities and leave the data untouched.
    result.post_state = state;
    return result;
  }

  Vector post = Vector::Zero(dim);
  for (Index b = 0; b < dim; ++b) post(b) = work((b << 1) | anc_bit);
  post /= post.norm();
  result.outcome = anc_bit == 0 ? +1 : -1;
  result.post_state = StateVector{std::move(post), n};
  return result;
}

}  // namespace chanlab
