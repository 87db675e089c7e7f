#pragma once

#include <cstdint>
#include <random>

#include <Eigen/QR>

#include "chanlab/operator.hpp"

namespace chanlab {

//=========================================================================
// Seeded randomness. No ambient entropy anywhere: every randomized
// operation takes an Rng (or a seed), and parallel trials get
// reproducible independent substreams by index.
//=========================================================================

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Independent stream derived from the original seed and an index;
  /// unaffected by draws already made on this instance.
  Rng substream(std::uint64_t index) const {
    return Rng(detail::splitmix64(seed_ ^ detail::splitmix64(index + 1)));
  }

  /// Uniform in [0, 1) with 53 random bits. Avoids the
  /// implementation-defined std distributions so seeds are portable.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Complex normal with unit total variance.
  Complex cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im) * M_SQRT1_2;
  }

  std::uint64_t integer(std::uint64_t bound) { return engine_() % bound; }

  Matrix gaussian_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = cgaussian();
    return m;
  }

  Vector gaussian_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = cgaussian();
    return v;
  }

  /// Haar-distributed isometry (rows >= cols) via QR of a Gaussian matrix
  /// with the R-diagonal phase fix.
  Matrix haar_isometry(Index rows, Index cols) {
    if (rows < cols) throw DimensionError("haar_isometry: rows must be >= cols");
    Matrix g = gaussian_matrix(rows, cols);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (Index j = 0; j < cols; ++j) {
      const Complex d = r(j, j);
      const double m = std::abs(d);
      q.col(j) *= m > 0 ? d / m : Complex(1.0, 0.0);
    }
    return q;
  }

  Matrix haar_unitary(Index n) { return haar_isometry(n, n); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace chanlab
