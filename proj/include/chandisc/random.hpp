// Counter-based random streams and random quantum objects.
//
// Every draw is a pure function of (seed, stream, counter), so independent
// restarts or Monte-Carlo chunks can be generated in any order and still give
// identical numbers.
#pragma once

#include "chandisc/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace chandisc {

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform on (0, 1].
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Circular complex Gaussian with E|z|^2 = 1.
  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline Matrix ginibre(int rows, int cols, CounterRng& rng) {
  Matrix g(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) g(r, c) = rng.complex_normal();
  return g;
}

/// Haar-distributed isometry (rows >= cols): QR of a Ginibre matrix with the
/// diagonal of R fixed to positive reals.
inline Matrix haar_isometry(int rows, int cols, CounterRng& rng) {
  const Matrix g = ginibre(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix out = q;
  const Matrix& r = qr.matrixQR();
  for (int c = 0; c < cols; ++c) {
    const double mag = std::abs(r(c, c));
    if (mag > 0.0) out.col(c) *= r(c, c) / mag;
  }
  return out;
}

inline Matrix haar_unitary(int dim, CounterRng& rng) { return haar_isometry(dim, dim, rng); }

inline Vector random_unit_vector(int dim, CounterRng& rng) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

/// Random density matrix of the given rank (Ginibre / induced measure).
inline Matrix random_density(int dim, int rank, CounterRng& rng) {
  const Matrix g = ginibre(dim, rank, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

/// Hermitian matrix with i.i.d. Gaussian entries (GUE-like).
inline Matrix random_hermitian(int dim, CounterRng& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

/// Kraus list of a random channel obtained from a Haar-random Stinespring
/// isometry X -> Y (x) C^num_kraus.
inline std::vector<Matrix> random_kraus(int dim_in, int dim_out, int num_kraus, CounterRng& rng) {
  const Matrix v = haar_isometry(dim_out * num_kraus, dim_in, rng);
  std::vector<Matrix> kraus;
  kraus.reserve(num_kraus);
  for (int k = 0; k < num_kraus; ++k) {
    Matrix kk(dim_out, dim_in);
    for (int y = 0; y < dim_out; ++y) kk.row(y) = v.row(y * num_kraus + k);
    kraus.push_back(std::move(kk));
  }
  return kraus;
}

}  // namespace chandisc
