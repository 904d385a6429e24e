// Test-only reference computations. These deliberately avoid the library's
// optimisation paths so they can check them independently.
#pragma once

#include "chandisc/channels.hpp"
#include "chandisc/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace chandisc::oracle {

/// max_P Tr[P M] over projectors spanned by subsets of M's eigenvectors,
/// by exhaustive enumeration of the 2^n subsets.
inline double best_projector_value(const Matrix& m) {
  const EigenDecomposition e = hermitian_eig(m);
  const int n = static_cast<int>(e.values.size());
  double best = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Matrix p = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) p += projector(e.vectors.col(i));
    best = std::max(best, (p * m).trace().real());
  }
  return best;
}

inline Vector bloch_state(double theta, double phi) {
  Vector v(2);
  v << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  return v;
}

inline double ne_objective(const HermitianMap& phi, const Vector& psi) {
  return trace_norm(apply_channel(phi, projector(psi)));
}

/// Brute-force NE norm for qubit inputs: Fibonacci grid on the Bloch sphere,
/// then a shrinking pattern search around the best grid points.
inline double bloch_grid_ne(const HermitianMap& phi, int points = 10000) {
  struct Candidate {
    double value, theta, phi;
  };
  std::vector<Candidate> cands;
  cands.reserve(points);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < points; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / points;
    const double theta = std::acos(z);
    const double ph = golden * i;
    cands.push_back({ne_objective(phi, bloch_state(theta, ph)), theta, ph});
  }
  std::partial_sort(cands.begin(), cands.begin() + 8, cands.end(),
                    [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  double best = cands.front().value;
  for (int c = 0; c < 8; ++c) {
    Candidate cur = cands[c];
    double step = 0.05;
    while (step > 1e-9) {
      bool improved = false;
      for (const auto& [dt, dp] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
        const double v = ne_objective(phi, bloch_state(cur.theta + dt, cur.phi + dp));
        if (v > cur.value) {
          cur = {v, cur.theta + dt, cur.phi + dp};
          improved = true;
        }
      }
      if (!improved) step *= 0.5;
    }
    best = std::max(best, cur.value);
  }
  return best;
}

/// PSD operator with PSD partial transpose: H + H^Gamma is invariant under
/// Gamma, so shifting it by its smallest eigenvalue makes both sides PSD.
inline Matrix random_ppt_operator(const BipartiteShape& shape, CounterRng& rng) {
  const Matrix h = random_hermitian(shape.total(), rng);
  const Matrix sym = h + partial_transpose(h, shape, Side::B);
  return sym - min_eigenvalue(sym) * identity(shape.total());
}

}  // namespace chandisc::oracle
