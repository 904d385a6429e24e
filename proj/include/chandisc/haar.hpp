// Haar-random unitaries and the large-N integral behind random binary
// channels:
//
//     I(d) = E_U | sum_{j <= d/2} |<j|U|psi>|^2 - sum_{j > d/2} |<j|U|psi>|^2 |
//
// together with the finite sum (1/d) sum_{j=1}^{d/2} 4^{-j} C(2j, j).
#pragma once

#include "chandisc/norms.hpp"
#include "chandisc/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <thread>
#include <vector>

namespace chandisc {

/// Sample i of the stream is drawn from CounterRng(seed, i), so any sample
/// can be regenerated independently of the others.
struct HaarSampler {
  std::uint64_t seed = 0;
  int dim = 1;
  std::uint64_t index = 0;

  Matrix at(std::uint64_t i) const {
    if (dim < 1) throw Error("bad_param", "dimension must be >= 1");
    CounterRng rng(seed, i);
    return haar_unitary(dim, rng);
  }
  Matrix next() { return at(index++); }
};

inline Matrix sample_unitary(HaarSampler& s) { return s.next(); }

struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  void merge(const RunningStats& o) {
    if (o.n == 0) return;
    const double total = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double stderr_of_mean() const { return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
};

inline double haar_integrand(const Matrix& u, const Vector& psi) {
  const Vector v = u * psi;
  const Eigen::Index h = v.size() / 2;
  return std::abs(v.head(h).squaredNorm() - v.tail(h).squaredNorm());
}

/// Monte-Carlo mean of the integrand. Samples are processed in fixed chunks
/// whose statistics are merged in chunk order, so the result does not depend
/// on the number of threads.
inline McEstimate mc_ne_integral(int d, std::uint64_t samples, const Vector& psi, std::uint64_t seed,
                                 unsigned threads = 0) {
  if (d < 2 || d % 2 != 0) throw Error("bad_param", "d must be even and >= 2");
  if (samples < 1000) throw Error("bad_param", "need at least 1000 samples");
  if (psi.size() != d || std::abs(psi.norm() - 1.0) > 1e-9) throw Error("bad_state", "psi must be a unit vector");
  constexpr std::uint64_t chunk = 4096;
  const std::uint64_t chunks = (samples + chunk - 1) / chunk;
  std::vector<RunningStats> parts(chunks);
  const HaarSampler sampler{seed, d};
  auto work = [&](std::uint64_t c) {
    const std::uint64_t end = std::min(samples, (c + 1) * chunk);
    for (std::uint64_t i = c * chunk; i < end; ++i) parts[c].add(haar_integrand(sampler.at(i), psi));
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  if (threads <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) work(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::uint64_t c = t; c < chunks; c += threads) work(c);
      });
    for (std::thread& th : pool) th.join();
  }
  RunningStats total;
  for (const RunningStats& p : parts) total.merge(p);
  return {total.mean, total.stderr_of_mean(), total.n};
}

/// (1/d) sum_{j=1}^{d/2} 2^{-2j} C(2j, j).
inline double closed_form_sum(int d) {
  if (d < 2 || d % 2 != 0) throw Error("bad_param", "d must be even and >= 2");
  double term = 1.0;
  double sum = 0.0;
  for (int j = 1; j <= d / 2; ++j) {
    term *= (2.0 * j - 1.0) / (2.0 * j);
    sum += term;
  }
  return sum / d;
}

inline double haar_asymptote(int d) { return std::sqrt(2.0 / (std::numbers::pi * d)); }

/// NE estimate for random binary channels built from N Haar unitaries.
inline NormEstimate ne_norm_haar_convergence(int d, int big_n, int restarts, std::uint64_t seed) {
  if (big_n < 1) throw Error("bad_param", "N must be >= 1");
  HaarSampler sampler{seed, d};
  std::vector<Matrix> us;
  us.reserve(static_cast<std::size_t>(big_n));
  for (int k = 0; k < big_n; ++k) us.push_back(sampler.next());
  SeesawOptions o;
  o.restarts = restarts;
  o.seed = seed;
  return ne_norm_random_binary(d, us, o);
}

}  // namespace chandisc
