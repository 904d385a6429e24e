// Estimators and bounds for the norms of a channel difference Phi0 - Phi1:
//
//     NE <= LOCC <= SEP <= PPT <= DIAMOND <= 2
//
// Non-convex maximisations (NE, PPT, diamond) are seesaw ascents and only
// ever give lower bounds. A value is promoted to `exact` when it meets a
// registered analytic value or its own upper bound within tolerance.
#pragma once

#include "chandisc/channels.hpp"
#include "chandisc/random.hpp"
#include "chandisc/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chandisc {

enum class NormKind { NE, LOCC, SEP, PPT, DIAMOND };
enum class Direction { exact, lower, upper };

inline constexpr NormKind kAllNorms[] = {NormKind::NE, NormKind::LOCC, NormKind::SEP, NormKind::PPT,
                                         NormKind::DIAMOND};

inline const char* norm_name(NormKind k) {
  switch (k) {
    case NormKind::NE: return "NE";
    case NormKind::LOCC: return "LOCC";
    case NormKind::SEP: return "SEP";
    case NormKind::PPT: return "PPT";
    case NormKind::DIAMOND: return "DIAMOND";
  }
  return "?";
}

inline const char* direction_name(Direction d) {
  switch (d) {
    case Direction::exact: return "exact";
    case Direction::lower: return "lower";
    case Direction::upper: return "upper";
  }
  return "?";
}

struct NormEstimate {
  NormKind norm = NormKind::NE;
  double value = 0.0;
  Direction direction = Direction::lower;
  std::string method;
  int restarts = 0;
  int iterations = 0;
  double residual = 0.0;
  double seconds = 0.0;
  Vector witness_state;        // empty when not applicable
  Matrix witness_measurement;  // P0 - P1 on the output (x ancilla) space
  std::vector<double> restart_values;
  std::vector<std::vector<double>> histories;  // filled when requested
};

struct SeesawOptions {
  int restarts = 32;
  std::uint64_t seed = 1;
  int max_iter = 500;
  double stop = 1e-10;
  double degeneracy_gap = 1e-12;
  bool record_history = false;
  SdpOptions sdp;
};

/// Matching tolerances for promoting a numerical lower bound to exact.
inline double exact_match_tolerance(NormKind k) { return k == NormKind::PPT ? 1e-4 : 1e-6; }

// ---------------------------------------------------------------------------
// Analytic registry

struct AnalyticEntry {
  NormKind norm;
  Direction direction;  // exact or upper
  double value;
  std::string source;
};

namespace detail {

inline bool same_difference(const ChannelPair& a, const ChannelPair& b) {
  if (a.phi0.dim_in != b.phi0.dim_in || a.phi0.dim_out != b.phi0.dim_out) return false;
  return (choi(difference(a)).matrix - choi(difference(b)).matrix).norm() <= 1e-9;
}

}  // namespace detail

/// Closed-form values known for the pair. Family tags are trusted only after
/// rebuilding the family from its parameters and comparing Choi matrices.
inline std::vector<AnalyticEntry> analytic_registry(const ChannelPair& pair) {
  std::vector<AnalyticEntry> out;
  if (pair.phi0.dim_in * pair.phi0.dim_out <= 4096 && choi(difference(pair)).matrix.norm() <= 1e-10) {
    for (NormKind k : kAllNorms) out.push_back({k, Direction::exact, 0.0, "identical channels"});
    return out;
  }
  const int d = pair.params.d;
  try {
    switch (pair.family) {
      case Family::werner_holevo:
        if (d >= 2 && detail::same_difference(pair, werner_holevo(d))) {
          const double v = 4.0 / (d + 1);
          out.push_back({NormKind::NE, Direction::exact, v, "werner-holevo"});
          out.push_back({NormKind::PPT, Direction::upper, v, "werner-holevo"});
          out.push_back({NormKind::DIAMOND, Direction::exact, 2.0, "werner-holevo"});
        }
        break;
      case Family::qubit_example: {
        const int n = pair.params.N;
        if ((n == 2 || n == 3) && detail::same_difference(pair, qubit_example(n))) {
          out.push_back({NormKind::NE, Direction::exact, n == 2 ? std::sqrt(2.0) : 2.0 / std::sqrt(3.0),
                         "qubit example"});
        }
        break;
      }
      case Family::weyl_flagged:
        if (d >= 2 && detail::same_difference(pair, weyl_flagged(d))) {
          out.push_back({NormKind::NE, Direction::upper, 2.0 * std::sqrt(d / (d + 1.0)), "concavity bound"});
        }
        break;
      default:
        break;
    }
  } catch (const Error&) {
    out.clear();
  }
  return out;
}

inline std::optional<AnalyticEntry> registry_entry(const std::vector<AnalyticEntry>& reg, NormKind k) {
  for (const AnalyticEntry& e : reg)
    if (e.norm == k) return e;
  return std::nullopt;
}

namespace detail {

inline void promote(NormEstimate& est, const std::vector<AnalyticEntry>& reg, double own_upper) {
  const double tol = exact_match_tolerance(est.norm);
  if (const auto e = registry_entry(reg, est.norm)) {
    const bool match = e->direction == Direction::exact ? std::abs(est.value - e->value) <= tol
                                                        : est.value >= e->value - tol;
    if (match) {
      est.direction = Direction::exact;
      est.residual = std::abs(est.value - e->value);
      return;
    }
  }
  if (est.value >= own_upper - tol) {
    est.direction = Direction::exact;
    est.residual = std::abs(own_upper - est.value);
  }
}

// ---------------------------------------------------------------------------
// Seesaw core

/// Top eigenvector; on a near-degenerate top eigenspace the previous iterate
/// is projected into it instead of taking an arbitrary basis vector.
inline Vector top_eigenvector(const Matrix& g, const Vector& previous, double gap) {
  const EigenDecomposition e = hermitian_eig(g);
  const Eigen::Index n = e.values.size();
  Eigen::Index k = 1;
  while (k < n && e.values(0) - e.values(k) < gap) ++k;
  if (k == 1 || previous.size() != n) return e.vectors.col(0);
  const Matrix basis = e.vectors.leftCols(k);
  const Vector proj = basis * (basis.adjoint() * previous);
  const double nrm = proj.norm();
  if (nrm < 1e-8) return e.vectors.col(0);
  return proj / nrm;
}

/// Optimal unrestricted measurement for a traceless Hermitian output:
/// value = ||M||_1, D = P0 - P1 with P0 the projector onto M > 0.
inline std::pair<double, Matrix> helstrom(const Matrix& m) {
  const EigenDecomposition e = hermitian_eig(m);
  RealVector signs(e.values.size());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) signs(i) = e.values(i) > 0.0 ? 1.0 : -1.0;
  return {e.values.cwiseAbs().sum(), e.vectors * signs.cast<Complex>().asDiagonal() * e.vectors.adjoint()};
}

struct SeesawRun {
  double value = -std::numeric_limits<double>::infinity();
  Vector state;
  Matrix measurement;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;
};

template <class Measure>
SeesawRun seesaw(const HermitianMap& phi, int dim_z, Vector psi, const SeesawOptions& o, double stop,
                 Measure&& measure) {
  SeesawRun run;
  double prev = 0.0;
  for (int it = 1; it <= o.max_iter; ++it) {
    const Matrix out = apply_extended_pure(phi, psi, dim_z);
    auto [value, d] = measure(out);
    run.history.push_back(value);
    run.iterations = it;
    if (value > run.value) {
      run.value = value;
      run.state = psi;
      run.measurement = d;
    }
    if (it > 1) {
      run.residual = std::abs(value - prev);
      if (run.residual < stop) break;
    }
    prev = value;
    psi = top_eigenvector(adjoint_apply_extended(phi, d, dim_z), psi, o.degeneracy_gap);
  }
  return run;
}

inline void merge_run(NormEstimate& est, SeesawRun&& run, bool keep_history) {
  est.restart_values.push_back(run.value);
  est.iterations += run.iterations;
  if (keep_history) est.histories.push_back(run.history);
  if (est.restarts == 0 || run.value > est.value) {
    est.value = run.value;
    est.residual = run.residual;
    est.witness_state = std::move(run.state);
    est.witness_measurement = std::move(run.measurement);
  }
  ++est.restarts;
}

inline void check_restarts(const SeesawOptions& o) {
  if (o.restarts < 1) throw Error("bad_param", "restarts must be >= 1");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Specialised NE objectives

/// Sum over flags of ||A0_j rho A0_j^dag - A1_j rho A1_j^dag||_1 at rho = psi psi^dag.
inline double ne_norm_flagged_objective(const ChannelPair& pair, const Vector& psi) {
  if (pair.family != Family::flagged && pair.family != Family::weyl_flagged) {
    throw Error("bad_family", "flagged objective needs a flagged pair");
  }
  const auto& k0 = pair.params.flag_kraus0;
  const auto& k1 = pair.params.flag_kraus1;
  if (k0.size() != k1.size() || k0.empty() || k0.front().cols() != psi.size()) {
    throw Error("bad_shape", "flag Kraus operators do not match the input");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < k0.size(); ++j) {
    const Vector a = k0[j] * psi;
    const Vector b = k1[j] * psi;
    const double s = a.squaredNorm() + b.squaredNorm();
    const double c = std::norm(a.dot(b));
    total += std::sqrt(std::max(0.0, s * s - 4.0 * c));
  }
  return total;
}

/// A_k = U_k^dag diag(+1 x d/2, -1 x d/2) U_k, so that <psi|A_k|psi> is the
/// bias of the k-th flagged binary measurement.
inline std::vector<Matrix> random_binary_observables(int d, const std::vector<Matrix>& unitaries) {
  if (d < 2 || d % 2 != 0) throw Error("bad_param", "random binary channels need even d >= 2");
  Matrix z = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) z(i, i) = i < d / 2 ? 1.0 : -1.0;
  std::vector<Matrix> out;
  out.reserve(unitaries.size());
  for (const Matrix& u : unitaries) {
    check_square(u, d, "unitary");
    out.push_back(u.adjoint() * z * u);
  }
  return out;
}

/// (2/N) sum_k | sum_{j <= d/2} |<j|U_k|psi>|^2 - sum_{j > d/2} |<j|U_k|psi>|^2 |.
inline double ne_norm_random_binary_objective(const ChannelPair& pair, const Vector& psi) {
  if (pair.family != Family::random_binary && pair.family != Family::qubit_example) {
    throw Error("bad_family", "random binary objective needs a random binary pair");
  }
  const int d = pair.params.d;
  if (psi.size() != d) throw Error("bad_shape", "state dimension");
  double total = 0.0;
  for (const Matrix& u : pair.params.unitaries) {
    const Vector v = u * psi;
    total += std::abs(v.head(d / 2).squaredNorm() - v.tail(d / 2).squaredNorm());
  }
  return 2.0 * total / static_cast<double>(pair.params.unitaries.size());
}

/// Multistart ascent on the random-binary NE objective using only the
/// unitaries; never materialises the 2N-dimensional output.
inline NormEstimate ne_norm_random_binary(int d, const std::vector<Matrix>& unitaries, const SeesawOptions& o = {}) {
  detail::check_restarts(o);
  if (unitaries.empty()) throw Error("bad_param", "need at least one unitary");
  const std::vector<Matrix> obs = random_binary_observables(d, unitaries);
  const double scale = 2.0 / static_cast<double>(obs.size());
  NormEstimate est;
  est.norm = NormKind::NE;
  est.method = "seesaw-structured";
  for (int r = 0; r < o.restarts; ++r) {
    CounterRng rng(o.seed, static_cast<std::uint64_t>(r));
    Vector psi = random_unit_vector(d, rng);
    detail::SeesawRun run;
    double prev = 0.0;
    for (int it = 1; it <= o.max_iter; ++it) {
      Matrix g = Matrix::Zero(d, d);
      double value = 0.0;
      for (const Matrix& a : obs) {
        const double m = psi.dot(a * psi).real();
        value += std::abs(m);
        if (m >= 0.0) g += a; else g -= a;
      }
      value *= scale;
      run.history.push_back(value);
      run.iterations = it;
      if (value > run.value) {
        run.value = value;
        run.state = psi;
      }
      if (it > 1) {
        run.residual = std::abs(value - prev);
        if (run.residual < o.stop) break;
      }
      prev = value;
      psi = detail::top_eigenvector(g, psi, o.degeneracy_gap);
    }
    detail::merge_run(est, std::move(run), o.record_history);
  }
  return est;
}

// ---------------------------------------------------------------------------
// Norm estimators

namespace detail {

/// True when the family tag and parameters reproduce the pair's own
/// objective at a few random states.
inline bool structured_random_binary(const ChannelPair& pair) {
  if (pair.family != Family::random_binary && pair.family != Family::qubit_example) return false;
  const int d = pair.params.d;
  const auto n = static_cast<int>(pair.params.unitaries.size());
  if (d != pair.phi0.dim_in || n == 0 || pair.phi0.dim_out != 2 * n) return false;
  try {
    const HermitianMap phi = difference(pair);
    CounterRng rng(0xb1);
    for (int t = 0; t < 3; ++t) {
      const Vector psi = random_unit_vector(d, rng);
      if (std::abs(ne_norm_random_binary_objective(pair, psi) - trace_norm(apply_channel(phi, projector(psi)))) > 1e-9)
        return false;
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

}  // namespace detail

inline NormEstimate ne_norm(const ChannelPair& pair, const SeesawOptions& o = {}) {
  detail::check_restarts(o);
  NormEstimate est;
  if (detail::structured_random_binary(pair)) {
    est = ne_norm_random_binary(pair.params.d, pair.params.unitaries, o);
  } else {
    const HermitianMap phi = difference(pair);
    est.norm = NormKind::NE;
    est.method = "seesaw";
    for (int r = 0; r < o.restarts; ++r) {
      CounterRng rng(o.seed, static_cast<std::uint64_t>(r));
      detail::merge_run(est, detail::seesaw(phi, 1, random_unit_vector(phi.dim_in, rng), o, o.stop, detail::helstrom),
                        o.record_history);
    }
  }
  detail::promote(est, analytic_registry(pair), 2.0);
  return est;
}

inline NormEstimate diamond_norm(const ChannelPair& pair, const SeesawOptions& o = {}) {
  detail::check_restarts(o);
  const HermitianMap phi = difference(pair);
  const int dz = phi.dim_in;
  NormEstimate est;
  est.norm = NormKind::DIAMOND;
  est.method = "seesaw";
  for (int r = 0; r < o.restarts; ++r) {
    CounterRng rng(o.seed, static_cast<std::uint64_t>(r));
    const Vector start = r == 0 ? max_entangled(dz) : random_unit_vector(dz * dz, rng);
    detail::merge_run(est, detail::seesaw(phi, dz, start, o, o.stop, detail::helstrom), o.record_history);
  }
  detail::promote(est, analytic_registry(pair), 2.0);
  return est;
}

/// Seesaw whose measurement step is the PPT-restricted SDP.
inline NormEstimate ppt_norm(const ChannelPair& pair, const SeesawOptions& o = {}) {
  detail::check_restarts(o);
  const HermitianMap phi = difference(pair);
  const int dz = phi.dim_in;
  const BipartiteShape shape{phi.dim_out, dz};
  const double stop = std::max(o.stop, o.sdp.tol);
  SdpWarmStart warm;
  auto measure = [&](const Matrix& out) {
    const PptMeasurement m = ppt_measurement_value(out, shape, o.sdp, &warm);
    return std::pair<double, Matrix>{m.value, 2.0 * m.p0 - identity(shape.total())};
  };
  NormEstimate est;
  est.norm = NormKind::PPT;
  est.method = "seesaw-sdp";
  for (int r = 0; r < o.restarts; ++r) {
    CounterRng rng(o.seed, static_cast<std::uint64_t>(r));
    const Vector start = r == 0 ? max_entangled(dz) : random_unit_vector(dz * dz, rng);
    warm = {};
    detail::merge_run(est, detail::seesaw(phi, dz, start, o, stop, measure), o.record_history);
  }
  detail::promote(est, analytic_registry(pair), 2.0);
  return est;
}

/// SEP <= (dim Y / 2) NE; equality holds for qubit outputs.
inline NormEstimate sep_upper_bound_thm1(const ChannelPair& pair, const NormEstimate& ne) {
  if (ne.direction == Direction::lower) throw Error("need_upper", "product-measurement bound needs an exact or upper NE value");
  NormEstimate est;
  est.norm = NormKind::SEP;
  const int dy = pair.phi0.dim_out;
  est.value = 0.5 * dy * ne.value;
  est.direction = (dy == 2 && ne.direction == Direction::exact) ? Direction::exact : Direction::upper;
  est.method = "product-measurement bound";
  est.residual = ne.residual * 0.5 * dy;
  return est;
}

// ---------------------------------------------------------------------------
// Product measurements

struct ProductTerm {
  Matrix q;  // on Y
  Matrix r;  // on Z
};

struct ProductMeasurement {
  std::vector<ProductTerm> terms;
};

/// Normalises each Q_j to unit trace (absorbing the trace into R_j) and
/// checks sum_j Q_j (x) R_j = 1 and sum_j R_j = dim(Y) 1.
inline ProductMeasurement normalized_product_measurement(const ProductMeasurement& m, int dim_y, int dim_z) {
  if (m.terms.empty()) throw Error("bad_measurement", "no terms");
  ProductMeasurement out;
  Matrix total = Matrix::Zero(dim_y * dim_z, dim_y * dim_z);
  Matrix r_sum = Matrix::Zero(dim_z, dim_z);
  for (const ProductTerm& t : m.terms) {
    if (t.q.rows() != dim_y || t.q.cols() != dim_y || t.r.rows() != dim_z || t.r.cols() != dim_z)
      throw Error("bad_measurement", "term shape");
    if (!is_hermitian(t.q) || !is_hermitian(t.r) || min_eigenvalue(t.q) < -1e-9 || min_eigenvalue(t.r) < -1e-9)
      throw Error("bad_measurement", "terms must be PSD");
    const double tr = t.q.trace().real();
    if (tr <= 0.0) {
      if (t.r.norm() * t.q.norm() > 1e-12) throw Error("bad_measurement", "zero-trace Q with nonzero term");
      continue;
    }
    ProductTerm n{t.q / tr, t.r * tr};
    total += kron(n.q, n.r);
    r_sum += n.r;
    out.terms.push_back(std::move(n));
  }
  if ((total - identity(dim_y * dim_z)).cwiseAbs().maxCoeff() > 1e-8)
    throw Error("bad_measurement", "terms do not sum to the identity");
  if ((r_sum - static_cast<double>(dim_y) * identity(dim_z)).cwiseAbs().maxCoeff() > 1e-8)
    throw Error("bad_measurement", "R terms do not sum to dim(Y) 1");
  return out;
}

namespace detail {

inline std::vector<Matrix> random_povm(int dim, int outcomes, CounterRng& rng) {
  const Matrix v = haar_isometry(dim * outcomes, dim, rng);
  std::vector<Matrix> out;
  for (int k = 0; k < outcomes; ++k) {
    const Matrix block = v.middleRows(static_cast<Eigen::Index>(k) * dim, dim);
    out.push_back(block.adjoint() * block);
  }
  return out;
}

}  // namespace detail

/// Random product measurement: a POVM on Y, and for each of its outcomes an
/// independent POVM on Z. With `rank_one`, both sides are random bases.
inline ProductMeasurement random_product_measurement(int dim_y, int dim_z, CounterRng& rng, bool rank_one = false) {
  ProductMeasurement m;
  if (rank_one) {
    const Matrix uy = haar_unitary(dim_y, rng);
    for (int i = 0; i < dim_y; ++i) {
      const Matrix uz = haar_unitary(dim_z, rng);
      for (int k = 0; k < dim_z; ++k) m.terms.push_back({projector(uy.col(i)), projector(uz.col(k))});
    }
    return m;
  }
  const auto ey = detail::random_povm(dim_y, dim_y + static_cast<int>(rng.next_u64() % (dim_y + 1)), rng);
  for (const Matrix& e : ey) {
    const double tr = e.trace().real();
    const auto fz = detail::random_povm(dim_z, dim_z + static_cast<int>(rng.next_u64() % (dim_z + 1)), rng);
    for (const Matrix& f : fz) m.terms.push_back({e / tr, tr * f});
  }
  return m;
}

struct Thm1Check {
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<Matrix> x;                 // X_j = Tr_Z[(1 (x) R_j) rho]
  std::vector<double> term_values;       // |<Q_j, Phi(X_j)>|
  std::vector<double> term_bounds;       // NE Tr(X_j) / 2
  bool holds = true;                     // lhs <= rhs + 1e-7 and every term bound holds
};

/// sum_j |<Q_j (x) R_j, (Phi (x) 1)(rho)>| against (dim Y / 2) * ne_value.
inline Thm1Check thm1_product_bound_check(const ChannelPair& pair, const Matrix& rho, const ProductMeasurement& m,
                                          double ne_value) {
  const HermitianMap phi = difference(pair);
  const int dz = static_cast<int>(rho.rows()) / phi.dim_in;
  if (dz < 1 || dz * phi.dim_in != rho.rows()) throw Error("bad_shape", "rho does not live on X (x) Z");
  const ProductMeasurement nm = normalized_product_measurement(m, phi.dim_out, dz);
  const BipartiteShape in_shape{phi.dim_in, dz};
  const Matrix out = apply_extended(phi, rho, in_shape);
  Thm1Check c;
  c.rhs = 0.5 * phi.dim_out * ne_value;
  for (const ProductTerm& t : nm.terms) {
    c.lhs += std::abs(inner(kron(t.q, t.r), out).real());
    const Matrix xj = partial_trace(kron(identity(phi.dim_in), t.r) * rho, in_shape, Side::B);
    const double v = std::abs(inner(t.q, apply_channel(phi, xj)).real());
    const double b = 0.5 * ne_value * xj.trace().real();
    c.holds = c.holds && v <= b + 1e-7;
    c.x.push_back(xj);
    c.term_values.push_back(v);
    c.term_bounds.push_back(b);
  }
  c.holds = c.holds && c.lhs <= c.rhs + 1e-7;
  return c;
}

inline Thm1Check thm1_product_bound_check(const ChannelPair& pair, const Matrix& rho, const ProductMeasurement& m,
                                          const NormEstimate& ne) {
  if (ne.direction == Direction::lower) throw Error("need_upper", "product-measurement bound needs an exact or upper NE value");
  return thm1_product_bound_check(pair, rho, m, ne.value);
}

// ---------------------------------------------------------------------------
// Separable inputs

/// sum_i p_i sigma_i (x) tau_i with 1..4 terms of random rank.
inline Matrix random_separable_state(int dim_x, int dim_z, CounterRng& rng) {
  const int terms = 1 + static_cast<int>(rng.next_u64() % 4);
  std::vector<double> w(static_cast<std::size_t>(terms));
  double total = 0.0;
  for (double& x : w) total += (x = rng.uniform());
  Matrix rho = Matrix::Zero(dim_x * dim_z, dim_x * dim_z);
  for (double x : w) {
    const int rx = 1 + static_cast<int>(rng.next_u64() % dim_x);
    const int rz = 1 + static_cast<int>(rng.next_u64() % dim_z);
    rho += (x / total) * kron(random_density(dim_x, rx, rng), random_density(dim_z, rz, rng));
  }
  return rho;
}

/// max over random separable inputs of ||(Phi (x) 1)(rho)||_1 - ne_value.
inline double separable_input_invariance(const ChannelPair& pair, int trials, double ne_value, std::uint64_t seed = 1) {
  if (trials < 1) throw Error("bad_param", "trials must be >= 1");
  const HermitianMap phi = difference(pair);
  const BipartiteShape shape{phi.dim_in, phi.dim_in};
  CounterRng rng(seed, 0x5e9);
  double gap = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const Matrix rho = random_separable_state(shape.dim_a, shape.dim_b, rng);
    gap = std::max(gap, trace_norm(apply_extended(phi, rho, shape)) - ne_value);
  }
  return gap;
}

/// Same, against the registered exact NE value.
inline double separable_input_invariance(const ChannelPair& pair, int trials, std::uint64_t seed = 1) {
  const auto reg = analytic_registry(pair);
  const auto e = registry_entry(reg, NormKind::NE);
  if (!e || e->direction != Direction::exact) throw Error("need_upper", "no exact NE value registered for this pair");
  return separable_input_invariance(pair, trials, e->value, seed);
}

}  // namespace chandisc
