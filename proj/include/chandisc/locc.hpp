// Finite-transcript LOCC protocols on a bipartite system A (x) B.
//
// Party A holds the channel output Y, party B holds the ancilla Z. Each
// round one party applies an instrument chosen by the transcript so far;
// every outcome is a set of Kraus operators that may change that party's
// local dimension. After the last round a decision function maps the full
// transcript to a guess.
#pragma once

#include "chandisc/channels.hpp"
#include "chandisc/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chandisc {

enum class Party { A, B };

using Transcript = std::vector<int>;
using KrausSet = std::vector<Matrix>;

struct Instrument {
  std::vector<KrausSet> outcomes;
};

struct Round {
  Party party = Party::A;
  std::map<Transcript, Instrument> instruments;  // keyed by the transcript before this round
};

struct ProtocolTree {
  BipartiteShape shape;
  std::vector<Round> rounds;
  std::function<int(const Transcript&)> decision;
};

struct DiscriminationInstance {
  Matrix sigma0;
  Matrix sigma1;
  BipartiteShape shape;
};

/// A protocol together with the pure input it expects on X (x) Z.
struct ProtocolSetup {
  ProtocolTree protocol;
  Vector input;
  int dim_z = 1;
};

inline constexpr std::size_t kMaxRounds = 3;

namespace detail {

inline void check_density(const Matrix& rho, const char* what) {
  if (!is_hermitian(rho, 1e-9)) throw Error("bad_state", std::string(what) + " is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9) throw Error("bad_state", std::string(what) + " trace is not 1");
  if (min_eigenvalue(rho) < -1e-9) throw Error("bad_state", std::string(what) + " is not PSD");
}

inline const Instrument& instrument_at(const Round& r, const Transcript& t) {
  const auto it = r.instruments.find(t);
  if (it == r.instruments.end()) throw Error("bad_protocol", "no instrument for a reachable transcript");
  return it->second;
}

inline int instrument_input_dim(const Instrument& ins) {
  for (const KrausSet& s : ins.outcomes)
    if (!s.empty()) return static_cast<int>(s.front().cols());
  throw Error("not_instrument", "instrument has no Kraus operators");
}

inline void check_instrument(const Instrument& ins, int dim) {
  if (instrument_input_dim(ins) != dim) throw Error("bad_shape", "instrument does not act on the current system");
  Matrix total = Matrix::Zero(dim, dim);
  for (const KrausSet& s : ins.outcomes)
    for (const Matrix& k : s) {
      if (k.cols() != dim) throw Error("bad_shape", "Kraus operator input dimension");
      total += k.adjoint() * k;
    }
  if ((total - identity(dim)).cwiseAbs().maxCoeff() > 1e-9) throw Error("not_instrument", "completeness fails");
  for (const KrausSet& s : ins.outcomes)
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s[i].rows() != s.front().rows()) throw Error("bad_shape", "Kraus set with mixed output dimensions");
}

inline int outcome_output_dim(const KrausSet& s, int dim) {
  return s.empty() ? dim : static_cast<int>(s.front().rows());
}

inline Matrix apply_local(const KrausSet& s, const Matrix& rho, Party party, const BipartiteShape& shape,
                          const BipartiteShape& next) {
  Matrix out = Matrix::Zero(next.total(), next.total());
  for (const Matrix& k : s) {
    const Matrix big = party == Party::A ? kron(k, identity(shape.dim_b)) : kron(identity(shape.dim_a), k);
    out.noalias() += big * rho * big.adjoint();
  }
  return out;
}

}  // namespace detail

struct ProtocolReport {
  double success = 0.0;
  int transcripts = 0;  // leaves reached with non-negligible weight
};

/// Exact branch enumeration; both hypotheses are pushed through the tree
/// and branches with total weight below 1e-14 are pruned.
inline ProtocolReport run_protocol(const ProtocolTree& p, const DiscriminationInstance& inst) {
  if (p.rounds.size() > kMaxRounds) throw Error("bad_protocol", "at most three rounds are supported");
  if (!p.decision) throw Error("bad_protocol", "missing decision");
  check_shape(inst.shape);
  if (inst.shape.dim_a != p.shape.dim_a || inst.shape.dim_b != p.shape.dim_b)
    throw Error("bad_shape", "instance does not match protocol systems");
  detail::check_density(inst.sigma0, "sigma0");
  detail::check_density(inst.sigma1, "sigma1");

  ProtocolReport report;
  struct Branch {
    Transcript t;
    BipartiteShape shape;
    Matrix s0, s1;
  };
  std::function<void(Branch&&, std::size_t)> walk = [&](Branch&& b, std::size_t r) {
    if (r == p.rounds.size()) {
      const int guess = p.decision(b.t);
      if (guess != 0 && guess != 1) throw Error("bad_protocol", "decision must be 0 or 1");
      report.success += 0.5 * (guess == 0 ? b.s0 : b.s1).trace().real();
      ++report.transcripts;
      return;
    }
    const Round& round = p.rounds[r];
    const Instrument& ins = detail::instrument_at(round, b.t);
    const int local = round.party == Party::A ? b.shape.dim_a : b.shape.dim_b;
    detail::check_instrument(ins, local);
    for (std::size_t o = 0; o < ins.outcomes.size(); ++o) {
      const KrausSet& s = ins.outcomes[o];
      const int out_dim = detail::outcome_output_dim(s, local);
      const BipartiteShape next = round.party == Party::A ? BipartiteShape{out_dim, b.shape.dim_b}
                                                          : BipartiteShape{b.shape.dim_a, out_dim};
      Branch c{b.t, next, detail::apply_local(s, b.s0, round.party, b.shape, next),
               detail::apply_local(s, b.s1, round.party, b.shape, next)};
      if (c.s0.trace().real() + c.s1.trace().real() < kTol.prune) continue;
      c.t.push_back(static_cast<int>(o));
      walk(std::move(c), r + 1);
    }
  };
  walk(Branch{{}, inst.shape, inst.sigma0, inst.sigma1}, 0);
  return report;
}

inline double evaluate(const ProtocolTree& p, const DiscriminationInstance& inst) {
  return run_protocol(p, inst).success;
}

struct InducedTerm {
  Transcript transcript;
  Matrix effect_a;  // PSD on the initial A system
  Matrix effect_b;  // PSD on the initial B system
  int guess = 0;
};

struct InducedMeasurement {
  Matrix p0;
  Matrix p1;
  std::vector<InducedTerm> terms;  // P_g = sum over terms with guess g of effect_a (x) effect_b
};

/// Heisenberg picture of the protocol. Kraus chains of the two parties are
/// tracked separately, so every term is a product operator by construction.
inline InducedMeasurement induced_measurement(const ProtocolTree& p) {
  if (p.rounds.size() > kMaxRounds) throw Error("bad_protocol", "at most three rounds are supported");
  check_shape(p.shape);
  InducedMeasurement m;
  const int n = p.shape.total();
  m.p0 = Matrix::Zero(n, n);
  m.p1 = Matrix::Zero(n, n);
  struct Node {
    Transcript t;
    std::vector<Matrix> chain_a, chain_b;
  };
  auto effect = [](const std::vector<Matrix>& chains) {
    Matrix e = Matrix::Zero(chains.front().cols(), chains.front().cols());
    for (const Matrix& c : chains) e += c.adjoint() * c;
    return e;
  };
  std::function<void(Node&&, std::size_t)> walk = [&](Node&& node, std::size_t r) {
    if (r == p.rounds.size()) {
      InducedTerm term{node.t, effect(node.chain_a), effect(node.chain_b), p.decision(node.t)};
      (term.guess == 0 ? m.p0 : m.p1) += kron(term.effect_a, term.effect_b);
      m.terms.push_back(std::move(term));
      return;
    }
    const Round& round = p.rounds[r];
    const Instrument& ins = detail::instrument_at(round, node.t);
    std::vector<Matrix>& own = round.party == Party::A ? node.chain_a : node.chain_b;
    detail::check_instrument(ins, static_cast<int>(own.front().rows()));
    for (std::size_t o = 0; o < ins.outcomes.size(); ++o) {
      if (ins.outcomes[o].empty()) continue;
      Node child{node.t, node.chain_a, node.chain_b};
      std::vector<Matrix>& target = round.party == Party::A ? child.chain_a : child.chain_b;
      std::vector<Matrix> next;
      for (const Matrix& k : ins.outcomes[o])
        for (const Matrix& c : own) next.push_back(k * c);
      target = std::move(next);
      child.t.push_back(static_cast<int>(o));
      walk(std::move(child), r + 1);
    }
  };
  walk(Node{{}, {identity(p.shape.dim_a)}, {identity(p.shape.dim_b)}}, 0);
  return m;
}

/// sigma_h = (Phi_h (x) 1)(rho) on Y (x) Z.
inline DiscriminationInstance make_instance(const ChannelPair& pair, const Matrix& rho) {
  const int dx = pair.phi0.dim_in;
  const int dz = static_cast<int>(rho.rows()) / dx;
  if (dz < 1 || dz * dx != rho.rows()) throw Error("bad_shape", "rho does not live on X (x) Z");
  const BipartiteShape in{dx, dz};
  return {apply_extended(pair.phi0, rho, in), apply_extended(pair.phi1, rho, in), {pair.phi0.dim_out, dz}};
}

inline NormEstimate locc_lower_bound(const ProtocolTree& p, const ChannelPair& pair, const Matrix& rho) {
  const ProtocolReport r = run_protocol(p, make_instance(pair, rho));
  NormEstimate est;
  est.norm = NormKind::LOCC;
  est.value = 4.0 * r.success - 2.0;
  est.direction = Direction::lower;
  est.method = "protocol";
  est.iterations = r.transcripts;
  return est;
}

// ---------------------------------------------------------------------------
// Zero-diagonal bases

namespace detail {

/// Unit x in span{u, v} (orthonormal, u^dag T u = 0 after shifting) with
/// x^dag T x = target, where target lies on the segment [a, b].
inline Vector mix_to_target(const Matrix& t, const Vector& u, const Vector& v, Complex a, Complex b, Complex target) {
  const Complex span = b - a;
  if (std::abs(span) < 1e-300) return u;
  const double lambda = std::clamp(((target - a) / span).real(), 0.0, 1.0);
  // T' = (T - a) / (b - a): u -> 0, v -> 1 on the diagonal.
  const Complex tuv = u.dot(t * v) / span;
  const Complex tvu = v.dot(t * u) / span;
  // Split T' = H' + i K'. Rotate v so that Re(u^dag K' v) = 0.
  const Complex kuv = (tuv - std::conj(tvu)) / Complex(0.0, 2.0);
  Complex phase = 1.0;
  if (std::abs(kuv) > 0.0) phase = Complex(0.0, 1.0) * std::conj(kuv) / std::abs(kuv);
  const Vector w = phase * v;
  const double h = (0.5 * phase * (tuv + std::conj(tvu))).real();
  if (lambda >= 1.0) return w;
  // (1 - lambda) tau^2 + 2 h tau - lambda = 0, nonnegative root.
  const double qa = 1.0 - lambda;
  const double disc = std::sqrt(std::max(0.0, h * h + qa * lambda));
  const double tau = h >= 0.0 ? lambda / (h + disc) : (disc - h) / qa;
  const Vector x = u + tau * w;
  return x / x.norm();
}

/// Unit x with x^dag T x = 0 for traceless T, built from the diagonal.
inline Vector zero_rayleigh_vector(const Matrix& t) {
  const Eigen::Index n = t.rows();
  const Vector diag = t.diagonal();
  auto basis = [n](Eigen::Index i) { return Vector(Vector::Unit(n, i)); };
  Eigen::Index smallest = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if (std::abs(diag(i)) < std::abs(diag(smallest))) smallest = i;
  if (std::abs(diag(smallest)) < 1e-14) return basis(smallest);

  // Pair with 0 on the segment between them.
  double best_pair = std::numeric_limits<double>::infinity();
  Eigen::Index pi = -1, pj = -1;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex c = diag(i) * std::conj(diag(j));
      if (c.real() >= 0.0) continue;
      const double skew = std::abs(c.imag()) / (std::abs(diag(i)) * std::abs(diag(j)));
      if (skew < best_pair) {
        best_pair = skew;
        pi = i;
        pj = j;
      }
    }
  if (pi >= 0 && best_pair < 1e-12) {
    return mix_to_target(t, basis(pi), basis(pj), diag(pi), diag(pj), 0.0);
  }

  // Triangle containing 0: reach the point p on [t_i, t_j] that is collinear
  // with 0 and t_k, then mix with e_k.
  double best_slack = -std::numeric_limits<double>::infinity();
  Eigen::Index bi = -1, bj = -1, bk = -1;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const Complex a = diag(i), b = diag(j), c = diag(k);
        const double area = std::imag(std::conj(b - a) * (c - a));
        if (std::abs(area) < 1e-300) continue;
        // Barycentric coordinates of 0.
        const double la = std::imag(std::conj(c - b) * (-b)) / std::imag(std::conj(c - b) * (a - b));
        const double lb = std::imag(std::conj(a - c) * (-c)) / std::imag(std::conj(a - c) * (b - c));
        const double lc = 1.0 - la - lb;
        const double slack = std::min({la, lb, lc});
        if (slack > best_slack) {
          best_slack = slack;
          bi = i;
          bj = j;
          bk = k;
        }
      }
  if (bk >= 0 && best_slack > -1e-12) {
    const Complex a = diag(bi), b = diag(bj), c = diag(bk);
    // p = a + s (b - a) with p = -mu c for some mu >= 0.
    const double s = std::imag(std::conj(c) * a) / std::imag(std::conj(c) * (a - b));
    const Complex p = a + std::clamp(s, 0.0, 1.0) * (b - a);
    const Vector x1 = mix_to_target(t, basis(bi), basis(bj), a, b, p);
    const Complex px = x1.dot(t * x1);
    return mix_to_target(t, x1, basis(bk), px, c, 0.0);
  }
  if (pi >= 0) return mix_to_target(t, basis(pi), basis(pj), diag(pi), diag(pj), 0.0);
  return basis(smallest);
}

}  // namespace detail

/// Unitary U with diag(U T U^dag) = 0 for traceless T.
inline Matrix zero_diagonal_basis(const Matrix& t) {
  if (t.rows() != t.cols() || t.rows() == 0) throw Error("bad_shape", "zero_diagonal_basis needs a square matrix");
  if (std::abs(t.trace()) > 1e-9 * (1.0 + t.norm())) throw Error("not_traceless", "T must be traceless");
  const auto n = static_cast<int>(t.rows());
  if (t.diagonal().cwiseAbs().maxCoeff() < 1e-10) return identity(n);
  if (n == 1) return identity(1);
  const Vector x = detail::zero_rayleigh_vector(t);
  // Orthonormal basis whose first vector is x.
  Matrix seed(n, n);
  seed.col(0) = x;
  seed.rightCols(n - 1) = Matrix::Identity(n, n).leftCols(n - 1);
  Eigen::HouseholderQR<Matrix> qr(seed);
  Matrix v = qr.householderQ() * Matrix::Identity(n, n);
  const Complex overlap = v.col(0).dot(x);
  v.col(0) *= overlap / std::abs(overlap);
  const Matrix rotated = v.adjoint() * t * v;
  Matrix sub = rotated.bottomRightCorner(n - 1, n - 1);
  sub.diagonal().array() -= sub.trace() / static_cast<double>(n - 1);  // drop rounding residue
  const Matrix w = zero_diagonal_basis(sub);
  Matrix block = identity(n);
  block.bottomRightCorner(n - 1, n - 1) = w;
  return block * v.adjoint();
}

// ---------------------------------------------------------------------------
// Concrete protocols

namespace detail {

struct WalgateParts {
  Instrument a_basis;
  std::vector<Instrument> b_helstrom;  // indexed by A's outcome
};

/// A measures in a basis where Tr_B |psi1><psi0| has zero diagonal; the
/// conditional states on B are then orthogonal and B separates them.
inline WalgateParts walgate_parts(const Vector& psi0, const Vector& psi1, const BipartiteShape& shape) {
  const int da = shape.dim_a;
  const int db = shape.dim_b;
  const Matrix m0 = unvec(psi0, da, db);
  const Matrix m1 = unvec(psi1, da, db);
  const Matrix t = m1 * m0.adjoint();  // Tr_B |psi1><psi0|
  const Matrix u = zero_diagonal_basis(t);
  WalgateParts parts;
  for (int i = 0; i < da; ++i) {
    const Vector f = u.row(i).adjoint();  // U^dag e_i
    parts.a_basis.outcomes.push_back({projector(f)});
    Vector b0 = m0.transpose() * f.conjugate();
    Matrix p0 = Matrix::Zero(db, db);
    if (b0.norm() > 1e-12) p0 = projector(b0 / b0.norm());
    parts.b_helstrom.push_back(Instrument{{{p0}, {identity(db) - p0}}});
  }
  return parts;
}

}  // namespace detail

inline ProtocolTree walgate_protocol(const Vector& psi0, const Vector& psi1, const BipartiteShape& shape) {
  check_shape(shape);
  if (psi0.size() != shape.total() || psi1.size() != shape.total()) throw Error("bad_shape", "state size");
  if (std::abs(psi0.norm() - 1.0) > 1e-9 || std::abs(psi1.norm() - 1.0) > 1e-9)
    throw Error("bad_state", "states must be unit vectors");
  if (std::abs(psi0.dot(psi1)) > 1e-9) throw Error("not_orthogonal", "states are not orthogonal");
  detail::WalgateParts parts = detail::walgate_parts(psi0, psi1, shape);
  ProtocolTree p;
  p.shape = shape;
  p.rounds.push_back({Party::A, {{{}, parts.a_basis}}});
  Round b{Party::B, {}};
  for (std::size_t i = 0; i < parts.b_helstrom.size(); ++i) b.instruments[{static_cast<int>(i)}] = parts.b_helstrom[i];
  p.rounds.push_back(std::move(b));
  p.decision = [](const Transcript& t) { return t.back(); };
  return p;
}

inline ProtocolSetup flagged_protocol(const ChannelPair& pair) {
  if (pair.family != Family::flagged && pair.family != Family::weyl_flagged)
    throw Error("bad_family", "flagged protocol needs a flagged pair");
  const auto& k0 = pair.params.flag_kraus0;
  const auto& k1 = pair.params.flag_kraus1;
  const int d = pair.params.d;
  const auto n = static_cast<int>(k0.size());
  if (n == 0 || k1.size() != k0.size() || pair.phi0.dim_out != n * d) throw Error("bad_shape", "flag parameters");
  for (int j = 0; j < n; ++j)
    if (std::abs(inner(k0[j], k1[j])) > 1e-9)
      throw Error("not_perfectly_discriminable", "flag " + std::to_string(j) + " operators are not orthogonal");

  const Vector omega = max_entangled(d);
  ProtocolTree p;
  p.shape = {n * d, d};
  Instrument flag;
  for (int j = 0; j < n; ++j) {
    Matrix k = Matrix::Zero(d, n * d);
    k.middleCols(static_cast<Eigen::Index>(j) * d, d) = identity(d);
    flag.outcomes.push_back({k});
  }
  p.rounds.push_back({Party::A, {{{}, flag}}});
  Round a{Party::A, {}};
  Round b{Party::B, {}};
  for (int j = 0; j < n; ++j) {
    auto branch = [&](const Matrix& k) {
      const Vector v = kron(k, identity(d)) * omega;
      const double nrm = v.norm();
      return nrm > 1e-12 ? Vector(v / nrm) : Vector(Vector::Zero(v.size()));
    };
    const detail::WalgateParts parts = detail::walgate_parts(branch(k0[j]), branch(k1[j]), {d, d});
    a.instruments[{j}] = parts.a_basis;
    for (int i = 0; i < d; ++i) b.instruments[{j, i}] = parts.b_helstrom[i];
  }
  p.rounds.push_back(std::move(a));
  p.rounds.push_back(std::move(b));
  p.decision = [](const Transcript& t) { return t.back(); };
  return {std::move(p), omega, d};
}

inline ProtocolSetup random_binary_protocol(const ChannelPair& pair) {
  if (pair.family != Family::random_binary && pair.family != Family::qubit_example)
    throw Error("bad_family", "random binary protocol needs a random binary pair");
  const int d = pair.params.d;
  const auto& us = pair.params.unitaries;
  const auto big_n = static_cast<int>(us.size());
  if (d < 2 || d % 2 != 0 || big_n == 0 || pair.phi0.dim_in != d || pair.phi0.dim_out != 2 * big_n)
    throw Error("bad_shape", "random binary parameters");

  ProtocolTree p;
  p.shape = {2 * big_n, d};
  Instrument flag;
  for (int j = 0; j < big_n; ++j) {
    Matrix k = Matrix::Zero(2, 2 * big_n);
    k(0, 2 * j) = 1;
    k(1, 2 * j + 1) = 1;
    flag.outcomes.push_back({k});
  }
  p.rounds.push_back({Party::A, {{{}, flag}}});

  Matrix half0 = Matrix::Zero(d, d);
  for (int i = 0; i < d / 2; ++i) half0(i, i) = 1;
  const Matrix half1 = identity(d) - half0;
  Round b{Party::B, {}};
  for (int j = 0; j < big_n; ++j) {
    const Matrix c = us[static_cast<std::size_t>(j)].conjugate();
    b.instruments[{j}] = Instrument{{{half0 * c}, {half1 * c}}};
  }
  p.rounds.push_back(std::move(b));

  Matrix e0 = Matrix::Zero(2, 2);
  e0(0, 0) = 1;
  const Instrument bit{{{e0}, {identity(2) - e0}}};
  Round a{Party::A, {}};
  for (int j = 0; j < big_n; ++j)
    for (int x = 0; x < 2; ++x) a.instruments[{j, x}] = bit;
  p.rounds.push_back(std::move(a));
  p.decision = [](const Transcript& t) { return t[1] == t[2] ? 0 : 1; };
  return {std::move(p), max_entangled(d), d};
}

/// Registered protocol for the pair's family, if any.
inline std::optional<ProtocolSetup> family_protocol(const ChannelPair& pair) {
  switch (pair.family) {
    case Family::flagged:
    case Family::weyl_flagged:
      return flagged_protocol(pair);
    case Family::random_binary:
    case Family::qubit_example:
      return random_binary_protocol(pair);
    default:
      return std::nullopt;
  }
}

}  // namespace chandisc
