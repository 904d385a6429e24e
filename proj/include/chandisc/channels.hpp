// Channels in Kraus form, Choi matrices, and the channel families studied in
// the discrimination examples (Werner-Holevo, flagged Kraus, random binary
// measurement channels).
//
// Conventions
//   * A channel maps L(X) -> L(Y); Kraus operators are dim_out x dim_in.
//   * The Choi matrix lives on Y (x) X:  J(Phi) = sum_{jk} Phi(|j><k|) (x) |j><k|.
//   * Extended maps act on X (x) Z and produce Y (x) Z, ancilla Z second.
//   * Flagged outputs are ordered flag (x) system.
#pragma once

#include "chandisc/linalg.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chandisc {

struct Channel {
  int dim_in = 1;
  int dim_out = 1;
  std::vector<Matrix> kraus;
};

/// Hermiticity-preserving map written as a signed Kraus pair:
///   Phi(X) = sum_k P_k X P_k^*  -  sum_k M_k X M_k^*.
/// Differences of channels are the only non-CP maps the library needs.
struct HermitianMap {
  int dim_in = 1;
  int dim_out = 1;
  std::vector<Matrix> plus;
  std::vector<Matrix> minus;
};

enum class Family { werner_holevo, flagged, weyl_flagged, random_binary, qubit_example, custom };

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::werner_holevo: return "werner_holevo";
    case Family::flagged: return "flagged";
    case Family::weyl_flagged: return "weyl_flagged";
    case Family::random_binary: return "random_binary";
    case Family::qubit_example: return "qubit_example";
    case Family::custom: return "custom";
  }
  return "custom";
}

inline Family family_from_name(std::string_view name) {
  for (Family f : {Family::werner_holevo, Family::flagged, Family::weyl_flagged,
                   Family::random_binary, Family::qubit_example, Family::custom}) {
    if (family_name(f) == name) return f;
  }
  throw Error("bad_family", std::string(name));
}

/// Parameters of the family a pair was built from. Only the fields relevant to
/// the family are populated.
struct FamilyParams {
  int d = 0;
  int n = 0;  // number of flags (flagged families)
  int N = 0;  // number of unitaries (random binary families)
  std::vector<Matrix> unitaries;
  std::vector<Matrix> flag_kraus0;
  std::vector<Matrix> flag_kraus1;
};

struct ChannelPair {
  Channel phi0;
  Channel phi1;
  Family family = Family::custom;
  FamilyParams params;
};

struct ChoiMatrix {
  Matrix matrix;
  BipartiteShape shape;  // (dim_out, dim_in)
};

namespace detail {

inline void check_kraus_shapes(std::span<const Matrix> ops, int dim_in, int dim_out) {
  for (const Matrix& k : ops) {
    if (k.rows() != dim_out || k.cols() != dim_in) {
      throw Error("bad_shape", "Kraus operator is " + std::to_string(k.rows()) + "x" +
                                   std::to_string(k.cols()) + ", expected " +
                                   std::to_string(dim_out) + "x" + std::to_string(dim_in));
    }
  }
}

inline Matrix kraus_sum(std::span<const Matrix> ops, const Matrix& x, int dim_out) {
  Matrix out = Matrix::Zero(dim_out, dim_out);
  for (const Matrix& k : ops) out.noalias() += k * x * k.adjoint();
  return out;
}

inline Matrix kraus_adjoint_sum(std::span<const Matrix> ops, const Matrix& m, int dim_in) {
  Matrix out = Matrix::Zero(dim_in, dim_in);
  for (const Matrix& k : ops) out.noalias() += k.adjoint() * m * k;
  return out;
}

inline double completeness_defect(std::span<const Matrix> ops, int dim_in) {
  Matrix s = Matrix::Zero(dim_in, dim_in);
  for (const Matrix& k : ops) s.noalias() += k.adjoint() * k;
  return (s - identity(dim_in)).cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Validates shapes and trace preservation; throws "bad_shape" / "not_tp".
inline Channel make_channel(int dim_in, int dim_out, std::vector<Matrix> kraus) {
  if (dim_in < 1 || dim_out < 1) throw Error("bad_shape", "channel dimensions must be positive");
  detail::check_kraus_shapes(kraus, dim_in, dim_out);
  if (detail::completeness_defect(kraus, dim_in) > kTol.decomposition) {
    throw Error("not_tp", "sum_k K_k^* K_k != 1");
  }
  return Channel{dim_in, dim_out, std::move(kraus)};
}

inline HermitianMap as_map(const Channel& ch) { return {ch.dim_in, ch.dim_out, ch.kraus, {}}; }

inline HermitianMap difference(const Channel& a, const Channel& b) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out) throw Error("bad_shape", "channel dims differ");
  return {a.dim_in, a.dim_out, a.kraus, b.kraus};
}

inline HermitianMap difference(const ChannelPair& pair) { return difference(pair.phi0, pair.phi1); }

inline Matrix apply_channel(const HermitianMap& phi, const Matrix& x) {
  check_square(x, phi.dim_in, "channel input");
  return detail::kraus_sum(phi.plus, x, phi.dim_out) - detail::kraus_sum(phi.minus, x, phi.dim_out);
}

inline Matrix apply_channel(const Channel& ch, const Matrix& rho) {
  check_square(rho, ch.dim_in, "channel input");
  return detail::kraus_sum(ch.kraus, rho, ch.dim_out);
}

/// Phi^*(M) = sum P^* M P - sum M_k^* M M_k, the Hilbert-Schmidt adjoint.
inline Matrix adjoint_apply(const HermitianMap& phi, const Matrix& m) {
  check_square(m, phi.dim_out, "adjoint input");
  return detail::kraus_adjoint_sum(phi.plus, m, phi.dim_in) -
         detail::kraus_adjoint_sum(phi.minus, m, phi.dim_in);
}

inline Matrix adjoint_apply(const Channel& ch, const Matrix& m) {
  return adjoint_apply(as_map(ch), m);
}

/// (Phi (x) 1_Z)(rho) for rho on X (x) Z; `shape` is (dim X, dim Z).
inline Matrix apply_extended(const HermitianMap& phi, const Matrix& rho, const BipartiteShape& shape) {
  check_shape(shape);
  if (shape.dim_a != phi.dim_in) throw Error("bad_shape", "extended input does not match dim_in");
  check_square(rho, shape.total(), "extended input");
  const Matrix id_z = identity(shape.dim_b);
  const int out_dim = phi.dim_out * shape.dim_b;
  Matrix out = Matrix::Zero(out_dim, out_dim);
  for (const Matrix& k : phi.plus) {
    const Matrix kz = kron(k, id_z);
    out.noalias() += kz * rho * kz.adjoint();
  }
  for (const Matrix& k : phi.minus) {
    const Matrix kz = kron(k, id_z);
    out.noalias() -= kz * rho * kz.adjoint();
  }
  return out;
}

inline Matrix apply_extended(const Channel& ch, const Matrix& rho, const BipartiteShape& shape) {
  return apply_extended(as_map(ch), rho, shape);
}

/// (Phi (x) 1_Z)(|psi><psi|) for a pure input, computed without forming the
/// extended Kraus operators: with Psi the dim_in x dim_z coefficient matrix of
/// psi, (K (x) 1)|psi> has coefficient matrix K Psi.
inline Matrix apply_extended_pure(const HermitianMap& phi, const Vector& psi, int dim_z) {
  const Matrix coeff = unvec(psi, phi.dim_in, dim_z);
  const int out_dim = phi.dim_out * dim_z;
  Matrix out = Matrix::Zero(out_dim, out_dim);
  for (const Matrix& k : phi.plus) {
    const Vector v = vec(k * coeff);
    out.noalias() += v * v.adjoint();
  }
  for (const Matrix& k : phi.minus) {
    const Vector v = vec(k * coeff);
    out.noalias() -= v * v.adjoint();
  }
  return out;
}

/// (Phi^* (x) 1_Z)(M) for M on Y (x) Z.
inline Matrix adjoint_apply_extended(const HermitianMap& phi, const Matrix& m, int dim_z) {
  check_square(m, phi.dim_out * dim_z, "extended adjoint input");
  const Matrix id_z = identity(dim_z);
  const int in_dim = phi.dim_in * dim_z;
  Matrix out = Matrix::Zero(in_dim, in_dim);
  for (const Matrix& k : phi.plus) {
    const Matrix kz = kron(k, id_z);
    out.noalias() += kz.adjoint() * m * kz;
  }
  for (const Matrix& k : phi.minus) {
    const Matrix kz = kron(k, id_z);
    out.noalias() -= kz.adjoint() * m * kz;
  }
  return out;
}

inline ChoiMatrix choi(const HermitianMap& phi) {
  const int dx = phi.dim_in;
  const int dy = phi.dim_out;
  Matrix j = Matrix::Zero(dy * dx, dy * dx);
  for (int a = 0; a < dx; ++a) {
    for (int b = 0; b < dx; ++b) {
      Matrix e = Matrix::Zero(dx, dx);
      e(a, b) = 1.0;
      j += kron(apply_channel(phi, e), e);
    }
  }
  return {j, {dy, dx}};
}

inline ChoiMatrix choi(const Channel& ch) { return choi(as_map(ch)); }

/// Evaluates Phi(rho) = Tr_X[J (1_Y (x) rho^T)] directly from a Choi matrix.
inline Matrix apply_via_choi(const ChoiMatrix& j, const Matrix& rho) {
  check_square(rho, j.shape.dim_b, "choi input");
  const Matrix lifted = j.matrix * kron(identity(j.shape.dim_a), Matrix(rho.transpose()));
  return partial_trace(lifted, j.shape, Side::B);
}

/// Minimal Kraus representation from a PSD Choi matrix on Y (x) X.
inline Channel channel_from_choi(const ChoiMatrix& j) {
  const EigenDecomposition e = hermitian_eig(j.matrix);
  const int dy = j.shape.dim_a;
  const int dx = j.shape.dim_b;
  std::vector<Matrix> kraus;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) <= kTol.kraus_cutoff) continue;
    kraus.push_back(std::sqrt(e.values(i)) * unvec(e.vectors.col(i), dy, dx));
  }
  return make_channel(dx, dy, std::move(kraus));
}

/// Choi PSD and Tr_Y J = 1_X, both to `tol`.
inline bool is_cptp(const Channel& ch, double tol = kTol.decomposition) {
  const ChoiMatrix j = choi(ch);
  if (min_eigenvalue(j.matrix) < -tol) return false;
  const Matrix tr = partial_trace(j.matrix, j.shape, Side::A);
  return (tr - identity(ch.dim_in)).cwiseAbs().maxCoeff() <= tol;
}

/// The d^2 - 1 non-identity Weyl operators X^a Z^b, ordered by (a, b)
/// lexicographically and skipping (0, 0).
inline std::vector<Matrix> weyl_operators(int d) {
  if (d < 2) throw Error("bad_param", "weyl_operators needs d >= 2");
  Matrix shift = Matrix::Zero(d, d);
  Matrix clock = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    shift((k + 1) % d, k) = 1.0;
    clock(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * k / d);
  }
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(d) * d - 1);
  Matrix xa = identity(d);
  for (int a = 0; a < d; ++a) {
    Matrix zb = identity(d);
    for (int b = 0; b < d; ++b) {
      if (a != 0 || b != 0) out.push_back(xa * zb);
      zb = zb * clock;
    }
    xa = xa * shift;
  }
  return out;
}

/// Phi_a(rho) = sum_j |j><j| (x) A_{a,j} rho A_{a,j}^*.
inline ChannelPair flagged_channels(const std::vector<Matrix>& kraus0, const std::vector<Matrix>& kraus1) {
  if (kraus0.empty() || kraus0.size() != kraus1.size()) {
    throw Error("bad_param", "flag lists must be non-empty and of equal length");
  }
  const int d = static_cast<int>(kraus0.front().cols());
  detail::check_kraus_shapes(kraus0, d, d);
  detail::check_kraus_shapes(kraus1, d, d);
  if (detail::completeness_defect(kraus0, d) > kTol.decomposition ||
      detail::completeness_defect(kraus1, d) > kTol.decomposition) {
    throw Error("not_tp", "flag operators are not complete");
  }
  const int n = static_cast<int>(kraus0.size());
  auto lift = [&](const std::vector<Matrix>& ops) {
    std::vector<Matrix> out;
    for (int j = 0; j < n; ++j) {
      Matrix k = Matrix::Zero(n * d, d);
      k.block(j * d, 0, d, d) = ops[j];
      out.push_back(std::move(k));
    }
    return out;
  };
  ChannelPair pair{make_channel(d, n * d, lift(kraus0)), make_channel(d, n * d, lift(kraus1)),
                   Family::flagged, {}};
  pair.params.d = d;
  pair.params.n = n;
  pair.params.flag_kraus0 = kraus0;
  pair.params.flag_kraus1 = kraus1;
  return pair;
}

/// Flagged pair with A_{0,j} = 1/sqrt(n), A_{1,j} = W_j/sqrt(n), n = d^2 - 1.
inline ChannelPair weyl_flagged(int d) {
  const std::vector<Matrix> weyl = weyl_operators(d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(weyl.size()));
  std::vector<Matrix> k0;
  std::vector<Matrix> k1;
  for (const Matrix& w : weyl) {
    k0.push_back(scale * identity(d));
    k1.push_back(scale * w);
  }
  ChannelPair pair = flagged_channels(k0, k1);
  pair.family = Family::weyl_flagged;
  return pair;
}

/// Phi_a(rho) = (1/N) sum_j |j><j| (x) Psi_a(U_j rho U_j^*), where Psi_0
/// records which half of the standard basis a projective measurement lands in
/// and Psi_1 records the flipped bit.
inline ChannelPair random_binary_channels(int d, const std::vector<Matrix>& unitaries) {
  if (d < 2 || d % 2 != 0) throw Error("bad_param", "random binary channels need even d >= 2");
  if (unitaries.empty()) throw Error("bad_param", "need at least one unitary");
  for (const Matrix& u : unitaries) {
    if (u.rows() != d || u.cols() != d) throw Error("bad_shape", "unitary has wrong dimension");
    if (unitarity_defect(u) > kTol.decomposition) throw Error("not_unitary");
  }
  const int big_n = static_cast<int>(unitaries.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(big_n));
  auto build = [&](bool flip) {
    std::vector<Matrix> kraus;
    kraus.reserve(static_cast<std::size_t>(big_n) * d);
    for (int j = 0; j < big_n; ++j) {
      for (int m = 0; m < d; ++m) {
        const int bit = (m < d / 2 ? 0 : 1) ^ (flip ? 1 : 0);
        Matrix k = Matrix::Zero(2 * big_n, d);
        k.row(2 * j + bit) = scale * unitaries[j].row(m);
        kraus.push_back(std::move(k));
      }
    }
    return make_channel(d, 2 * big_n, std::move(kraus));
  };
  ChannelPair pair{build(false), build(true), Family::random_binary, {}};
  pair.params.d = d;
  pair.params.N = big_n;
  pair.params.unitaries = unitaries;
  return pair;
}

inline std::vector<Matrix> qubit_example_unitaries(int big_n) {
  if (big_n != 2 && big_n != 3) throw Error("bad_param", "qubit example is defined for N = 2 or 3");
  const Complex i(0.0, 1.0);
  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -i, i, 0;
  sz << 1, 0, 0, -1;
  std::vector<Matrix> us{identity(2), (sx + sz) / std::numbers::sqrt2};
  if (big_n == 3) us.push_back((sy + sz) / std::numbers::sqrt2);
  return us;
}

inline ChannelPair qubit_example(int big_n) {
  ChannelPair pair = random_binary_channels(2, qubit_example_unitaries(big_n));
  pair.family = Family::qubit_example;
  return pair;
}

struct SymAntisym {
  Matrix symmetric;      // S = (1 + F) / 2
  Matrix antisymmetric;  // R = (1 - F) / 2
};

inline Matrix swap_operator(int d) {
  Matrix f = Matrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) f(a * d + b, b * d + a) = 1.0;
  return f;
}

inline SymAntisym sym_antisym_projectors(int d) {
  if (d < 2) throw Error("bad_param", "projectors need d >= 2");
  const Matrix f = swap_operator(d);
  const Matrix id = identity(d * d);
  return {(id + f) / 2.0, (id - f) / 2.0};
}

/// Phi_0(X) = (Tr X 1 + X^T)/(d+1),  Phi_1(X) = (Tr X 1 - X^T)/(d-1),
/// built from their Choi matrices 2S/(d+1) and 2R/(d-1).
inline ChannelPair werner_holevo(int d) {
  if (d < 2) throw Error("bad_param", "Werner-Holevo channels need d >= 2");
  const SymAntisym p = sym_antisym_projectors(d);
  const BipartiteShape shape{d, d};
  ChannelPair pair{channel_from_choi({2.0 / (d + 1) * p.symmetric, shape}),
                   channel_from_choi({2.0 / (d - 1) * p.antisymmetric, shape}),
                   Family::werner_holevo, {}};
  pair.params.d = d;
  return pair;
}

}  // namespace chandisc
