// Dense complex matrix kernel shared by every other module.
//
// All routines are pure functions over Eigen dense types. Bipartite index
// convention: basis vector |a>|b> of A (x) B has index a * dim_b + b, which is
// the ordering produced by kron(A, B).
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace chandisc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerances used across the library. One record so tests and tools can
/// reason about a single set of knobs.
struct Tolerances {
  double exact = 1e-10;          // algebraic identities, Hermiticity
  double decomposition = 1e-9;   // eigen-reconstruction, CPTP, unitarity
  double measurement = 1e-8;     // POVM completeness
  double kraus_cutoff = 1e-12;   // Choi eigenvalues dropped when extracting Kraus
  double prune = 1e-14;          // transcript probabilities ignored by LOCC evaluation
};

inline constexpr Tolerances kTol{};

/// Error carrying one of the short machine-readable codes used across the
/// library ("not_hermitian", "bad_shape", ...).
class Error : public std::runtime_error {
 public:
  explicit Error(std::string code, const std::string& detail = {})
      : std::runtime_error(detail.empty() ? code : code + ": " + detail),
        code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct BipartiteShape {
  int dim_a = 1;
  int dim_b = 1;

  int total() const { return dim_a * dim_b; }
};

enum class Side { A, B };

inline void check_shape(const BipartiteShape& shape) {
  if (shape.dim_a < 1 || shape.dim_b < 1) {
    throw Error("bad_shape", "subsystem dimensions must be positive");
  }
}

inline void check_square(const Matrix& m, int dim, const char* what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw Error("bad_shape", std::string(what) + " has dimension " +
                                 std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + ", expected " +
                                 std::to_string(dim));
  }
}

inline Matrix identity(int n) { return Matrix::Identity(n, n); }

/// Hilbert-Schmidt inner product <a, b> = Tr(a^* b).
inline Complex inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace();
}

/// Real part of <a, b>; the only part that matters for Hermitian pairs.
inline double inner_re(const Matrix& a, const Matrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

inline double hermitian_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tol = kTol.exact) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return hermitian_defect(m) <= tol * scale;
}

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
struct EigenDecomposition {
  RealVector values;
  Matrix vectors;  // columns are orthonormal eigenvectors
};

inline EigenDecomposition hermitian_eig(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error("bad_shape", "eig of non-square matrix");
  if (!is_hermitian(m)) throw Error("not_hermitian");
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw Error("eig_fail");
  const Eigen::Index n = h.rows();
  EigenDecomposition out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

inline RealVector eigenvalues(const Matrix& m) { return hermitian_eig(m).values; }

inline double min_eigenvalue(const Matrix& m) {
  const RealVector v = eigenvalues(m);
  return v.size() == 0 ? 0.0 : v(v.size() - 1);
}

inline double max_eigenvalue(const Matrix& m) {
  const RealVector v = eigenvalues(m);
  return v.size() == 0 ? 0.0 : v(0);
}

/// Schatten-1 norm of a Hermitian matrix.
inline double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return eigenvalues(m).cwiseAbs().sum();
}

struct JordanParts {
  Matrix positive;
  Matrix negative;
};

/// M = M+ - M- with M+, M- PSD and orthogonally supported.
inline JordanParts jordan_decompose(const Matrix& m) {
  const EigenDecomposition e = hermitian_eig(m);
  const RealVector pos = e.values.cwiseMax(0.0);
  const RealVector neg = (-e.values).cwiseMax(0.0);
  return {e.vectors * pos.asDiagonal() * e.vectors.adjoint(),
          e.vectors * neg.asDiagonal() * e.vectors.adjoint()};
}

inline Matrix positive_part(const Matrix& m) { return jordan_decompose(m).positive; }

/// Projector onto the strictly positive eigenspace. For a difference of two
/// states this is the optimal (Helstrom) measurement outcome "0".
inline Matrix positive_projector(const Matrix& m) {
  const EigenDecomposition e = hermitian_eig(m);
  Matrix p = Matrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > 0.0) p += projector(e.vectors.col(i));
  }
  return p;
}

/// Spectral clamp of a Hermitian matrix to eigenvalues in [lo, hi].
inline Matrix clamp_spectrum(const Matrix& m, double lo, double hi) {
  const EigenDecomposition e = hermitian_eig(m);
  const RealVector v = e.values.cwiseMax(lo).cwiseMin(hi);
  return e.vectors * v.asDiagonal() * e.vectors.adjoint();
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

/// Traces out subsystem `traced` of a matrix on A (x) B.
inline Matrix partial_trace(const Matrix& m, const BipartiteShape& shape, Side traced) {
  check_shape(shape);
  check_square(m, shape.total(), "partial_trace input");
  const int da = shape.dim_a;
  const int db = shape.dim_b;
  if (traced == Side::B) {
    Matrix out = Matrix::Zero(da, da);
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j)
        for (int b = 0; b < db; ++b) out(i, j) += m(i * db + b, j * db + b);
    return out;
  }
  Matrix out = Matrix::Zero(db, db);
  for (int a = 0; a < da; ++a) out += m.block(a * db, a * db, db, db);
  return out;
}

/// Transposes subsystem `side` of a matrix on A (x) B.
inline Matrix partial_transpose(const Matrix& m, const BipartiteShape& shape, Side side) {
  check_shape(shape);
  check_square(m, shape.total(), "partial_transpose input");
  const int da = shape.dim_a;
  const int db = shape.dim_b;
  Matrix out(m.rows(), m.cols());
  for (int a = 0; a < da; ++a) {
    for (int ap = 0; ap < da; ++ap) {
      const auto blk = m.block(a * db, ap * db, db, db);
      if (side == Side::B) {
        out.block(a * db, ap * db, db, db) = blk.transpose();
      } else {
        out.block(ap * db, a * db, db, db) = blk;
      }
    }
  }
  return out;
}

/// (1/sqrt(d)) sum_i |i>|i>.
inline Vector max_entangled(int d) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) v(i * d + i) = amp;
  return v;
}

/// Reshapes a vector on A (x) B into the dim_a x dim_b coefficient matrix.
inline Matrix unvec(const Vector& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) throw Error("bad_shape", "unvec size");
  Matrix out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out(r, c) = v(r * cols + c);
  return out;
}

inline Vector vec(const Matrix& m) {
  Vector out(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r * m.cols() + c) = m(r, c);
  return out;
}

inline double unitarity_defect(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - identity(static_cast<int>(u.rows()))).cwiseAbs().maxCoeff();
}

}  // namespace chandisc
