// Small dense SDP solver for measurement problems of the form
//
//     maximize  <C, P>
//     s.t.      0 <= P <= 1                     (optional box)
//               L_i(P) + B_i >= 0   for each i  (affine PSD constraints)
//
// where every L_i is a Hilbert-Schmidt isometry (partial transposes, their
// negatives, unitary conjugations). Isometries make each constraint set
// projectable with a single eigendecomposition, which is all ADMM needs.
//
// The solver runs consensus ADMM: one copy Z_i of P per constraint set, a
// closed-form P-update, and scaled dual variables U_i. The penalty is
// rebalanced every `adapt_every` iterations. At exit a dual certificate is
// assembled from the multipliers rho * U_i, giving an upper bound on the
// optimum that is valid regardless of convergence.
#pragma once

#include "chandisc/linalg.hpp"
#include "chandisc/random.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace chandisc {

struct LinearMap {
  std::function<Matrix(const Matrix&)> forward;
  std::function<Matrix(const Matrix&)> adjoint;
};

struct AffinePsdConstraint {
  LinearMap map;
  Matrix offset;
  std::string label;
};

struct SdpProblem {
  Matrix objective;
  std::vector<AffinePsdConstraint> psd_constraints;
  bool box = true;
  int dim = 0;
};

enum class SdpStatus { optimal, max_iter, infeasible };

inline const char* status_name(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::max_iter: return "max_iter";
    case SdpStatus::infeasible: return "infeasible";
  }
  return "?";
}

struct SdpSolution {
  double value = 0.0;
  Matrix argument;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double dual_bound = std::numeric_limits<double>::infinity();
  int iterations = 0;
  SdpStatus status = SdpStatus::max_iter;
};

struct SdpOptions {
  double tol = 1e-7;
  int max_iter = 20000;
  double penalty = 1.0;
  int adapt_every = 50;
  double relaxation = 1.6;
  double divergence = 1e6;
};

/// ADMM iterates kept between solves of closely related problems.
struct SdpWarmStart {
  Matrix x;
  std::vector<Matrix> z;
  std::vector<Matrix> u;
  double rho = 0.0;
};

/// X -> sign * X^{Gamma_side}.
inline LinearMap partial_transpose_map(const BipartiteShape& shape, Side side, double sign = 1.0) {
  auto f = [shape, side, sign](const Matrix& x) -> Matrix { return sign * partial_transpose(x, shape, side); };
  return {f, f};
}

namespace detail {

inline void validate_problem(const SdpProblem& p) {
  if (p.dim < 1 || p.dim > 256) throw Error("bad_problem", "dimension must be in [1, 256]");
  check_square(p.objective, p.dim, "objective");
  if (!is_hermitian(p.objective)) throw Error("not_hermitian", "objective");
  CounterRng rng(0x5d);
  const Matrix probe = random_hermitian(p.dim, rng);
  for (const AffinePsdConstraint& c : p.psd_constraints) {
    check_square(c.offset, p.dim, "constraint offset");
    if (!is_hermitian(c.offset)) throw Error("not_hermitian", "constraint offset " + c.label);
    const Matrix img = c.map.forward(probe);
    if (std::abs(img.norm() - probe.norm()) > 1e-9 * probe.norm() ||
        (c.map.adjoint(img) - probe).norm() > 1e-9 * probe.norm()) {
      throw Error("bad_constraint", "constraint map is not a Hilbert-Schmidt isometry: " + c.label);
    }
  }
}

inline Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

/// Support function bound sum_i sigma_{K_i}(W_i) for a split C = sum_i W_i
/// built from the multipliers; each constraint multiplier is first moved to
/// the polar cone and the remainder charged to the box.
inline double dual_bound(const SdpProblem& p, const std::vector<Matrix>& multipliers) {
  Matrix remainder = p.objective;
  double bound = 0.0;
  const std::size_t first = p.box ? 1 : 0;
  for (std::size_t i = 0; i < p.psd_constraints.size(); ++i) {
    const AffinePsdConstraint& c = p.psd_constraints[i];
    const Matrix v = clamp_spectrum(hermitian_part(c.map.forward(multipliers[first + i])),
                                    -std::numeric_limits<double>::infinity(), 0.0);
    remainder -= c.map.adjoint(v);
    bound -= inner_re(v, c.offset);
  }
  if (!p.box) {
    return remainder.norm() <= 1e-12 ? bound : std::numeric_limits<double>::infinity();
  }
  const RealVector ev = eigenvalues(hermitian_part(remainder));
  return bound + ev.cwiseMax(0.0).sum();
}

}  // namespace detail

inline SdpSolution solve(const SdpProblem& p, const SdpOptions& opts = {}, SdpWarmStart* warm = nullptr) {
  if (!(opts.tol > 0.0)) throw Error("bad_param", "tol must be positive");
  detail::validate_problem(p);

  const int n = p.dim;
  std::vector<std::function<Matrix(const Matrix&)>> projections;
  if (p.box) {
    projections.emplace_back([](const Matrix& x) { return clamp_spectrum(x, 0.0, 1.0); });
  }
  for (const AffinePsdConstraint& c : p.psd_constraints) {
    projections.emplace_back([&c](const Matrix& x) {
      const Matrix y = detail::hermitian_part(c.map.forward(x) + c.offset);
      return Matrix(c.map.adjoint(clamp_spectrum(y, 0.0, std::numeric_limits<double>::infinity()) - c.offset));
    });
  }

  SdpSolution sol;
  const std::size_t m = projections.size();
  if (m == 0) {
    sol.status = p.objective.norm() == 0.0 ? SdpStatus::optimal : SdpStatus::infeasible;
    sol.argument = Matrix::Zero(n, n);
    sol.dual_bound = p.objective.norm() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return sol;
  }

  double rho = opts.penalty;
  const double c_norm = p.objective.norm();
  Matrix x = 0.5 * identity(n);
  std::vector<Matrix> z(m, x);
  std::vector<Matrix> u(m, Matrix::Zero(n, n));
  if (warm && warm->rho > 0.0 && warm->z.size() == m && warm->x.rows() == n) {
    x = warm->x;
    z = warm->z;
    u = warm->u;
    rho = warm->rho;
  }

  for (int it = 1; it <= opts.max_iter; ++it) {
    Matrix acc = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < m; ++i) acc += z[i] - u[i];
    x = detail::hermitian_part(acc / static_cast<double>(m) + p.objective / (static_cast<double>(m) * rho));

    double r2 = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Matrix relaxed = opts.relaxation * x + (1.0 - opts.relaxation) * z[i];
      Matrix next = detail::hermitian_part(projections[i](relaxed + u[i]));
      s2 += (next - z[i]).squaredNorm();
      z[i] = std::move(next);
      u[i] += relaxed - z[i];
      r2 += (x - z[i]).squaredNorm();
    }
    sol.primal_residual = std::sqrt(r2);
    sol.dual_residual = rho * std::sqrt(s2);
    sol.iterations = it;

    if (!std::isfinite(sol.primal_residual) || x.norm() > opts.divergence) {
      sol.status = SdpStatus::infeasible;
      break;
    }

    if (sol.primal_residual <= opts.tol && sol.dual_residual <= opts.tol * (1.0 + c_norm)) {
      std::vector<Matrix> mult;
      for (const Matrix& ui : u) mult.push_back(rho * ui);
      const double value = inner_re(p.objective, x);
      const double bound = detail::dual_bound(p, mult);
      if (bound - value <= 0.25 * opts.tol * (1.0 + std::abs(value))) {
        sol.status = SdpStatus::optimal;
        break;
      }
    }

    if (it % opts.adapt_every == 0) {
      if (sol.primal_residual > 10.0 * sol.dual_residual) {
        rho *= 2.0;
        for (Matrix& ui : u) ui /= 2.0;
      } else if (sol.dual_residual > 10.0 * sol.primal_residual) {
        rho /= 2.0;
        for (Matrix& ui : u) ui *= 2.0;
      }
    }
  }

  if (warm && sol.status != SdpStatus::infeasible) *warm = {x, z, u, rho};
  sol.argument = x;
  sol.value = inner_re(p.objective, x);
  std::vector<Matrix> mult;
  for (const Matrix& ui : u) mult.push_back(rho * ui);
  sol.dual_bound = detail::dual_bound(p, mult);
  return sol;
}

struct PptMeasurement {
  double value = 0.0;        // <2 P0 - 1, Xhat> at the returned P0
  double upper_bound = 0.0;  // dual certificate for the same problem
  Matrix p0;
  SdpSolution solution;
};

/// max <P0 - P1, Xhat> over PPT measurements {P0, 1 - P0} on Y (x) Z, with the
/// partial transpose taken on the Z side.
inline PptMeasurement ppt_measurement_value(const Matrix& xhat, const BipartiteShape& shape,
                                            const SdpOptions& opts = {}, SdpWarmStart* warm = nullptr) {
  check_shape(shape);
  check_square(xhat, shape.total(), "Xhat");
  if (!is_hermitian(xhat)) throw Error("not_hermitian", "Xhat");
  const double tr = xhat.trace().real();
  if (std::abs(tr) > 1e-9) throw Error("not_traceless", "Xhat must be traceless");

  SdpProblem problem;
  problem.dim = shape.total();
  problem.objective = 2.0 * detail::hermitian_part(xhat);
  problem.box = true;
  problem.psd_constraints.push_back({partial_transpose_map(shape, Side::B, 1.0),
                                     Matrix::Zero(problem.dim, problem.dim), "P0^Gamma >= 0"});
  problem.psd_constraints.push_back({partial_transpose_map(shape, Side::B, -1.0), identity(problem.dim),
                                     "(1 - P0)^Gamma >= 0"});
  SdpSolution sol = solve(problem, opts, warm);
  // Pull the ADMM iterate toward 1/2 until it is exactly PPT-feasible, so the
  // reported value is attained by a genuine measurement.
  const Matrix half = 0.5 * identity(problem.dim);
  double t = 1.0;
  for (const Matrix& m : {Matrix(sol.argument), partial_transpose(sol.argument, shape, Side::B)}) {
    const RealVector ev = eigenvalues(detail::hermitian_part(m));
    const double spread = std::max(ev.maxCoeff() - 0.5, 0.5 - ev.minCoeff());
    if (spread > 0.5) t = std::min(t, 0.5 / spread);
  }
  PptMeasurement out;
  out.p0 = half + t * (sol.argument - half);
  out.value = inner_re(xhat, 2.0 * out.p0 - identity(problem.dim));
  out.upper_bound = sol.dual_bound - tr;
  out.solution = std::move(sol);
  return out;
}

}  // namespace chandisc
