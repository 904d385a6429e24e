#include "chandisc/channels.hpp"
#include "chandisc/random.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace chandisc;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

template <class F>
void expect_code(F&& f, const std::string& code) {
  try {
    f();
    FAIL() << "expected error " << code;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code);
  }
}

}  // namespace

TEST(HermitianEig, DiagonalInput) {
  const EigenDecomposition e = hermitian_eig(diag2(1, 3));
  EXPECT_DOUBLE_EQ(e.values(0), 3.0);
  EXPECT_DOUBLE_EQ(e.values(1), 1.0);
  EXPECT_NEAR(std::abs(e.vectors(1, 0)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(e.vectors(0, 1)), 1.0, 1e-12);
}

TEST(HermitianEig, PauliX) {
  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  const EigenDecomposition e = hermitian_eig(sx);
  EXPECT_NEAR(e.values(0), 1.0, 1e-14);
  EXPECT_NEAR(e.values(1), -1.0, 1e-14);
}

TEST(HermitianEig, RandomReconstruction) {
  CounterRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix h = random_hermitian(8, rng);
    const EigenDecomposition e = hermitian_eig(h);
    const Matrix rec = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LE((rec - h).norm(), 1e-9 * (1.0 + h.norm()));
    EXPECT_LE(unitarity_defect(e.vectors), 1e-9);
    for (int i = 1; i < 8; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
  }
}

TEST(HermitianEig, RejectsNonHermitian) {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  expect_code([&] { hermitian_eig(m); }, "not_hermitian");
}

TEST(TraceNorm, TrivialValues) {
  EXPECT_EQ(trace_norm(Matrix::Zero(3, 3)), 0.0);
  EXPECT_NEAR(trace_norm(diag2(1, -1)), 2.0, 1e-15);
}

TEST(TraceNorm, HelstromOracle) {
  CounterRng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix diff = random_density(2, 2, rng) - random_density(2, 2, rng);
    EXPECT_NEAR(trace_norm(diff), 2.0 * oracle::best_projector_value(diff), 1e-12);
  }
}

TEST(Jordan, DiagonalAndPsd) {
  const JordanParts j = jordan_decompose(diag2(2, -3));
  EXPECT_LE((j.positive - diag2(2, 0)).norm(), 1e-14);
  EXPECT_LE((j.negative - diag2(0, 3)).norm(), 1e-14);

  CounterRng rng(5);
  const Matrix rho = random_density(4, 4, rng);
  const JordanParts k = jordan_decompose(rho);
  EXPECT_LE((k.positive - rho).norm(), 1e-12);
  EXPECT_LE(k.negative.norm(), 1e-12);
}

TEST(Jordan, RandomIdentities) {
  CounterRng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix m = random_hermitian(6, rng);
    const JordanParts j = jordan_decompose(m);
    EXPECT_LE((j.positive - j.negative - m).norm(), 1e-9);
    EXPECT_LE((j.positive * j.negative).norm(), 1e-9);
    EXPECT_GE(min_eigenvalue(j.positive), -1e-12);
    EXPECT_GE(min_eigenvalue(j.negative), -1e-12);
    EXPECT_NEAR(j.positive.trace().real() + j.negative.trace().real(), trace_norm(m), 1e-9);
  }
}

TEST(PartialOps, MaxEntangledMarginal) {
  const Matrix omega = projector(max_entangled(2));
  EXPECT_LE((partial_trace(omega, {2, 2}, Side::B) - 0.5 * identity(2)).norm(), 1e-15);
  EXPECT_LE((partial_trace(omega, {2, 2}, Side::A) - 0.5 * identity(2)).norm(), 1e-15);
}

TEST(PartialOps, ProductTraces) {
  CounterRng rng(9);
  const Matrix a = random_hermitian(3, rng);
  const Matrix b = random_hermitian(2, rng);
  const Matrix ab = kron(a, b);
  EXPECT_LE((partial_trace(ab, {3, 2}, Side::B) - b.trace() * a).norm(), 1e-12);
  EXPECT_LE((partial_trace(ab, {3, 2}, Side::A) - a.trace() * b).norm(), 1e-12);
}

TEST(PartialOps, TransposeInvolutionAndInvariants) {
  CounterRng rng(13);
  for (Side side : {Side::A, Side::B}) {
    const Matrix m = random_hermitian(6, rng);
    const Matrix t = partial_transpose(m, {2, 3}, side);
    EXPECT_EQ((partial_transpose(t, {2, 3}, side) - m).norm(), 0.0);
    EXPECT_NEAR(std::abs(t.trace() - m.trace()), 0.0, 1e-12);
    EXPECT_NEAR(t.norm(), m.norm(), 1e-12);
  }
  // Full transpose = both partial transposes.
  const Matrix m = ginibre(6, 6, rng);
  const Matrix both = partial_transpose(partial_transpose(m, {2, 3}, Side::A), {2, 3}, Side::B);
  EXPECT_LE((both - m.transpose()).norm(), 1e-15);
}

TEST(PartialOps, KronPartialTraceAdjointness) {
  CounterRng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = ginibre(3, 3, rng);
    const Matrix m = ginibre(12, 12, rng);
    const Complex lhs = inner(kron(a, identity(4)), m);
    const Complex rhs = inner(a, partial_trace(m, {3, 4}, Side::B));
    EXPECT_LE(std::abs(lhs - rhs), 1e-9);
  }
}

TEST(PartialOps, AntisymmetricMarginal) {
  const SymAntisym p = sym_antisym_projectors(3);
  EXPECT_LE((partial_trace(p.antisymmetric, {3, 3}, Side::A) - identity(3)).norm(), 1e-14);
}

TEST(PartialOps, ShapeMismatch) {
  expect_code([] { partial_trace(identity(5), {2, 2}, Side::A); }, "bad_shape");
  expect_code([] { partial_transpose(identity(4), {0, 4}, Side::A); }, "bad_shape");
}

TEST(Density, EigenvaluesSumToOne) {
  CounterRng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    EXPECT_NEAR(eigenvalues(random_density(7, 3, rng)).sum(), 1.0, 1e-10);
  }
}

TEST(Rng, DeterministicStreams) {
  CounterRng a(42, 3);
  CounterRng b(42, 3);
  CounterRng c(42, 4);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
}
