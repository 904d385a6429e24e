#include "chandisc/norms.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace chandisc;

namespace {

ChannelPair identical_pair(int din, int dout, std::uint64_t seed) {
  CounterRng rng(seed);
  const Channel ch = make_channel(din, dout, random_kraus(din, dout, 2, rng));
  return {ch, ch, Family::custom, {}};
}

ChannelPair random_pair(int din, int dout, std::uint64_t seed) {
  CounterRng rng(seed);
  return {make_channel(din, dout, random_kraus(din, dout, 2, rng)),
          make_channel(din, dout, random_kraus(din, dout, 3, rng)), Family::custom, {}};
}

SeesawOptions quick(int restarts = 8) {
  SeesawOptions o;
  o.restarts = restarts;
  return o;
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

TEST(NeNorm, IdenticalChannelsGiveZero) {
  const NormEstimate e = ne_norm(identical_pair(3, 2, 1), quick());
  EXPECT_NEAR(e.value, 0.0, 1e-12);
  EXPECT_EQ(e.direction, Direction::exact);
}

TEST(NeNorm, WernerHolevo) {
  for (int d = 2; d <= 5; ++d) {
    const NormEstimate e = ne_norm(werner_holevo(d));
    EXPECT_NEAR(e.value, 4.0 / (d + 1), 1e-6) << d;
    EXPECT_EQ(e.direction, Direction::exact) << d;
  }
}

TEST(NeNorm, QubitExamples) {
  const NormEstimate e2 = ne_norm(qubit_example(2));
  EXPECT_NEAR(e2.value, std::numbers::sqrt2, 1e-6);
  EXPECT_EQ(e2.direction, Direction::exact);
  const NormEstimate e3 = ne_norm(qubit_example(3));
  EXPECT_NEAR(e3.value, 2.0 / std::sqrt(3.0), 1e-6);
  EXPECT_EQ(e3.direction, Direction::exact);
}

TEST(NeNorm, RandomPairsAreLowerBounds) {
  const NormEstimate e = ne_norm(random_pair(3, 3, 4), quick());
  EXPECT_EQ(e.direction, Direction::lower);
  EXPECT_GT(e.value, 0.0);
  EXPECT_LE(e.value, 2.0 + 1e-12);
  EXPECT_EQ(e.restarts, 8);
  EXPECT_EQ(e.restart_values.size(), 8u);
}

TEST(NeNorm, RejectsZeroRestarts) {
  expect_code([] { ne_norm(werner_holevo(2), quick(0)); }, "bad_param");
}

TEST(NeNormProperty, MatchesBlochGrid) {
  for (std::uint64_t seed : {5u, 6u, 7u}) {
    const ChannelPair pair = random_pair(2, 3, seed);
    const double grid = oracle::bloch_grid_ne(difference(pair));
    EXPECT_NEAR(ne_norm(pair, quick()).value, grid, 1e-4) << seed;
  }
  const double grid = oracle::bloch_grid_ne(difference(qubit_example(3)));
  EXPECT_NEAR(ne_norm(qubit_example(3)).value, grid, 1e-4);
}

TEST(FlaggedObjective, WeylQubitAtZero) {
  Vector psi = Vector::Zero(2);
  psi(0) = 1;
  EXPECT_NEAR(ne_norm_flagged_objective(weyl_flagged(2), psi), 4.0 / 3.0, 1e-12);
}

TEST(FlaggedObjective, MatchesGenericAndClosedForm) {
  for (int d : {2, 3}) {
    const ChannelPair pair = weyl_flagged(d);
    const HermitianMap phi = difference(pair);
    const std::vector<Matrix> weyl = weyl_operators(d);
    const double bound = 2.0 * std::sqrt(d / (d + 1.0));
    CounterRng rng(41, d);
    for (int t = 0; t < 100; ++t) {
      const Vector psi = random_unit_vector(d, rng);
      const double v = ne_norm_flagged_objective(pair, psi);
      EXPECT_NEAR(v, oracle::ne_objective(phi, psi), 1e-10);
      double closed = 0.0;
      for (const Matrix& w : weyl) closed += std::sqrt(std::max(0.0, 1.0 - std::norm(psi.dot(w * psi))));
      closed *= 2.0 / (d * d - 1);
      EXPECT_NEAR(v, closed, 1e-10);
      EXPECT_LE(v, bound + 1e-9);
    }
  }
}

TEST(FlaggedObjective, WrongFamily) {
  expect_code([] { ne_norm_flagged_objective(werner_holevo(2), Vector::Ones(2)); }, "bad_family");
}

TEST(RandomBinaryObjective, QubitValues) {
  const ChannelPair pair = qubit_example(2);
  Vector zero = Vector::Zero(2);
  zero(0) = 1;
  EXPECT_NEAR(ne_norm_random_binary_objective(pair, zero), 1.0, 1e-12);
  // Bloch vector (1, 0, 1)/sqrt2 in the xz plane.
  const Vector best = oracle::bloch_state(std::numbers::pi / 4, 0.0);
  EXPECT_NEAR(ne_norm_random_binary_objective(pair, best), std::numbers::sqrt2, 1e-12);
}

TEST(RandomBinaryObjective, MatchesGeneric) {
  CounterRng rng(43);
  for (int d : {2, 4}) {
    std::vector<Matrix> us;
    for (int k = 0; k < 5; ++k) us.push_back(haar_unitary(d, rng));
    const ChannelPair pair = random_binary_channels(d, us);
    const HermitianMap phi = difference(pair);
    for (int t = 0; t < 100; ++t) {
      const Vector psi = random_unit_vector(d, rng);
      EXPECT_NEAR(ne_norm_random_binary_objective(pair, psi), oracle::ne_objective(phi, psi), 1e-10);
    }
  }
  expect_code([] { ne_norm_random_binary_objective(werner_holevo(2), Vector::Ones(2)); }, "bad_family");
}

TEST(RandomBinaryNe, StructuredAgreesWithGenericSeesaw) {
  CounterRng rng(47);
  std::vector<Matrix> us;
  for (int k = 0; k < 4; ++k) us.push_back(haar_unitary(4, rng));
  ChannelPair pair = random_binary_channels(4, us);
  const NormEstimate fast = ne_norm(pair, quick(16));
  EXPECT_EQ(fast.method, "seesaw-structured");
  pair.family = Family::custom;
  const NormEstimate generic = ne_norm(pair, quick(16));
  EXPECT_EQ(generic.method, "seesaw");
  EXPECT_NEAR(fast.value, generic.value, 1e-6);
}

TEST(RandomBinaryNe, SingleIdentityIsPerfect) {
  const NormEstimate e = ne_norm_random_binary(2, {identity(2)}, quick());
  EXPECT_NEAR(e.value, 2.0, 1e-12);
}

TEST(DiamondNorm, IdenticalChannelsGiveZero) {
  EXPECT_NEAR(diamond_norm(identical_pair(2, 3, 2), quick()).value, 0.0, 1e-12);
}

TEST(DiamondNorm, WernerHolevoIsPerfect) {
  for (int d = 2; d <= 5; ++d) {
    const NormEstimate e = diamond_norm(werner_holevo(d), quick(4));
    EXPECT_NEAR(e.value, 2.0, 1e-6) << d;
    EXPECT_EQ(e.direction, Direction::exact);
  }
}

TEST(DiamondNorm, WeylFlaggedIsPerfect) {
  for (int d : {2, 3}) {
    EXPECT_NEAR(diamond_norm(weyl_flagged(d), quick(4)).value, 2.0, 1e-6) << d;
  }
}

TEST(DiamondNormProperty, UnitaryConjugationInvariance) {
  const ChannelPair pair = random_pair(2, 2, 9);
  CounterRng rng(53);
  const Matrix v = haar_unitary(2, rng);
  const Matrix w = haar_unitary(2, rng);
  auto conj = [&](const Channel& ch) {
    std::vector<Matrix> ks;
    for (const Matrix& k : ch.kraus) ks.push_back(w * k * v);
    return make_channel(ch.dim_in, ch.dim_out, ks);
  };
  const ChannelPair rotated{conj(pair.phi0), conj(pair.phi1), Family::custom, {}};
  SeesawOptions o = quick(16);
  EXPECT_NEAR(diamond_norm(pair, o).value, diamond_norm(rotated, o).value, 1e-8);
}

TEST(SeesawProperty, DiamondHistoriesAreMonotone) {
  SeesawOptions o = quick(6);
  o.record_history = true;
  for (std::uint64_t seed : {11u, 12u}) {
    const NormEstimate e = diamond_norm(random_pair(2, 3, seed), o);
    for (const auto& h : e.histories)
      for (std::size_t i = 1; i < h.size(); ++i) EXPECT_GE(h[i], h[i - 1] - 1e-9);
  }
}

TEST(PptNorm, IdenticalChannelsGiveZero) {
  EXPECT_NEAR(ppt_norm(identical_pair(2, 2, 3), quick(2)).value, 0.0, 1e-6);
}

TEST(PptNorm, WernerHolevoQubit) {
  SeesawOptions o = quick(3);
  o.record_history = true;
  const NormEstimate e = ppt_norm(werner_holevo(2), o);
  EXPECT_NEAR(e.value, 4.0 / 3.0, 1e-4);
  EXPECT_EQ(e.direction, Direction::exact);
  for (double v : e.restart_values) EXPECT_LE(v, 4.0 / 3.0 + 1e-4);
  for (const auto& h : e.histories)
    for (std::size_t i = 1; i < h.size(); ++i) EXPECT_GE(h[i], h[i - 1] - 1e-6);
}

TEST(PptNorm, SitsBetweenNeAndDiamond) {
  const ChannelPair pair = random_pair(2, 2, 13);
  const double ne = ne_norm(pair, quick()).value;
  const double ppt = ppt_norm(pair, quick(2)).value;
  EXPECT_GE(ppt, ne - 1e-6);
  EXPECT_LE(ppt, 2.0 + 1e-6);
}

TEST(SepBound, Arithmetic) {
  const NormEstimate ne3 = ne_norm(werner_holevo(3));
  ASSERT_EQ(ne3.direction, Direction::exact);
  const NormEstimate sep = sep_upper_bound_thm1(werner_holevo(3), ne3);
  EXPECT_NEAR(sep.value, 1.5, 1e-6);
  EXPECT_EQ(sep.direction, Direction::upper);

  const NormEstimate ne2 = ne_norm(werner_holevo(2));
  const NormEstimate sep2 = sep_upper_bound_thm1(werner_holevo(2), ne2);
  EXPECT_EQ(sep2.direction, Direction::exact);
  EXPECT_NEAR(sep2.value, 4.0 / 3.0, 1e-6);

  const ChannelPair same = identical_pair(2, 3, 5);
  EXPECT_NEAR(sep_upper_bound_thm1(same, ne_norm(same, quick())).value, 0.0, 1e-12);
}

TEST(SepBound, NeedsUpper) {
  const ChannelPair pair = random_pair(2, 2, 15);
  const NormEstimate ne = ne_norm(pair, quick());
  expect_code([&] { sep_upper_bound_thm1(pair, ne); }, "need_upper");
}

TEST(Thm1, TrivialMeasurementIsZero) {
  const ChannelPair pair = werner_holevo(2);
  ProductMeasurement m{{{identity(2), identity(2)}}};
  const Thm1Check c = thm1_product_bound_check(pair, projector(max_entangled(2)), m, 4.0 / 3.0);
  EXPECT_NEAR(c.lhs, 0.0, 1e-12);
  EXPECT_TRUE(c.holds);
}

TEST(Thm1, RandomRankOneOnWernerHolevo) {
  const ChannelPair pair = werner_holevo(2);
  const NormEstimate ne = ne_norm(pair);
  CounterRng rng(59);
  for (int t = 0; t < 1000; ++t) {
    const Matrix rho = random_density(4, 1 + t % 4, rng);
    const Thm1Check c = thm1_product_bound_check(pair, rho, random_product_measurement(2, 2, rng, true), ne);
    EXPECT_NEAR(c.rhs, 4.0 / 3.0, 1e-6);
    EXPECT_TRUE(c.holds) << c.lhs;
  }
}

TEST(Thm1, LocalHelstromOnQubitExample) {
  const ChannelPair pair = qubit_example(2);
  const NormEstimate ne = ne_norm(pair);
  const Matrix rho = projector(max_entangled(2));
  const Matrix reduced = apply_channel(difference(pair), 0.5 * identity(2));
  const EigenDecomposition e = hermitian_eig(reduced);
  ProductMeasurement m;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 2; ++k) {
      Matrix r = Matrix::Zero(2, 2);
      r(k, k) = 1;
      m.terms.push_back({projector(e.vectors.col(i)), r});
    }
  const Thm1Check c = thm1_product_bound_check(pair, rho, m, ne);
  EXPECT_NEAR(c.rhs, 2.0 * std::numbers::sqrt2, 1e-6);
  EXPECT_TRUE(c.holds);
  for (std::size_t j = 0; j < c.x.size(); ++j) EXPECT_LE(c.term_values[j], c.term_bounds[j] + 1e-7);
}

TEST(Thm1, RejectsBadMeasurement) {
  ProductMeasurement m{{{identity(2), 0.5 * identity(2)}}};
  expect_code([&] { thm1_product_bound_check(werner_holevo(2), projector(max_entangled(2)), m, 1.0); },
              "bad_measurement");
}

TEST(Thm1, RandomGeneralProductMeasurementsAreValid) {
  CounterRng rng(61);
  for (int t = 0; t < 20; ++t) {
    const ProductMeasurement m = random_product_measurement(3, 2, rng);
    EXPECT_NO_THROW(normalized_product_measurement(m, 3, 2));
  }
}

TEST(SeparableInputs, WernerHolevoNeverBeatsNe) {
  EXPECT_LE(separable_input_invariance(werner_holevo(2), 500), 1e-7);
  EXPECT_LE(separable_input_invariance(qubit_example(2), 500), 1e-7);
}

TEST(SeparableInputs, ProductStatesFactorOut) {
  const ChannelPair pair = werner_holevo(3);
  const HermitianMap phi = difference(pair);
  CounterRng rng(67);
  for (int t = 0; t < 20; ++t) {
    const Matrix sigma = random_density(3, 2, rng);
    const Matrix tau = random_density(3, 3, rng);
    const double v = trace_norm(apply_extended(phi, kron(sigma, tau), {3, 3}));
    EXPECT_NEAR(v, trace_norm(apply_channel(phi, sigma)), 1e-10);
    EXPECT_LE(v, 1.0 + 1e-9);
  }
}

TEST(SeparableInputs, EntangledInputExceedsNe) {
  const double v = trace_norm(apply_extended_pure(difference(werner_holevo(2)), max_entangled(2), 2));
  EXPECT_GT(v, 1.9);
}

TEST(Registry, UntrustedTagIsIgnored) {
  ChannelPair pair = random_pair(2, 2, 17);
  pair.family = Family::werner_holevo;
  pair.params.d = 2;
  EXPECT_TRUE(analytic_registry(pair).empty());
}
