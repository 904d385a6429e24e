#include "chandisc/haar.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace chandisc;

TEST(HaarSampler, DimensionOneIsUniformPhase) {
  HaarSampler s{3, 1};
  Complex mean = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Matrix u = sample_unitary(s);
    EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-12);
    mean += u(0, 0);
  }
  mean /= static_cast<double>(n);
  // E e^{i theta} = 0 with per-component variance 1/2.
  EXPECT_LE(std::abs(mean), 4.0 * std::sqrt(1.0 / n));
}

TEST(HaarSampler, Unitarity) {
  HaarSampler s{5, 4};
  for (int i = 0; i < 1000; ++i) EXPECT_LE(unitarity_defect(sample_unitary(s)), 1e-10);
}

TEST(HaarSampler, Determinism) {
  HaarSampler a{9, 3};
  HaarSampler b{9, 3};
  HaarSampler c{10, 3};
  for (int i = 0; i < 20; ++i) {
    const Matrix x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
  }
  EXPECT_EQ(HaarSampler({9, 3}).at(7), HaarSampler({9, 3}).at(7));
}

TEST(HaarSampler, FirstMoment) {
  HaarSampler s{11, 3};
  RunningStats st;
  for (int i = 0; i < 100000; ++i) st.add(std::norm(s.next()(0, 0)));
  EXPECT_NEAR(st.mean, 1.0 / 3.0, 3.0 * st.stderr_of_mean());
}

TEST(HaarSampler, LeftInvariance) {
  // Second and fourth moments of an entry are unchanged by a fixed rotation.
  const int d = 3;
  CounterRng rng(13);
  const Matrix v = haar_unitary(d, rng);
  HaarSampler s{17, d};
  RunningStats m2, m4, r2, r4;
  for (int i = 0; i < 50000; ++i) {
    const Matrix u = s.next();
    const double a = std::norm(u(0, 0));
    const double b = std::norm((v * u)(0, 0));
    m2.add(a);
    m4.add(a * a);
    r2.add(b);
    r4.add(b * b);
  }
  const double fourth = 2.0 / (d * (d + 1.0));
  EXPECT_NEAR(m4.mean, fourth, 4.0 * m4.stderr_of_mean());
  EXPECT_NEAR(r4.mean, fourth, 4.0 * r4.stderr_of_mean());
  EXPECT_NEAR(r2.mean, 1.0 / d, 4.0 * r2.stderr_of_mean());
  EXPECT_NEAR(m2.mean, r2.mean, 4.0 * std::hypot(m2.stderr_of_mean(), r2.stderr_of_mean()));
}

TEST(McIntegral, QubitValueIsHalf) {
  const McEstimate e = mc_ne_integral(2, 100000, Vector::Unit(2, 0), 21);
  EXPECT_EQ(e.samples, 100000u);
  EXPECT_NEAR(e.estimate, 0.5, 4.0 * e.standard_error);
}

TEST(McIntegral, StateIndependence) {
  CounterRng rng(23);
  const McEstimate a = mc_ne_integral(4, 50000, Vector::Unit(4, 0), 25);
  const McEstimate b = mc_ne_integral(4, 50000, random_unit_vector(4, rng), 27);
  EXPECT_LE(std::abs(a.estimate - b.estimate), 4.0 * std::hypot(a.standard_error, b.standard_error));
}

TEST(McIntegral, ThreadCountDoesNotMatter) {
  const Vector psi = Vector::Unit(4, 1);
  const McEstimate one = mc_ne_integral(4, 20000, psi, 29, 1);
  const McEstimate three = mc_ne_integral(4, 20000, psi, 29, 3);
  EXPECT_EQ(one.estimate, three.estimate);
  EXPECT_EQ(one.standard_error, three.standard_error);
}

TEST(McIntegral, StderrScaling) {
  const Vector psi = Vector::Unit(2, 0);
  const McEstimate big = mc_ne_integral(2, 100000, psi, 31);
  const McEstimate small = mc_ne_integral(2, 25000, psi, 33);
  EXPECT_NEAR(big.standard_error / small.standard_error, 0.5, 0.5 * 0.2);
}

TEST(McIntegral, Preconditions) {
  EXPECT_THROW(mc_ne_integral(3, 1000, Vector::Unit(3, 0), 1), Error);
  EXPECT_THROW(mc_ne_integral(2, 999, Vector::Unit(2, 0), 1), Error);
}

TEST(ClosedFormSum, SmallValuesExact) {
  EXPECT_EQ(closed_form_sum(2), 0.25);
  EXPECT_EQ(closed_form_sum(4), 0.21875);
  try {
    closed_form_sum(5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "bad_param");
  }
}

TEST(ClosedFormSum, MonotoneAndAsymptotic) {
  double prev = closed_form_sum(2);
  double worst = 0.0;
  for (int d = 4; d <= 200; d += 2) {
    const double s = closed_form_sum(d);
    EXPECT_LT(s, prev);
    prev = s;
    worst = std::max(worst, std::abs(s - haar_asymptote(d)) * d);
  }
  EXPECT_LE(worst, 1.0);
  EXPECT_LT(closed_form_sum(100000), 0.003);
}

TEST(HaarConvergence, SingleIdentityAndQubitExample) {
  EXPECT_NEAR(ne_norm_random_binary(2, {identity(2)}).value, 2.0, 1e-12);
  EXPECT_NEAR(ne_norm_random_binary(2, qubit_example_unitaries(2)).value, std::numbers::sqrt2, 1e-9);
}

TEST(HaarConvergence, LargeNStableAcrossSeeds) {
  std::vector<double> values;
  for (std::uint64_t seed : {1u, 2u, 3u}) values.push_back(ne_norm_haar_convergence(2, 10000, 8, seed).value);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  EXPECT_LE(*hi - *lo, 0.05);
  // Limit is twice the qubit integral.
  for (double v : values) EXPECT_NEAR(v, 1.0, 0.05);
}
