#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "chebfolio/chebyshev.hpp"
#include "oracles.hpp"

using namespace chebfolio;

TEST(EvalT, LowOrderIdentities) {
  EXPECT_EQ(eval_T(0, 0.3), 1.0);
  EXPECT_EQ(eval_T(1, 0.3), 0.3);
  EXPECT_DOUBLE_EQ(eval_T(2, 0.5), -0.5);
}

TEST(EvalT, MatchesTrigDefinitionAtDegreeFive) {
  std::mt19937_64 rng(5);
  for (double x : oracle::random_vector(rng, 100)) {
    EXPECT_NEAR(eval_T(5, x), std::cos(5.0 * std::acos(x)), 1e-12) << "x=" << x;
  }
}

TEST(EvalTTrig, Examples) {
  EXPECT_DOUBLE_EQ(eval_T_trig(3, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(eval_T_trig(3, -1.0), -1.0);
  EXPECT_NEAR(eval_T_trig(4, 0.0), 1.0, 1e-15);
}

TEST(EvalT, DomainHandling) {
  EXPECT_EQ(eval_T(3, 1.0 + 5e-13), 1.0);
  EXPECT_EQ(eval_T(3, -1.0 - 5e-13), -1.0);
  EXPECT_THROW(eval_T(3, 1.0 + 1e-9), Error);
  EXPECT_THROW(eval_T_trig(3, -1.5), Error);
  EXPECT_THROW(eval_T(2, std::nan("")), Error);
  try {
    eval_T(1, 2.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::numerical);
  }
}

TEST(EvalT, RecurrenceAgreesWithTrigUpTo512) {
  std::mt19937_64 rng(42);
  const auto xs = oracle::random_vector(rng, 1000);
  double worst = 0.0;
  for (unsigned n = 0; n <= 512; ++n) {
    for (double x : xs) worst = std::max(worst, std::abs(eval_T(n, x) - eval_T_trig(n, x)));
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(EvalT, Bounded) {
  std::mt19937_64 rng(7);
  const auto xs = oracle::random_vector(rng, 200);
  for (unsigned n = 0; n <= 512; n += 3) {
    for (double x : xs) ASSERT_LE(std::abs(eval_T(n, x)), 1.0 + 1e-10);
  }
}

TEST(EvalT, EndpointIdentities) {
  for (unsigned n = 0; n <= 512; ++n) {
    EXPECT_NEAR(eval_T(n, 1.0), 1.0, 1e-12);
    EXPECT_NEAR(eval_T(n, -1.0), n % 2 ? -1.0 : 1.0, 1e-12);
  }
}

TEST(EvalT, DiscreteOrthogonalityAtGaussNodes) {
  for (unsigned n : {4u, 17u, 64u}) {
    std::vector<double> nodes(n + 1);
    for (unsigned j = 0; j <= n; ++j) nodes[j] = std::cos(std::numbers::pi * (j + 0.5) / (n + 1));
    for (unsigned p = 0; p <= n; ++p) {
      for (unsigned q = p + 1; q <= n; ++q) {
        double s = 0.0;
        for (double x : nodes) s += eval_T(p, x) * eval_T(q, x);
        ASSERT_LE(std::abs(s), 1e-8 * (n + 1)) << "n=" << n << " p=" << p << " q=" << q;
      }
    }
  }
}

TEST(DomainMap, EndpointsAndInverse) {
  const DomainMap d(18631.0, 18978.0);
  EXPECT_EQ(d.forward(18631.0), -1.0);
  EXPECT_EQ(d.forward(18978.0), 1.0);
  std::mt19937_64 rng(1);
  for (double x : oracle::random_vector(rng, 500)) EXPECT_NEAR(d.forward(d.inverse(x)), x, 1e-12);
  EXPECT_THROW(DomainMap(3.0, 3.0), Error);
  EXPECT_THROW(DomainMap(4.0, 3.0), Error);
}

TEST(EvalSum, Examples) {
  EXPECT_EQ(eval_sum(ChebSum({5.0}, DomainMap(-3.0, 8.0)), 2.5), 5.0);
  EXPECT_EQ(eval_sum(ChebSum({0.0, 1.0}, DomainMap(0.0, 10.0)), 10.0), 1.0);
  const std::vector<double> c{1.0, 2.0, 3.0};
  // T0 + 2 T1 + 3 T2 at x = 0.5: 1 + 1 + 3 * (-0.5)
  EXPECT_NEAR(eval_sum(ChebSum(c, DomainMap(0.0, 1.0)), 0.75), oracle::naive_sum(c, 0.5), 1e-15);
  EXPECT_NEAR(eval_sum(ChebSum(c, DomainMap(0.0, 1.0)), 0.75), 0.5, 1e-15);
}

TEST(EvalSum, RefusesExtrapolation) {
  const ChebSum s({1.0, 2.0}, DomainMap(0.0, 1.0));
  EXPECT_THROW(eval_sum(s, 1.0 + 1e-9), Error);
  EXPECT_THROW(eval_sum(s, -0.5), Error);
}

TEST(ChebSum, Invariants) {
  EXPECT_THROW(ChebSum({}, DomainMap(0.0, 1.0)), Error);
  EXPECT_THROW(ChebSum({1.0, INFINITY}, DomainMap(0.0, 1.0)), Error);
}

TEST(EvalSum, ClenshawMatchesNaiveSummation) {
  std::mt19937_64 rng(300);
  for (std::size_t degree : {0u, 1u, 2u, 10u, 50u, 150u, 300u}) {
    const auto c = oracle::random_vector(rng, degree + 1);
    for (double x : oracle::random_vector(rng, 50)) {
      const double expect = oracle::naive_sum(c, x);
      const double got = clenshaw(c, x);
      const double scale = std::max(1.0, std::abs(expect));
      ASSERT_LE(std::abs(got - expect), 1e-9 * scale) << "degree " << degree << " x " << x;
    }
  }
}
