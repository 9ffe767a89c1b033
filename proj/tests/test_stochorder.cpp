#include <gtest/gtest.h>

#include "catdom/stochorder.hpp"
#include "oracles.hpp"

using namespace catdom;
using oracle::measure1;
using oracle::measure2;
using oracle::q;

namespace {

void expect_witness_sound(const Measure& mu, const Measure& nu, const Cone& cone, const OrderVerdict& v) {
  if (v.dominated) {
    ASSERT_TRUE(v.coupling.has_value());
    EXPECT_FALSE(v.upset.has_value());
    EXPECT_EQ(v.coupling->first_marginal(mu.dim()), mu);
    EXPECT_EQ(v.coupling->second_marginal(mu.dim()), nu);
    for (const auto& [xy, w] : v.coupling->entries) {
      EXPECT_GT(w, 0);
      EXPECT_TRUE(cone.leq(xy.first, xy.second));
    }
  } else {
    ASSERT_TRUE(v.upset.has_value());
    EXPECT_FALSE(v.coupling.has_value());
    EXPECT_GT(upset_mass(mu, cone, *v.upset), upset_mass(nu, cone, *v.upset));
  }
}

}  // namespace

TEST(StochOrder, UpsetMass) {
  Measure half = measure1({{"0", "1/2"}, {"1", "1/2"}});
  EXPECT_EQ(upset_mass(half, Cone::halfline(), {Point{1}}), q("1/2"));
  EXPECT_EQ(upset_mass(half, Cone::halfline(), {Point{-5}}), 1);
  EXPECT_EQ(upset_mass(measure2({{"0", "1", "1/2"}, {"1", "0", "1/2"}}), Cone::orthant(2), {Point{1, 0}}),
            q("1/2"));
}

TEST(StochOrder, OneDimensionalExamples) {
  EXPECT_TRUE(leq_st_1d(delta1(0), delta1(1)).dominated);
  EXPECT_TRUE(leq_st_1d(measure1({{"0", "1/2"}, {"1", "1/2"}}), measure1({{"0", "1/4"}, {"1", "3/4"}})).dominated);
  auto v = leq_st_1d(measure1({{"0", "1/2"}, {"3", "1/2"}}), delta1(1));
  EXPECT_FALSE(v.dominated);
  ASSERT_TRUE(v.upset.has_value());
  EXPECT_EQ(*v.upset, std::vector<Point>{Point{3}});
  EXPECT_THROW(leq_st_1d(delta1(0), measure1({{"1", "1/2"}})), MassMismatch);
}

TEST(StochOrder, PlaneExamples) {
  Cone o = Cone::orthant(2);
  Measure anti = measure2({{"0", "1", "1/2"}, {"1", "0", "1/2"}});
  auto a = leq_st(anti, delta(Point{1, 1}), o);
  EXPECT_TRUE(a.dominated);
  expect_witness_sound(anti, delta(Point{1, 1}), o, a);

  Measure far = measure2({{"2", "0", "1/2"}, {"0", "2", "1/2"}});
  auto b = leq_st(anti, far, o);
  ASSERT_TRUE(b.dominated);
  EXPECT_EQ(b.coupling->entries.size(), 2u);
  EXPECT_EQ(b.coupling->entries.at({Point{0, 1}, Point{0, 2}}), q("1/2"));
  EXPECT_EQ(b.coupling->entries.at({Point{1, 0}, Point{2, 0}}), q("1/2"));

  Measure split = measure2({{"-1", "3", "1/2"}, {"3", "-1", "1/2"}});
  auto c = leq_st(delta(Point{1, 1}), split, o);
  EXPECT_FALSE(c.dominated);
  expect_witness_sound(delta(Point{1, 1}), split, o, c);

  EXPECT_THROW(leq_st(anti, delta(Point{1}), o), DimensionMismatch);
}

TEST(StochOrder, SuppDominates) {
  Cone line = Cone::halfline();
  Measure half = measure1({{"0", "1/2"}, {"1", "1/2"}});
  EXPECT_TRUE(supp_dominates(half, measure1({{"2", "1/3"}, {"3", "2/3"}}), line));
  EXPECT_TRUE(supp_dominates(half, delta1(1), line));
  EXPECT_FALSE(supp_dominates(measure1({{"0", "1/2"}, {"3", "1/2"}}), delta1(1), line));
  auto v = leq_st(half, delta1(1), line);
  EXPECT_TRUE(v.dominated);
  expect_witness_sound(half, delta1(1), line, v);
}

TEST(StochOrder, DecidersAgreeWithOracles) {
  SplitMix64 rng(77);
  Cone line = Cone::halfline();
  for (int trial = 0; trial < 300; ++trial) {
    auto a = oracle::random_law(rng, 6, 4), b = oracle::random_law(rng, 6, 4);
    Measure mu = measure1(a), nu = measure1(b);
    bool expected = oracle::dominated_1d(a, b);
    auto fast = leq_st_1d(mu, nu);
    auto flow = leq_st(mu, nu, line);
    EXPECT_EQ(fast.dominated, expected);
    EXPECT_EQ(flow.dominated, expected);
    expect_witness_sound(mu, nu, line, fast);
    expect_witness_sound(mu, nu, line, flow);
  }
  Cone o = Cone::orthant(2);
  for (int trial = 0; trial < 150; ++trial) {
    Measure mu(2), nu(2);
    for (int i = 0; i < 3; ++i) {
      mu.add(Point{rng.uniform(0, 3), rng.uniform(0, 3)}, Rational(1, 3));
      nu.add(Point{rng.uniform(0, 4), rng.uniform(0, 4)}, Rational(1, 3));
    }
    auto v = leq_st(mu, nu, o);
    EXPECT_EQ(v.dominated, oracle::dominated_orthant_brute(mu, nu));
    expect_witness_sound(mu, nu, o, v);
  }
}

TEST(StochOrder, ConvolutionMonotone) {
  SplitMix64 rng(8);
  Cone line = Cone::halfline();
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 40; ++trial) {
    Measure mu = measure1(oracle::random_law(rng, 4, 3)), nu = measure1(oracle::random_law(rng, 4, 3));
    if (!leq_st_1d(mu, nu).dominated) continue;
    ++checked;
    Measure k = measure1(oracle::random_law(rng, 4, 3));
    EXPECT_TRUE(leq_st(convolve(mu, k), convolve(nu, k), line).dominated);
  }
  EXPECT_GE(checked, 20);
}

TEST(StochOrder, ReflexiveAndTransitive) {
  SplitMix64 rng(12);
  Cone o = Cone::orthant(2);
  for (int trial = 0; trial < 60; ++trial) {
    Measure a(2);
    for (int i = 0; i < 3; ++i) a.add(Point{rng.uniform(0, 3), rng.uniform(0, 3)}, Rational(1, 3));
    // Build an increasing chain by pushing single atoms upward.
    Measure b = convolve(a, measure2({{"0", "0", "1/2"}, {"1", "0", "1/2"}}));
    Measure c = convolve(b, measure2({{"0", "1", "1/2"}, {"1", "1", "1/2"}}));
    EXPECT_TRUE(leq_st(a, a, o).dominated);
    EXPECT_TRUE(leq_st(a, b, o).dominated);
    EXPECT_TRUE(leq_st(b, c, o).dominated);
    EXPECT_TRUE(leq_st(a, c, o).dominated);
  }
}
