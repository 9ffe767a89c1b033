#include <gtest/gtest.h>

#include "catdom/dominance.hpp"
#include "catdom/spectrum.hpp"
#include "oracles.hpp"

using namespace catdom;
using oracle::measure1;
using oracle::q;

namespace {

Measure strict_x() { return measure1({{"2/5", "1/10"}, {"3/5", "9/10"}}); }
Measure strict_y() { return measure1({{"1/2", "1/2"}, {"4/5", "1/2"}}); }

}  // namespace

TEST(MinN, Examples) {
  Cone line = Cone::halfline();
  auto a = min_n(delta1(0), delta1(1), line, 8);
  EXPECT_TRUE(a.found);
  EXPECT_EQ(a.n0, 1u);
  auto b = min_n(measure1({{"0", "1/2"}, {"1", "1/2"}}), measure1({{"0", "1/4"}, {"1", "3/4"}}), line, 8);
  EXPECT_EQ(b.n0, 1u);
  auto c = min_n(measure1({{"0", "1/4"}, {"1", "3/4"}}), measure1({{"0", "1/2"}, {"1", "1/2"}}), line, 8);
  EXPECT_FALSE(c.found);
  EXPECT_FALSE(c.n0.has_value());
  EXPECT_EQ(c.failures.back().n, 8u);
  EXPECT_THROW(min_n(delta1(0), delta1(1), line, 0), InvalidArgument);
}

TEST(MinN, CuratedPairBaseline) {
  auto res = min_n(strict_x(), strict_y(), Cone::halfline(), 64);
  ASSERT_TRUE(res.found);
  EXPECT_EQ(*res.n0, 14u);
  std::vector<unsigned long> failed;
  for (const auto& f : res.failures) failed.push_back(f.n);
  EXPECT_EQ(failed, (std::vector<unsigned long>{1, 2, 3, 4, 5, 7, 9, 11, 13}));
  // The first failure is the threshold 3/5.
  EXPECT_EQ(res.failures[0].upset, std::vector<Point>{Point{q("3/5")}});

  auto lx = oracle::law1(strict_x()), ly = oracle::law1(strict_y());
  for (unsigned n = 1; n <= 20; ++n)
    EXPECT_EQ(oracle::dominated_1d(oracle::power(lx, n), oracle::power(ly, n)),
              std::find(failed.begin(), failed.end(), n) == failed.end())
        << "n = " << n;
}

TEST(MinN, WorkerCountDoesNotMatter) {
  auto a = min_n(strict_x(), strict_y(), Cone::halfline(), 24, kDefaultAtomCap, 1);
  auto b = min_n(strict_x(), strict_y(), Cone::halfline(), 24, kDefaultAtomCap, 5);
  EXPECT_EQ(a.n0, b.n0);
  ASSERT_EQ(a.failures.size(), b.failures.size());
  for (std::size_t i = 0; i < a.failures.size(); ++i) {
    EXPECT_EQ(a.failures[i].n, b.failures[i].n);
    EXPECT_EQ(a.failures[i].upset, b.failures[i].upset);
  }
}

TEST(MinN, UpwardShiftDominatesImmediately) {
  SplitMix64 rng(41);
  Cone o = Cone::orthant(2);
  for (int trial = 0; trial < 10; ++trial) {
    Measure x(2);
    for (int i = 0; i < 3; ++i) x.add(Point{rng.uniform(-3, 3), rng.uniform(-3, 3)}, Rational(1, 3));
    Point a{make_rational(rng.uniform(0, 4), 3), make_rational(rng.uniform(0, 4), 3)};
    auto res = min_n(x, shift(x, a), o, 4);
    EXPECT_TRUE(res.found);
    EXPECT_EQ(res.n0, 1u);
  }
}

TEST(MinN, ConsistentWithSpectrum) {
  SplitMix64 rng(42);
  Cone line = Cone::halfline();
  for (int trial = 0; trial < 40; ++trial) {
    Measure x = measure1(oracle::random_law(rng, 3, 3)), y = measure1(oracle::random_law(rng, 3, 3));
    auto res = min_n(x, y, line, 10);
    if (res.found) {
      EXPECT_NE(spectral_verdict(x, y, line).verdict, SpectralVerdict::Violated);
    }
  }
}

TEST(Catalyst, LatticeHelpers) {
  EXPECT_EQ(coarsest_lattice_step({q("2/5"), q("3/5"), q("1/2"), q("4/5")}), q("1/10"));
  EXPECT_EQ(coarsest_lattice_step({0}), 1);
  EXPECT_EQ(lattice_grid(q("1/10"), 3), (std::vector<Rational>{0, q("1/10"), q("1/5")}));
}

TEST(Catalyst, DominatedPairNeedsNone) {
  auto cat = catalyst_1d(measure1({{"0", "1/2"}, {"1", "1/2"}}), measure1({{"0", "1/4"}, {"1", "3/4"}}), {0});
  ASSERT_TRUE(cat.has_value());
  EXPECT_TRUE(cat->verified);
  EXPECT_EQ(cat->z, delta1(0));
}

TEST(Catalyst, CuratedPairBaselines) {
  const Rational step = q("1/10");
  // Independent LP oracle: grids of 4 points fail, 6 and 31 points succeed.
  EXPECT_FALSE(catalyst_1d(strict_x(), strict_y(), lattice_grid(step, 2)).has_value());
  EXPECT_FALSE(catalyst_1d(strict_x(), strict_y(), lattice_grid(step, 4)).has_value());
  for (std::size_t points : {6u, 11u, 31u}) {
    auto cat = catalyst_1d(strict_x(), strict_y(), lattice_grid(step, points));
    ASSERT_TRUE(cat.has_value()) << points;
    EXPECT_TRUE(cat->verified);
    EXPECT_EQ(cat->z.mass(), 1);
    auto lx = oracle::convolve(oracle::law1(strict_x()), oracle::law1(cat->z));
    auto ly = oracle::convolve(oracle::law1(strict_y()), oracle::law1(cat->z));
    EXPECT_TRUE(oracle::dominated_1d(lx, ly));
    EXPECT_NE(spectral_verdict(strict_x(), strict_y(), Cone::halfline()).verdict, SpectralVerdict::Violated);
  }
}

TEST(Catalyst, ViolatedMeansNeverFound) {
  Measure x = measure1({{"0", "1/4"}, {"1", "3/4"}}), y = measure1({{"0", "1/2"}, {"1", "1/2"}});
  for (const auto& step : {q("1"), q("1/2"), q("1/3"), q("1/10")})
    for (std::size_t points : {1u, 5u, 20u}) EXPECT_FALSE(catalyst_1d(x, y, lattice_grid(step, points)).has_value());
}

TEST(GrowthExponent, Examples) {
  Cone line = Cone::halfline();
  EXPECT_EQ(growth_exponent(delta1(0), delta1(0), line), 0u);
  EXPECT_EQ(growth_exponent(delta1(0), delta1(3), line), 3u);
  Measure mu = measure1({{"0", "1/2"}, {"1", "1/2"}}), nu = measure1({{"0", "1/4"}, {"1", "3/4"}});
  unsigned long k = growth_exponent(mu, nu, line);
  // Exhaustive oracle.
  unsigned long expected = 0;
  while (!oracle::dominated_1d(oracle::law1(nu), oracle::law1(shift(mu, Point{Rational(expected)})))) ++expected;
  EXPECT_EQ(k, expected);
  EXPECT_EQ(k, 1u);
  EXPECT_LE(k, 2u);
}

TEST(GrowthExponent, WithinBoundOnRandomPairs) {
  SplitMix64 rng(43);
  Cone o = Cone::orthant(2);
  for (int trial = 0; trial < 15; ++trial) {
    Measure mu(2), nu(2);
    for (int i = 0; i < 3; ++i) {
      mu.add(Point{make_rational(rng.uniform(-9, 9), 2), make_rational(rng.uniform(-9, 9), 2)}, Rational(1, 3));
      nu.add(Point{make_rational(rng.uniform(-9, 9), 2), make_rational(rng.uniform(-9, 9), 2)}, Rational(1, 3));
    }
    unsigned long k = growth_exponent(mu, nu, o);
    auto pts = mu.support();
    for (const auto& p : nu.support()) pts.push_back(p);
    EXPECT_LE(Integer(k), 2 * o.bounding_k(pts));
    EXPECT_TRUE(oracle::dominated_orthant_brute(nu, shift(mu, Rational(k) * o.unit())));
    if (k > 0) {
      EXPECT_FALSE(oracle::dominated_orthant_brute(nu, shift(mu, Rational(k - 1) * o.unit())));
    }
  }
}
