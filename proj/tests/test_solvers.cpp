#include <gtest/gtest.h>

#include "catdom/random.hpp"
#include "catdom/solvers.hpp"
#include "oracles.hpp"

using namespace catdom;
using namespace catdom::solvers;
using oracle::q;

namespace {

void expect_conserves(const TransportInstance& inst, const TransportPlan& plan) {
  std::vector<Rational> out(inst.supplies.size()), in(inst.demands.size());
  for (const auto& [e, f] : plan.flow) {
    EXPECT_GT(f, 0);
    EXPECT_NE(std::find(inst.edges.begin(), inst.edges.end(), e), inst.edges.end());
    out[e.first] += f;
    in[e.second] += f;
  }
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], inst.supplies[i]);
  for (std::size_t j = 0; j < in.size(); ++j) EXPECT_EQ(in[j], inst.demands[j]);
}

void expect_valid_cut(const TransportInstance& inst, const HallCut& cut) {
  Rational supply = 0, demand = 0;
  std::set<std::size_t> nbr;
  for (auto i : cut.supply_set) supply += inst.supplies[i];
  for (const auto& [i, j] : inst.edges)
    if (std::find(cut.supply_set.begin(), cut.supply_set.end(), i) != cut.supply_set.end()) nbr.insert(j);
  for (auto j : nbr) demand += inst.demands[j];
  EXPECT_EQ(supply, cut.supply_mass);
  EXPECT_EQ(demand, cut.neighbour_demand);
  EXPECT_GT(supply, demand);
}

LinearFeasibility lp_encoding(const TransportInstance& inst) {
  LinearFeasibility lp;
  lp.num_vars = inst.edges.size();
  for (std::size_t i = 0; i < inst.supplies.size(); ++i) {
    LinearRow row{std::vector<Rational>(lp.num_vars), inst.supplies[i]};
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
      if (inst.edges[e].first == i) row.coeffs[e] = 1;
    lp.equal.push_back(row);
  }
  for (std::size_t j = 0; j < inst.demands.size(); ++j) {
    LinearRow row{std::vector<Rational>(lp.num_vars), inst.demands[j]};
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
      if (inst.edges[e].second == j) row.coeffs[e] = 1;
    lp.equal.push_back(row);
  }
  return lp;
}

}  // namespace

TEST(Transport, Examples) {
  TransportInstance one{{1}, {1}, {{0, 0}}};
  auto r1 = transport_feasible(one);
  ASSERT_TRUE(std::holds_alternative<TransportPlan>(r1));
  EXPECT_EQ(std::get<TransportPlan>(r1).flow.at({0, 0}), 1);

  TransportInstance cross{{q("1/2"), q("1/2")}, {q("1/2"), q("1/2")}, {{0, 1}, {1, 0}}};
  auto r2 = transport_feasible(cross);
  ASSERT_TRUE(std::holds_alternative<TransportPlan>(r2));
  const auto& plan = std::get<TransportPlan>(r2);
  EXPECT_EQ(plan.flow.size(), 2u);
  EXPECT_EQ(plan.flow.at({0, 1}), q("1/2"));
  EXPECT_EQ(plan.flow.at({1, 0}), q("1/2"));

  TransportInstance hall{{1}, {q("1/2"), q("1/2")}, {{0, 0}}};
  auto r3 = transport_feasible(hall);
  ASSERT_TRUE(std::holds_alternative<HallCut>(r3));
  EXPECT_EQ(std::get<HallCut>(r3).supply_set, std::vector<std::size_t>{0});
  EXPECT_EQ(std::get<HallCut>(r3).neighbour_demand, q("1/2"));
}

TEST(Transport, Malformed) {
  EXPECT_THROW(transport_feasible({{1}, {q("1/2")}, {{0, 0}}}), InvalidArgument);
  EXPECT_THROW(transport_feasible({{1}, {1}, {{0, 3}}}), InvalidArgument);
  EXPECT_THROW(transport_feasible({{-1, 2}, {1}, {{0, 0}}}), InvalidArgument);
}

TEST(LinearFeasibility, Examples) {
  LinearFeasibility simplex{2, {}, {{{1, 1}, 1}}};
  auto x = lp_feasible(simplex);
  ASSERT_TRUE(x.has_value());
  EXPECT_TRUE(satisfies(simplex, *x));

  LinearFeasibility contradiction{2, {{{1, 1}, q("1/2")}}, {{{1, 1}, 1}}};
  EXPECT_FALSE(lp_feasible(contradiction).has_value());

  // Catalyst-shaped instance: five weights summing to one with tail rows.
  LinearFeasibility cat{5,
                        {{{q("1/5"), q("-1/10"), 0, q("1/10"), q("-1/5")}, 0},
                         {{q("2/5"), q("2/5"), q("-1/2"), q("-1/2"), 0}, 0},
                         {{0, 1, 0, 0, 0}, q("1/3")}},
                        {{{1, 1, 1, 1, 1}, 1}}};
  auto y = lp_feasible(cat);
  ASSERT_TRUE(y.has_value());
  EXPECT_TRUE(satisfies(cat, *y));
}

TEST(LinearFeasibility, Malformed) {
  EXPECT_THROW(lp_feasible({2, {{{1}, 1}}, {}}), InvalidArgument);
}

TEST(LinearFeasibility, NegativeRightHandSides) {
  // x1 - x2 <= -1 and x1 + x2 = 3 forces x2 >= 2.
  LinearFeasibility lp{2, {{{1, -1}, -1}}, {{{1, 1}, 3}}};
  auto x = lp_feasible(lp);
  ASSERT_TRUE(x.has_value());
  EXPECT_TRUE(satisfies(lp, *x));
  LinearFeasibility bad{2, {{{1, -1}, -4}}, {{{1, 1}, 3}}};
  EXPECT_FALSE(lp_feasible(bad).has_value());
}

TEST(Transport, AgreesWithLinearProgram) {
  SplitMix64 rng(21);
  int feasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t ns = 1 + rng.next() % 6, nd = 1 + rng.next() % 6;
    std::vector<Rational> s(ns), d(nd);
    Rational ts = 0, td = 0;
    for (auto& v : s) ts += (v = rng.uniform(1, 6));
    for (auto& v : d) td += (v = rng.uniform(1, 6));
    for (auto& v : s) v /= ts;
    for (auto& v : d) v /= td;
    TransportInstance inst{s, d, {}};
    for (std::size_t i = 0; i < ns; ++i)
      for (std::size_t j = 0; j < nd; ++j)
        if (rng.next() % 3 != 0) inst.edges.push_back({i, j});
    auto flow = transport_feasible(inst);
    auto lp = lp_feasible(lp_encoding(inst));
    EXPECT_EQ(std::holds_alternative<TransportPlan>(flow), lp.has_value()) << "trial " << trial;
    if (lp) {
      EXPECT_TRUE(satisfies(lp_encoding(inst), *lp));
    }
    if (auto* plan = std::get_if<TransportPlan>(&flow)) {
      expect_conserves(inst, *plan);
      ++feasible;
    } else {
      expect_valid_cut(inst, std::get<HallCut>(flow));
    }
  }
  EXPECT_GT(feasible, 10);
  EXPECT_LT(feasible, 140);
}
