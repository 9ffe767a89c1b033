#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "catdom/cone.hpp"
#include "catdom/errors.hpp"
#include "catdom/measure.hpp"
#include "catdom/solvers.hpp"

namespace catdom {

/// Joint measure supported on the order relation, with marginals mu and nu.
struct CouplingPlan {
  std::map<std::pair<Point, Point>, Rational> entries;

  Measure first_marginal(std::size_t dim) const {
    Measure m(dim);
    for (const auto& [xy, w] : entries) m.add(xy.first, w);
    return m;
  }
  Measure second_marginal(std::size_t dim) const {
    Measure m(dim);
    for (const auto& [xy, w] : entries) m.add(xy.second, w);
    return m;
  }
};

/// Outcome of a stochastic-order test. Exactly one witness is set: a
/// coupling when dominated, otherwise the generators of a closed upset that
/// carries more mu-mass than nu-mass.
struct OrderVerdict {
  bool dominated = false;
  std::optional<CouplingPlan> coupling;
  std::optional<std::vector<Point>> upset;
};

/// Mass of the upset generated by `generators`.
inline Rational upset_mass(const Measure& mu, const Cone& cone, const std::vector<Point>& generators) {
  mu.require_dim(cone.dim());
  Rational total = 0;
  for (const auto& [x, w] : mu.atoms())
    for (const auto& g : generators)
      if (cone.leq(g, x)) {
        total += w;
        break;
      }
  return total;
}

inline void require_equal_mass(const Measure& mu, const Measure& nu) {
  Rational a = mu.mass(), b = nu.mass();
  if (a != b) throw MassMismatch(to_string(a), to_string(b));
}

/// Every support point of mu lies below every support point of nu.
inline bool supp_dominates(const Measure& mu, const Measure& nu, const Cone& cone) {
  mu.require_dim(nu.dim());
  mu.require_dim(cone.dim());
  for (const auto& [x, w] : mu.atoms())
    for (const auto& [y, v] : nu.atoms())
      if (!cone.leq(x, y)) return false;
  return true;
}

/// Stochastic order on the real line by comparison of closed upper tails at
/// every support point of either measure.
inline OrderVerdict leq_st_1d(const Measure& mu, const Measure& nu) {
  mu.require_dim(1);
  nu.require_dim(1);
  require_equal_mass(mu, nu);

  std::set<Rational> thresholds;
  for (const auto& [x, w] : mu.atoms()) thresholds.insert(x[0]);
  for (const auto& [y, v] : nu.atoms()) thresholds.insert(y[0]);

  // Walk thresholds from the top, accumulating both tails.
  auto it_mu = mu.atoms().rbegin();
  auto it_nu = nu.atoms().rbegin();
  Rational tail_mu = 0, tail_nu = 0;
  for (auto c = thresholds.rbegin(); c != thresholds.rend(); ++c) {
    while (it_mu != mu.atoms().rend() && it_mu->first[0] >= *c) tail_mu += (it_mu++)->second;
    while (it_nu != nu.atoms().rend() && it_nu->first[0] >= *c) tail_nu += (it_nu++)->second;
    if (tail_mu > tail_nu) {
      OrderVerdict v;
      v.upset = std::vector<Point>{Point{*c}};
      return v;
    }
  }

  // Quantile coupling: match mass in increasing order.
  CouplingPlan plan;
  auto a = mu.atoms().begin();
  auto b = nu.atoms().begin();
  Rational left_a = a == mu.atoms().end() ? Rational(0) : a->second;
  Rational left_b = b == nu.atoms().end() ? Rational(0) : b->second;
  while (a != mu.atoms().end() && b != nu.atoms().end()) {
    Rational q = left_a < left_b ? left_a : left_b;
    plan.entries[{a->first, b->first}] += q;
    left_a -= q;
    left_b -= q;
    if (sgn(left_a) == 0 && ++a != mu.atoms().end()) left_a = a->second;
    if (sgn(left_b) == 0 && ++b != nu.atoms().end()) left_b = b->second;
  }
  OrderVerdict v;
  v.dominated = true;
  v.coupling = std::move(plan);
  return v;
}

/// Stochastic order for a general polyhedral cone: mu <= nu iff mu can be
/// transported onto nu along pairs x <= y. Decided by exact max flow.
inline OrderVerdict leq_st(const Measure& mu, const Measure& nu, const Cone& cone) {
  mu.require_dim(nu.dim());
  mu.require_dim(cone.dim());
  require_equal_mass(mu, nu);

  if (supp_dominates(mu, nu, cone)) {
    // Product coupling is admissible when every pair is ordered.
    CouplingPlan plan;
    Rational m = mu.mass();
    if (sgn(m) > 0)
      for (const auto& [x, w] : mu.atoms())
        for (const auto& [y, v] : nu.atoms()) plan.entries[{x, y}] = w * v / m;
    OrderVerdict out;
    out.dominated = true;
    out.coupling = std::move(plan);
    return out;
  }

  auto xs = mu.support();
  auto ys = nu.support();
  solvers::TransportInstance inst;
  for (const auto& x : xs) inst.supplies.push_back(mu.weight(x));
  for (const auto& y : ys) inst.demands.push_back(nu.weight(y));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j)
      if (cone.leq(xs[i], ys[j])) inst.edges.emplace_back(i, j);

  auto result = solvers::transport_feasible(inst);
  OrderVerdict out;
  if (auto* plan = std::get_if<solvers::TransportPlan>(&result)) {
    CouplingPlan coupling;
    for (const auto& [ij, f] : plan->flow) coupling.entries[{xs[ij.first], ys[ij.second]}] = f;
    out.dominated = true;
    out.coupling = std::move(coupling);
  } else {
    const auto& cut = std::get<solvers::HallCut>(result);
    std::vector<Point> gens;
    for (std::size_t i : cut.supply_set) gens.push_back(xs[i]);
    out.upset = std::move(gens);
  }
  return out;
}

}  // namespace catdom
