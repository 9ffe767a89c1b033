#pragma once

#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "catdom/errors.hpp"
#include "catdom/rational.hpp"

namespace catdom::solvers {

// ---------------------------------------------------------------------------
// Transportation feasibility
// ---------------------------------------------------------------------------

/// Bipartite transportation problem: ship supplies to demands along the
/// admissible edges only. Edges carry unbounded capacity.
struct TransportInstance {
  std::vector<Rational> supplies;
  std::vector<Rational> demands;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Exact shipment per edge; only edges with positive flow are present.
struct TransportPlan {
  std::map<std::pair<std::size_t, std::size_t>, Rational> flow;
};

/// Hall violation: the supplies in `supply_set` exceed the total demand of
/// every demand node they can reach.
struct HallCut {
  std::vector<std::size_t> supply_set;
  Rational supply_mass;
  Rational neighbour_demand;
};

using TransportResult = std::variant<TransportPlan, HallCut>;

inline void validate(const TransportInstance& inst) {
  Rational s = 0, d = 0;
  for (const auto& x : inst.supplies) {
    if (sgn(x) < 0) throw InvalidArgument("negative supply");
    s += x;
  }
  for (const auto& x : inst.demands) {
    if (sgn(x) < 0) throw InvalidArgument("negative demand");
    d += x;
  }
  if (s != d) throw InvalidArgument("supplies and demands have different totals");
  for (const auto& [i, j] : inst.edges)
    if (i >= inst.supplies.size() || j >= inst.demands.size())
      throw InvalidArgument("edge index out of range");
}

namespace detail {

/// Residual network for shortest-augmenting-path max flow on exact capacities.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes) : adj_(nodes) {}

  std::size_t add_edge(std::size_t from, std::size_t to, const Rational& cap) {
    std::size_t id = to_.size();
    to_.push_back(to);
    cap_.push_back(cap);
    adj_[from].push_back(id);
    to_.push_back(from);
    cap_.push_back(0);
    adj_[to].push_back(id + 1);
    return id;
  }

  /// Edmonds-Karp: BFS shortest augmenting paths until none remains.
  Rational max_flow(std::size_t source, std::size_t sink) {
    Rational total = 0;
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    while (true) {
      std::vector<std::size_t> via(adj_.size(), none);
      std::vector<bool> seen(adj_.size(), false);
      std::deque<std::size_t> queue{source};
      seen[source] = true;
      while (!queue.empty() && !seen[sink]) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t e : adj_[v]) {
          std::size_t w = to_[e];
          if (seen[w] || sgn(cap_[e]) <= 0) continue;
          seen[w] = true;
          via[w] = e;
          queue.push_back(w);
        }
      }
      if (!seen[sink]) return total;
      Rational bottleneck;
      bool first = true;
      for (std::size_t v = sink; v != source; v = to_[via[v] ^ 1]) {
        if (first || cap_[via[v]] < bottleneck) bottleneck = cap_[via[v]];
        first = false;
      }
      for (std::size_t v = sink; v != source; v = to_[via[v] ^ 1]) {
        cap_[via[v]] -= bottleneck;
        cap_[via[v] ^ 1] += bottleneck;
      }
      total += bottleneck;
    }
  }

  /// Nodes reachable from source in the residual graph.
  std::vector<bool> reachable(std::size_t source) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<std::size_t> queue{source};
    seen[source] = true;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t e : adj_[v])
        if (!seen[to_[e]] && sgn(cap_[e]) > 0) {
          seen[to_[e]] = true;
          queue.push_back(to_[e]);
        }
    }
    return seen;
  }

  /// Flow pushed along forward edge `id`.
  const Rational& flow_on(std::size_t id) const { return cap_[id + 1]; }

 private:
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> to_;
  std::vector<Rational> cap_;
};

}  // namespace detail

/// Decides feasibility by max flow: feasible iff the flow saturates all supply.
/// On failure, the supply nodes on the source side of the minimum cut form a
/// Hall violation.
inline TransportResult transport_feasible(const TransportInstance& inst) {
  validate(inst);
  const std::size_t m = inst.supplies.size();
  const std::size_t k = inst.demands.size();
  const std::size_t source = 0, sink = m + k + 1;
  detail::FlowNetwork net(m + k + 2);

  Rational total = 0;
  for (const auto& s : inst.supplies) total += s;
  // Middle edges never bind once they can carry the whole supply.
  const Rational unbounded = total + 1;

  for (std::size_t i = 0; i < m; ++i) net.add_edge(source, 1 + i, inst.supplies[i]);
  std::vector<std::size_t> edge_ids;
  edge_ids.reserve(inst.edges.size());
  for (const auto& [i, j] : inst.edges) edge_ids.push_back(net.add_edge(1 + i, 1 + m + j, unbounded));
  for (std::size_t j = 0; j < k; ++j) net.add_edge(1 + m + j, sink, inst.demands[j]);

  Rational flow = net.max_flow(source, sink);
  if (flow == total) {
    TransportPlan plan;
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
      const Rational& f = net.flow_on(edge_ids[e]);
      if (sgn(f) > 0) plan.flow[inst.edges[e]] += f;
    }
    return plan;
  }

  auto side = net.reachable(source);
  HallCut cut;
  cut.supply_mass = 0;
  cut.neighbour_demand = 0;
  std::vector<bool> neighbour(k, false);
  for (std::size_t i = 0; i < m; ++i)
    if (side[1 + i]) {
      cut.supply_set.push_back(i);
      cut.supply_mass += inst.supplies[i];
    }
  for (const auto& [i, j] : inst.edges)
    if (side[1 + i]) neighbour[j] = true;
  for (std::size_t j = 0; j < k; ++j)
    if (neighbour[j]) cut.neighbour_demand += inst.demands[j];
  if (!(cut.neighbour_demand < cut.supply_mass))
    throw std::logic_error("max-flow cut is not a Hall violation");
  return cut;
}

// ---------------------------------------------------------------------------
// Linear feasibility
// ---------------------------------------------------------------------------

struct LinearRow {
  std::vector<Rational> coeffs;
  Rational rhs;
};

/// Find x >= 0 with a.x <= b for every row in `less_equal` and a.x = b for
/// every row in `equal`.
struct LinearFeasibility {
  std::size_t num_vars = 0;
  std::vector<LinearRow> less_equal;
  std::vector<LinearRow> equal;
};

inline bool satisfies(const LinearFeasibility& lp, const std::vector<Rational>& x) {
  if (x.size() != lp.num_vars) return false;
  for (const auto& v : x)
    if (sgn(v) < 0) return false;
  auto eval = [&](const LinearRow& row) {
    Rational s = 0;
    for (std::size_t j = 0; j < lp.num_vars; ++j)
      if (sgn(row.coeffs[j]) != 0) s += row.coeffs[j] * x[j];
    return s;
  };
  for (const auto& row : lp.less_equal)
    if (eval(row) > row.rhs) return false;
  for (const auto& row : lp.equal)
    if (eval(row) != row.rhs) return false;
  return true;
}

/// Phase-1 simplex on a dense exact tableau with Bland's rule.
///
/// Returns a feasible point, or nullopt when the phase-1 optimum (sum of
/// artificial variables) is strictly positive.
inline std::optional<std::vector<Rational>> lp_feasible(const LinearFeasibility& lp) {
  const std::size_t n = lp.num_vars;
  for (const auto& row : lp.less_equal)
    if (row.coeffs.size() != n) throw InvalidArgument("row length differs from num_vars");
  for (const auto& row : lp.equal)
    if (row.coeffs.size() != n) throw InvalidArgument("row length differs from num_vars");

  const std::size_t n_le = lp.less_equal.size();
  const std::size_t m = n_le + lp.equal.size();

  // Columns: [x (n) | slacks (n_le) | artificials (as needed)], then rhs.
  std::vector<std::vector<Rational>> rows(m);
  std::vector<Rational> rhs(m);
  std::vector<std::size_t> basis(m);
  std::vector<std::size_t> needs_artificial;
  for (std::size_t i = 0; i < m; ++i) {
    const LinearRow& src = i < n_le ? lp.less_equal[i] : lp.equal[i - n_le];
    rows[i].assign(n + n_le, Rational(0));
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = src.coeffs[j];
    rhs[i] = src.rhs;
    if (i < n_le) rows[i][n + i] = 1;
    if (sgn(rhs[i]) < 0) {
      for (auto& v : rows[i]) v = -v;
      rhs[i] = -rhs[i];
    }
    if (i < n_le && sgn(rows[i][n + i]) > 0)
      basis[i] = n + i;
    else
      needs_artificial.push_back(i);
  }
  const std::size_t first_art = n + n_le;
  const std::size_t cols = first_art + needs_artificial.size();
  for (auto& r : rows) r.resize(cols, Rational(0));
  for (std::size_t a = 0; a < needs_artificial.size(); ++a) {
    rows[needs_artificial[a]][first_art + a] = 1;
    basis[needs_artificial[a]] = first_art + a;
  }

  // Reduced costs of "minimize sum of artificials".
  std::vector<Rational> cost(cols, Rational(0));
  Rational objective = 0;
  for (std::size_t i : needs_artificial) {
    for (std::size_t j = 0; j < first_art; ++j) cost[j] -= rows[i][j];
    objective -= rhs[i];
  }

  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (sgn(cost[j]) < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;

    std::size_t leave = m;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(rows[i][enter]) <= 0) continue;
      Rational ratio = rhs[i] / rows[i][enter];
      if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    // Phase 1 is bounded below by zero, so an entering column always has a pivot.
    if (leave == m) throw std::logic_error("unbounded phase-1 simplex");

    Rational piv = rows[leave][enter];
    for (auto& v : rows[leave]) v /= piv;
    rhs[leave] /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || sgn(rows[i][enter]) == 0) continue;
      Rational f = rows[i][enter];
      for (std::size_t j = 0; j < cols; ++j)
        if (sgn(rows[leave][j]) != 0) rows[i][j] -= f * rows[leave][j];
      rhs[i] -= f * rhs[leave];
    }
    Rational f = cost[enter];
    for (std::size_t j = 0; j < cols; ++j)
      if (sgn(rows[leave][j]) != 0) cost[j] -= f * rows[leave][j];
    objective -= f * rhs[leave];
    basis[leave] = enter;
  }

  if (sgn(objective) != 0) return std::nullopt;

  std::vector<Rational> x(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = rhs[i];
  if (!satisfies(lp, x)) throw std::logic_error("simplex returned an infeasible point");
  return x;
}

}  // namespace catdom::solvers
