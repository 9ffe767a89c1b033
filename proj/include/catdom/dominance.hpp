#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "catdom/cone.hpp"
#include "catdom/measure.hpp"
#include "catdom/parallel.hpp"
#include "catdom/solvers.hpp"
#include "catdom/stochorder.hpp"

namespace catdom {

/// Order test that takes the tail-comparison path on the standard half-line.
inline OrderVerdict order_check(const Measure& mu, const Measure& nu, const Cone& cone) {
  if (cone.dim() == 1 && cone.normals().size() == 1 && sgn(cone.normals()[0][0]) > 0)
    return leq_st_1d(mu, nu);
  return leq_st(mu, nu, cone);
}

struct MinNFailure {
  unsigned long n;
  std::vector<Point> upset;
};

/// Smallest n0 such that X^{*n} <= Y^{*n} for every n in [n0, stable_through].
struct MinNResult {
  bool found = false;
  std::optional<unsigned long> n0;
  unsigned long stable_through = 0;
  std::vector<MinNFailure> failures;
};

inline MinNResult min_n(const Measure& x, const Measure& y, const Cone& cone, unsigned long n_max,
                        std::size_t cap = kDefaultAtomCap, std::size_t workers = 1) {
  if (n_max < 1) throw InvalidArgument("n_max must be at least 1");
  x.require_dim(cone.dim());
  y.require_dim(cone.dim());
  require_probability(x, "X");
  require_probability(y, "Y");

  auto verdicts = parallel_map(n_max, workers, [&](std::size_t i) {
    unsigned long n = i + 1;
    return order_check(convolve_power(x, n, cap), convolve_power(y, n, cap), cone);
  });

  MinNResult out;
  out.stable_through = n_max;
  unsigned long last_failure = 0;
  for (unsigned long n = 1; n <= n_max; ++n) {
    const auto& v = verdicts[n - 1];
    if (!v.dominated) {
      out.failures.push_back({n, *v.upset});
      last_failure = n;
    }
  }
  if (last_failure < n_max) {
    out.found = true;
    out.n0 = last_failure + 1;
  }
  return out;
}

/// Finitely supported Z with X + Z <= Y + Z, Z independent of X and Y.
struct Catalyst {
  Measure z{1};
  Rational grid_step;
  bool verified = false;
};

/// Largest s such that every given coordinate lies in s*Z; 1 when all are zero.
inline Rational coarsest_lattice_step(const std::vector<Rational>& values) {
  Integer num_gcd = 0, den_lcm = 1;
  for (const auto& v : values) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v.get_den_mpz_t());
  }
  if (num_gcd == 0) return 1;
  return make_rational(num_gcd, den_lcm);
}

/// {0, step, 2*step, ..., (count-1)*step}.
inline std::vector<Rational> lattice_grid(const Rational& step, std::size_t count) {
  std::vector<Rational> grid;
  grid.reserve(count);
  for (std::size_t j = 0; j < count; ++j) grid.push_back(step * static_cast<unsigned long>(j));
  return grid;
}

/// Searches for a catalyst supported on `grid` by solving a linear
/// feasibility problem in the catalyst weights. A nullopt answer only means
/// that no catalyst exists on this particular grid.
inline std::optional<Catalyst> catalyst_1d(const Measure& x, const Measure& y,
                                           const std::vector<Rational>& grid) {
  x.require_dim(1);
  y.require_dim(1);
  require_probability(x, "X");
  require_probability(y, "Y");
  if (grid.empty()) throw InvalidArgument("catalyst grid is empty");

  std::vector<Rational> points(grid.begin(), grid.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto tail = [](const Measure& m, const Rational& c) {
    Rational s = 0;
    for (auto it = m.atoms().rbegin(); it != m.atoms().rend() && it->first[0] >= c; ++it)
      s += it->second;
    return s;
  };

  std::set<Rational> thresholds;
  for (const auto& g : points) {
    for (const auto& [p, w] : x.atoms()) thresholds.insert(p[0] + g);
    for (const auto& [p, w] : y.atoms()) thresholds.insert(p[0] + g);
  }

  solvers::LinearFeasibility lp;
  lp.num_vars = points.size();
  for (const auto& c : thresholds) {
    solvers::LinearRow row;
    row.rhs = 0;
    bool nonzero = false;
    for (const auto& g : points) {
      row.coeffs.push_back(tail(x, c - g) - tail(y, c - g));
      nonzero = nonzero || sgn(row.coeffs.back()) != 0;
    }
    if (nonzero) lp.less_equal.push_back(std::move(row));
  }
  lp.equal.push_back({std::vector<Rational>(points.size(), Rational(1)), Rational(1)});

  auto weights = solvers::lp_feasible(lp);
  if (!weights) return std::nullopt;

  Catalyst cat;
  for (std::size_t j = 0; j < points.size(); ++j) cat.z.add(Point{points[j]}, (*weights)[j]);
  std::vector<Rational> diffs;
  for (std::size_t j = 1; j < points.size(); ++j) diffs.push_back(points[j] - points[0]);
  cat.grid_step = coarsest_lattice_step(diffs);
  cat.verified = leq_st_1d(convolve(x, cat.z), convolve(y, cat.z)).dominated;
  return cat;
}

/// Smallest k with nu <= delta(k*u) * mu. The search stops at twice the
/// bounding constant of the joint support, where a solution always exists.
inline unsigned long growth_exponent(const Measure& mu, const Measure& nu, const Cone& cone) {
  require_probability(mu, "mu");
  require_probability(nu, "nu");
  auto pts = mu.support();
  for (const auto& p : nu.support()) pts.push_back(p);
  Integer bound = 2 * cone.bounding_k(pts);
  for (unsigned long k = 0; Integer(k) <= bound; ++k) {
    Measure shifted = shift(mu, Rational(k) * cone.unit());
    if (order_check(nu, shifted, cone).dominated) return k;
  }
  throw std::logic_error("growth exponent exceeds its theoretical bound");
}

}  // namespace catdom
