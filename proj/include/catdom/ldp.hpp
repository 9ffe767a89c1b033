#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <set>
#include <vector>

#include "catdom/cone.hpp"
#include "catdom/measure.hpp"
#include "catdom/parallel.hpp"
#include "catdom/solvers.hpp"
#include "catdom/spectrum.hpp"
#include "catdom/stochorder.hpp"

namespace catdom {

/// How a large-deviation value was obtained.
enum class Certification {
  ExactLimit,   // closed form or an exact limit (0, +inf, boundary atom)
  Bisection,    // root of the tilted-mean equation to 1e-12 in t
  GridRefined,  // grid plus local refinement; global optimality not certified
  LowerBound,   // supremum over a restricted family; true value may be larger
};

inline const char* to_string(Certification c) {
  switch (c) {
    case Certification::ExactLimit: return "exact-limit";
    case Certification::Bisection: return "bisection";
    case Certification::GridRefined: return "grid-refined";
    case Certification::LowerBound: return "lower-bound";
  }
  return "?";
}

struct RateResult {
  double value = 0.0;
  std::optional<SpectrumPoint> maximizer;
  Certification certified = Certification::GridRefined;
};

struct RateOptions {
  std::size_t grid_points = 257;
  double refine_tol = 1e-12;
  double bisection_tol = 1e-12;
  std::size_t max_iterations = 5000;
  std::size_t n_samples = 32;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

/// log E[exp(<t, X>)].
inline double log_mgf(const Measure& mu, const Point& t) {
  return ProjectedLaw(mu, t).log_mgf(1.0);
}

namespace detail {

/// Direction t/<t,u> with radial <t,u>, so that radial * direction = t.
inline SpectrumPoint as_spectrum_point(const Point& t, const Point& unit) {
  Rational norm = dot(t, unit);
  if (sgn(norm) == 0) return SpectrumPoint{Direction{t, norm}, 0.0};
  return SpectrumPoint{Direction{t * (Rational(1) / norm), Rational(1)}, to_double(norm)};
}

/// c lies in conv(supp mu) - cone, decided exactly by linear feasibility.
inline bool below_hull(const Measure& mu, const Point& c, const Cone& cone) {
  const auto pts = mu.support();
  const auto& rays = cone.rays();
  solvers::LinearFeasibility lp;
  lp.num_vars = pts.size() + rays.size();
  for (std::size_t i = 0; i < c.dim(); ++i) {
    solvers::LinearRow row;
    for (const auto& p : pts) row.coeffs.push_back(p[i]);
    for (const auto& r : rays) row.coeffs.push_back(-r[i]);
    row.rhs = c[i];
    lp.equal.push_back(std::move(row));
  }
  solvers::LinearRow simplex;
  simplex.coeffs.assign(lp.num_vars, Rational(0));
  for (std::size_t j = 0; j < pts.size(); ++j) simplex.coeffs[j] = 1;
  simplex.rhs = 1;
  lp.equal.push_back(std::move(simplex));
  return solvers::lp_feasible(lp).has_value();
}

/// Legendre transform along a single dual ray: sup_{s>=0} s*a - log E exp(s Z).
inline RateResult rate_on_ray(const ProjectedLaw& law, const Rational& a, const Point& ray,
                              const Point& unit, const RateOptions& opts) {
  RateResult out;
  auto point_at = [&](double s) {
    SpectrumPoint sp = as_spectrum_point(ray, unit);
    sp.radial = s == kInf ? kInf : s * sp.radial;
    return sp;
  };
  if (a > law.max()) {
    out.value = kInf;
    out.certified = Certification::ExactLimit;
    return out;
  }
  if (a <= law.mean()) {
    out.value = 0.0;
    out.maximizer = point_at(0.0);
    out.certified = Certification::ExactLimit;
    return out;
  }
  if (a == law.max()) {
    // Supremum approached as s -> inf: -log P(Z = max Z).
    out.value = -log_rational(law.max_weight());
    out.maximizer = point_at(kInf);
    out.certified = Certification::ExactLimit;
    return out;
  }
  const double target = to_double(a);
  double lo = 0.0, hi = 1.0;
  while (law.tilted_mean(hi) < target) hi *= 2.0;
  while (hi - lo > opts.bisection_tol * std::max(1.0, hi)) {
    double mid = 0.5 * (lo + hi);
    if (law.tilted_mean(mid) < target) lo = mid;
    else hi = mid;
  }
  double s = 0.5 * (lo + hi);
  out.value = s * target - law.log_mgf(s);
  out.maximizer = point_at(s);
  out.certified = Certification::Bisection;
  return out;
}

/// Double-precision atoms for the multi-dimensional ascent.
struct DenseAtoms {
  std::vector<std::vector<double>> points;
  std::vector<double> weights;

  explicit DenseAtoms(const Measure& mu) {
    for (const auto& [x, w] : mu.atoms()) {
      std::vector<double> p;
      for (const auto& c : x.coords()) p.push_back(to_double(c));
      points.push_back(std::move(p));
      weights.push_back(to_double(w));
    }
  }

  /// Returns log E exp(<t, X>) and stores the tilted mean in `mean`.
  double log_mgf(const std::vector<double>& t, std::vector<double>& mean) const {
    std::vector<double> e(points.size());
    double top = -kInf;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k < t.size(); ++k) v += t[k] * points[i][k];
      e[i] = v;
      top = std::max(top, v);
    }
    double total = 0.0;
    mean.assign(t.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      double p = weights[i] * std::exp(e[i] - top);
      total += p;
      for (std::size_t k = 0; k < t.size(); ++k) mean[k] += p * points[i][k];
    }
    for (auto& m : mean) m /= total;
    return top + std::log(total);
  }
};

}  // namespace detail

/// Rate function sup_{t in dual cone} <t, c> - log E exp(<t, X>).
///
/// Along a single dual ray the supremum is found by bisection on the tilted
/// mean. For several dual rays it is found by multi-start projected gradient
/// ascent in the coefficients of t over the dual generators.
inline RateResult rate_function(const Measure& mu, const Point& c, const Cone& cone,
                                const RateOptions& opts = {}) {
  mu.require_dim(cone.dim());
  c.require_dim(cone.dim());
  require_probability(mu);

  if (cone.normals().size() == 1) {
    const Point& n = cone.normals().front();
    return detail::rate_on_ray(ProjectedLaw(mu, n), dot(n, c), n, cone.unit(), opts);
  }

  if (!detail::below_hull(mu, c, cone)) {
    RateResult out;
    out.value = kInf;
    out.certified = Certification::ExactLimit;
    return out;
  }

  const std::size_t d = cone.dim();
  const auto& normals = cone.normals();
  const std::size_t m = normals.size();
  detail::DenseAtoms atoms(mu);
  std::vector<std::vector<double>> gens;
  for (const auto& n : normals) {
    std::vector<double> g;
    for (const auto& v : n.coords()) g.push_back(to_double(v));
    gens.push_back(std::move(g));
  }
  std::vector<double> target;
  for (const auto& v : c.coords()) target.push_back(to_double(v));

  auto t_of = [&](const std::vector<double>& lambda) {
    std::vector<double> t(d, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < d; ++k) t[k] += lambda[i] * gens[i][k];
    return t;
  };
  auto objective = [&](const std::vector<double>& lambda, std::vector<double>* grad) {
    auto t = t_of(lambda);
    std::vector<double> mean;
    double f = -atoms.log_mgf(t, mean);
    for (std::size_t k = 0; k < d; ++k) f += t[k] * target[k];
    if (grad) {
      grad->assign(m, 0.0);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < d; ++k) (*grad)[i] += gens[i][k] * (target[k] - mean[k]);
    }
    return f;
  };

  std::vector<std::vector<double>> starts{std::vector<double>(m, 0.0)};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> s(m, 0.0);
    s[i] = 1.0;
    starts.push_back(std::move(s));
  }

  auto ascend = [&](std::vector<double> lambda) {
    std::vector<double> grad;
    double f = objective(lambda, &grad);
    double step = 1.0;
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
      bool improved = false;
      while (step > 1e-16) {
        std::vector<double> trial(m);
        double moved = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          trial[i] = std::max(0.0, lambda[i] + step * grad[i]);
          moved += (trial[i] - lambda[i]) * grad[i];
        }
        if (moved <= 0.0) break;
        std::vector<double> trial_grad;
        double ft = objective(trial, &trial_grad);
        if (ft >= f + 1e-4 * moved) {
          lambda = std::move(trial);
          grad = std::move(trial_grad);
          improved = ft - f > 1e-15 * std::max(1.0, std::abs(f));
          f = ft;
          step *= 2.0;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    return std::make_pair(f, lambda);
  };

  auto runs = parallel_map(starts.size(), opts.workers, [&](std::size_t i) { return ascend(starts[i]); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].first > runs[best].first) best = i;

  RateResult out;
  out.value = std::max(0.0, runs[best].first);
  auto t = t_of(runs[best].second);
  Point tp(d);
  for (std::size_t k = 0; k < d; ++k) tp[k] = Rational(t[k]);
  out.maximizer = detail::as_spectrum_point(tp, cone.unit());
  out.certified = Certification::GridRefined;
  return out;
}

struct RelativeRateSample {
  double theta;
  double radial;
  double value;  // log E exp(r<t,X>) - log E exp(r<t,Y>)
};

/// g(r) on r = tan(theta), theta in [0, pi/2); the r = +inf limit is appended
/// when it is finite.
inline std::vector<RelativeRateSample> relative_rate_curve(const Measure& x, const Measure& y,
                                                           const Direction& dir,
                                                           std::size_t grid_points) {
  ProjectedLaw lx(x, dir.t), ly(y, dir.t);
  std::vector<RelativeRateSample> out;
  const double half_pi = std::numbers::pi / 2;
  for (std::size_t k = 0; k < grid_points; ++k) {
    double th = half_pi * static_cast<double>(k) / static_cast<double>(grid_points);
    double r = k == 0 ? 0.0 : std::tan(th);
    out.push_back({th, r, lx.log_mgf(r) - ly.log_mgf(r)});
  }
  if (lx.max() == ly.max())
    out.push_back({half_pi, kInf, log_rational(lx.max_weight() / ly.max_weight())});
  else if (lx.max() > ly.max())
    out.push_back({half_pi, kInf, kInf});
  return out;
}

/// sup over the dual cone of log E exp(<t,X>) - log E exp(<t,Y>).
inline RateResult relative_rate_rhs(const Measure& x, const Measure& y, const Cone& cone,
                                    const RateOptions& opts = {}) {
  x.require_dim(cone.dim());
  y.require_dim(cone.dim());
  require_probability(x, "X");
  require_probability(y, "Y");

  auto dirs = cone.dual_directions(opts.n_samples, opts.seed);
  auto per_dir = parallel_map(dirs.size(), opts.workers, [&](std::size_t i) {
    const Direction& dir = dirs[i];
    ProjectedLaw lx(x, dir.t), ly(y, dir.t);
    RateResult res;
    if (lx.max() > ly.max()) {
      res.value = kInf;
      res.maximizer = SpectrumPoint{dir, kInf};
      res.certified = Certification::ExactLimit;
      return res;
    }
    auto g = [&](double r) { return lx.log_mgf(r) - ly.log_mgf(r); };
    auto curve = relative_rate_curve(x, y, dir, opts.grid_points);
    res.value = 0.0;
    res.maximizer = SpectrumPoint{dir, 0.0};
    res.certified = Certification::GridRefined;
    for (const auto& s : curve)
      if (s.value > res.value) {
        res.value = s.value;
        res.maximizer = SpectrumPoint{dir, s.radial};
      }
    // Golden-section refinement around interior local maxima of the grid.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto theta_g = [&](double th) { return g(std::tan(th)); };
    for (std::size_t k = 1; k + 1 < opts.grid_points; ++k) {
      if (curve[k].value < curve[k - 1].value || curve[k].value < curve[k + 1].value) continue;
      double a = curve[k - 1].theta, b = curve[k + 1].theta;
      double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
      double fc = theta_g(c), fd = theta_g(d);
      while (b - a > opts.refine_tol && c != d) {
        if (fc >= fd) {
          b = d, d = c, fd = fc;
          c = b - inv_phi * (b - a);
          fc = theta_g(c);
        } else {
          a = c, c = d, fc = fd;
          d = a + inv_phi * (b - a);
          fd = theta_g(d);
        }
      }
      double th = fc >= fd ? c : d;
      double v = std::max(fc, fd);
      if (v > res.value) {
        res.value = v;
        res.maximizer = SpectrumPoint{dir, std::tan(th)};
      }
    }
    return res;
  });

  RateResult best = per_dir.front();
  for (const auto& r : per_dir)
    if (r.value > best.value) best = r;
  if (best.value == kInf) best.certified = Certification::ExactLimit;
  return best;
}

struct LhsResult {
  double value = 0.0;
  /// True when every closed upset was covered (1-D); otherwise only
  /// principal upsets were tried and the value is a lower bound.
  bool exact = true;
  std::optional<Point> argmax_threshold;
};

/// sup over closed upsets C of (1/n) log P(mean of n X-steps in C) /
/// P(mean of n Y-steps + eps*u in C), computed from exact convolutions.
/// A vanishing denominator with a positive numerator gives +inf; C with a
/// vanishing numerator is skipped.
inline LhsResult relative_rate_lhs(const Measure& x, const Measure& y, const Cone& cone,
                                   unsigned long n, const Rational& eps,
                                   std::size_t cap = kDefaultAtomCap) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (sgn(eps) <= 0) throw InvalidArgument("eps must be positive");
  x.require_dim(cone.dim());
  y.require_dim(cone.dim());
  require_probability(x, "X");
  require_probability(y, "Y");

  const Rational inv_n = make_rational(1, static_cast<long>(n));
  Measure xs = scale(convolve_power(x, n, cap), inv_n);
  Measure ys = shift(scale(convolve_power(y, n, cap), inv_n), eps * cone.unit());

  LhsResult out;
  out.exact = cone.dim() == 1;
  out.value = -kInf;
  auto consider = [&](const Point& c, const Rational& num, const Rational& den) {
    if (sgn(num) == 0) return;
    double v = sgn(den) == 0 ? kInf : log_rational(num / den) / static_cast<double>(n);
    if (v > out.value) {
      out.value = v;
      out.argmax_threshold = c;
    }
  };

  std::set<Point> thresholds;
  for (const auto& [p, w] : xs.atoms()) thresholds.insert(p);
  for (const auto& [p, w] : ys.atoms()) thresholds.insert(p);

  if (cone.dim() == 1 && sgn(cone.normals().front()[0]) > 0) {
    // Tails [c, inf) accumulated from the top.
    auto ix = xs.atoms().rbegin();
    auto iy = ys.atoms().rbegin();
    Rational tx = 0, ty = 0;
    for (auto c = thresholds.rbegin(); c != thresholds.rend(); ++c) {
      while (ix != xs.atoms().rend() && ix->first[0] >= (*c)[0]) tx += (ix++)->second;
      while (iy != ys.atoms().rend() && iy->first[0] >= (*c)[0]) ty += (iy++)->second;
      consider(*c, tx, ty);
    }
  } else {
    for (const auto& c : thresholds) {
      std::vector<Point> gen{c};
      consider(c, upset_mass(xs, cone, gen), upset_mass(ys, cone, gen));
    }
  }
  return out;
}

/// (1/n) log P(X_1 + ... + X_n >= n*c), exact up to the final logarithm.
inline double cramer_empirical(const Measure& mu, const Point& c, const Cone& cone, unsigned long n,
                               std::size_t cap = kDefaultAtomCap) {
  if (n < 1) throw InvalidArgument("n must be at least 1");
  mu.require_dim(cone.dim());
  c.require_dim(cone.dim());
  require_probability(mu);
  Measure sum = convolve_power(mu, n, cap);
  Rational mass = upset_mass(sum, cone, {Rational(static_cast<unsigned long>(n)) * c});
  return log_rational(mass) / static_cast<double>(n);
}

}  // namespace catdom
