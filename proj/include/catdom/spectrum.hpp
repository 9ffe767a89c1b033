#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "catdom/cone.hpp"
#include "catdom/errors.hpp"
#include "catdom/measure.hpp"
#include "catdom/parallel.hpp"

namespace catdom {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A point of the test spectrum: a normalized dual direction t and a radial
/// coordinate r. Finite nonzero r is the temperate point r*t, r = 0 the
/// arctic (mean) point, r = +inf and r = -inf the max- and min-tropical points.
struct SpectrumPoint {
  Direction direction;
  double radial = 0.0;
};

/// Probability law of <t, X>, prepared for repeated evaluation of its
/// normalized cumulant-generating function.
class ProjectedLaw {
 public:
  ProjectedLaw(const Measure& mu, const Point& t) {
    require_probability(mu);
    Measure z = project(mu, t);
    min_ = z.atoms().begin()->first[0];
    max_ = z.atoms().rbegin()->first[0];
    min_weight_ = z.atoms().begin()->second;
    max_weight_ = z.atoms().rbegin()->second;
    mean_ = 0;
    for (const auto& [x, w] : z.atoms()) mean_ += w * x[0];
    center_ = to_double(mean_);
    for (const auto& [x, w] : z.atoms()) {
      offsets_.push_back(to_double(x[0] - mean_));
      weights_.push_back(to_double(w));
      spread_ = std::max(spread_, std::abs(offsets_.back()));
    }
  }

  const Rational& min() const noexcept { return min_; }
  const Rational& max() const noexcept { return max_; }
  const Rational& mean() const noexcept { return mean_; }
  /// Probability of the largest and smallest value.
  const Rational& max_weight() const noexcept { return max_weight_; }
  const Rational& min_weight() const noexcept { return min_weight_; }

  /// Mean of Z under the exponentially tilted law proportional to exp(r Z).
  double tilted_mean(double r) const {
    double top = -kInf;
    for (double z : offsets_) top = std::max(top, r * z);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
      double e = weights_[i] * std::exp(r * offsets_[i] - top);
      num += e * offsets_[i];
      den += e;
    }
    return center_ + num / den;
  }

  /// log E[exp(r Z)] / r, continuously extended to r in {-inf, 0, +inf}.
  double lev(double r) const {
    if (r == kInf) return to_double(max_);
    if (r == -kInf) return to_double(min_);
    if (r == 0.0) return to_double(mean_);
    // Centering on the mean keeps both branches well conditioned.
    if (std::abs(r) * spread_ <= 1.0) {
      double s = 0.0;
      for (std::size_t i = 0; i < offsets_.size(); ++i) s += weights_[i] * std::expm1(r * offsets_[i]);
      return center_ + std::log1p(s) / r;
    }
    double top = -kInf;
    for (double z : offsets_) top = std::max(top, r * z);
    double s = 0.0;
    for (std::size_t i = 0; i < offsets_.size(); ++i) s += weights_[i] * std::exp(r * offsets_[i] - top);
    return center_ + (top + std::log(s)) / r;
  }

  /// log E[exp(r Z)].
  double log_mgf(double r) const {
    if (r == 0.0) return 0.0;
    return r * lev(r);
  }

 private:
  Rational min_, max_, mean_, min_weight_, max_weight_;
  double center_ = 0.0;
  double spread_ = 0.0;
  std::vector<double> offsets_;
  std::vector<double> weights_;
};

/// Logarithmic evaluation of a probability measure at a spectrum point.
inline double lev(const Measure& mu, const SpectrumPoint& sp) {
  return ProjectedLaw(mu, sp.direction.t).lev(sp.radial);
}

struct SpectrumOptions {
  std::size_t grid_points = 257;
  double margin_tol = 1e-9;
  double refine_tol = 1e-12;
  std::size_t n_samples = 32;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

enum class RayVerdict { StrictOnRay, TieOnRay, ViolatedOnRay, InconclusiveOnRay };
enum class SpectralVerdict { Strict, NonStrictOnly, Violated, Inconclusive };

inline const char* to_string(RayVerdict v) {
  switch (v) {
    case RayVerdict::StrictOnRay: return "StrictOnRay";
    case RayVerdict::TieOnRay: return "TieOnRay";
    case RayVerdict::ViolatedOnRay: return "ViolatedOnRay";
    case RayVerdict::InconclusiveOnRay: return "InconclusiveOnRay";
  }
  return "?";
}

inline const char* to_string(SpectralVerdict v) {
  switch (v) {
    case SpectralVerdict::Strict: return "Strict";
    case SpectralVerdict::NonStrictOnly: return "NonStrictOnly";
    case SpectralVerdict::Violated: return "Violated";
    case SpectralVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct LevSample {
  double theta;
  double radial;
  double lev_x;
  double lev_y;
  double margin() const { return lev_y - lev_x; }
};

/// Comparison of lev_X and lev_Y along one dual direction.
struct RayComparison {
  Direction direction;
  double min_margin = kInf;
  double argmin_radial = 0.0;
  RayVerdict verdict = RayVerdict::InconclusiveOnRay;
  /// Exact margins at r = -inf, 0, +inf.
  Rational margin_min_tropical, margin_arctic, margin_max_tropical;
  /// Grid samples ordered by theta, including the three exceptional points.
  std::vector<LevSample> samples;
};

struct SpectralReport {
  SpectralVerdict verdict = SpectralVerdict::Inconclusive;
  std::vector<RayComparison> rays;
  std::vector<SpectrumPoint> witnesses;
  /// True when the dual cone has several extreme rays, so that a Strict or
  /// NonStrictOnly verdict only covers the sampled directions.
  bool sampled_only = false;
  std::uint64_t seed = 0;
};

inline double radial_of_theta(double theta) {
  if (theta <= -std::numbers::pi / 2) return -kInf;
  if (theta >= std::numbers::pi / 2) return kInf;
  if (theta == 0.0) return 0.0;
  return std::tan(theta);
}

/// Sweeps margin(r) = lev_Y(t, r) - lev_X(t, r) over r = tan(theta).
///
/// The exceptional points r in {-inf, 0, +inf} are compared exactly. Local
/// minima of the grid are refined by golden-section search in theta.
inline RayComparison compare_on_ray(const Measure& x, const Measure& y, const Direction& dir,
                                    const SpectrumOptions& opts = {}) {
  ProjectedLaw lx(x, dir.t), ly(y, dir.t);
  RayComparison out;
  out.direction = dir;
  out.margin_min_tropical = ly.min() - lx.min();
  out.margin_arctic = ly.mean() - lx.mean();
  out.margin_max_tropical = ly.max() - lx.max();

  auto margin_at = [&](double r) { return ly.lev(r) - lx.lev(r); };
  auto consider = [&](double r, double m) {
    if (m < out.min_margin) {
      out.min_margin = m;
      out.argmin_radial = r;
    }
  };
  consider(-kInf, to_double(out.margin_min_tropical));
  consider(0.0, to_double(out.margin_arctic));
  consider(kInf, to_double(out.margin_max_tropical));

  const std::size_t n = opts.grid_points;
  const double pi = std::numbers::pi;
  std::vector<double> thetas;
  thetas.reserve(n + 2);
  thetas.push_back(-pi / 2);
  for (std::size_t k = 0; k < n; ++k) {
    // Integer numerator so that the middle sample is exactly theta = 0.
    auto num = static_cast<double>(2 * static_cast<long>(k + 1) - static_cast<long>(n + 1));
    thetas.push_back(pi * num / (2.0 * static_cast<double>(n + 1)));
  }
  thetas.push_back(pi / 2);

  out.samples.reserve(thetas.size());
  for (double th : thetas) {
    double r = radial_of_theta(th);
    out.samples.push_back({th, r, lx.lev(r), ly.lev(r)});
    consider(r, out.samples.back().margin());
  }

  auto theta_margin = [&](double th) { return margin_at(radial_of_theta(th)); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t k = 1; k + 1 < out.samples.size(); ++k) {
    double m = out.samples[k].margin();
    double ml = out.samples[k - 1].margin(), mr = out.samples[k + 1].margin();
    if (m > ml || m > mr || (m == ml && m == mr)) continue;
    double a = out.samples[k - 1].theta, b = out.samples[k + 1].theta;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = theta_margin(c), fd = theta_margin(d);
    while (b - a > opts.refine_tol) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = theta_margin(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = theta_margin(d);
      }
      if (c == d) break;
    }
    consider(radial_of_theta(c), fc);
    consider(radial_of_theta(d), fd);
  }

  bool exact_negative = sgn(out.margin_min_tropical) < 0 || sgn(out.margin_arctic) < 0 ||
                        sgn(out.margin_max_tropical) < 0;
  bool exact_tie = sgn(out.margin_min_tropical) == 0 || sgn(out.margin_arctic) == 0 ||
                   sgn(out.margin_max_tropical) == 0;
  if (exact_negative || out.min_margin < -opts.margin_tol)
    out.verdict = RayVerdict::ViolatedOnRay;
  else if (out.min_margin > opts.margin_tol)
    out.verdict = RayVerdict::StrictOnRay;
  else if (exact_tie)
    out.verdict = RayVerdict::TieOnRay;
  else
    out.verdict = RayVerdict::InconclusiveOnRay;
  if (exact_negative && out.min_margin >= 0) {
    // Float rounding hid an exact violation; point the witness at it.
    if (sgn(out.margin_arctic) < 0) out.argmin_radial = 0.0;
    else if (sgn(out.margin_max_tropical) < 0) out.argmin_radial = kInf;
    else out.argmin_radial = -kInf;
  }
  return out;
}

/// Runs compare_on_ray over the sampled dual directions of the cone.
inline SpectralReport spectral_verdict(const Measure& x, const Measure& y, const Cone& cone,
                                       const SpectrumOptions& opts = {}) {
  x.require_dim(cone.dim());
  y.require_dim(cone.dim());
  require_probability(x, "X");
  require_probability(y, "Y");

  auto dirs = cone.dual_directions(opts.n_samples, opts.seed);
  SpectralReport report;
  report.seed = opts.seed;
  report.sampled_only = cone.normals().size() > 1;
  report.rays = parallel_map(dirs.size(), opts.workers,
                             [&](std::size_t i) { return compare_on_ray(x, y, dirs[i], opts); });

  bool all_strict = true, any_violated = false, any_inconclusive = false;
  for (const auto& ray : report.rays) {
    all_strict = all_strict && ray.verdict == RayVerdict::StrictOnRay;
    if (ray.verdict == RayVerdict::InconclusiveOnRay) any_inconclusive = true;
    if (ray.verdict == RayVerdict::ViolatedOnRay && !any_violated) {
      any_violated = true;
      report.witnesses.push_back({ray.direction, ray.argmin_radial});
    }
  }
  if (any_violated)
    report.verdict = SpectralVerdict::Violated;
  else if (all_strict)
    report.verdict = SpectralVerdict::Strict;
  else if (!any_inconclusive)
    report.verdict = SpectralVerdict::NonStrictOnly;
  else
    report.verdict = SpectralVerdict::Inconclusive;
  return report;
}

}  // namespace catdom
