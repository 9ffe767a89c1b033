#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "catdom/errors.hpp"
#include "catdom/point.hpp"
#include "catdom/random.hpp"
#include "catdom/rational.hpp"

namespace catdom {

namespace detail {

/// Rank of a set of vectors, by exact Gaussian elimination.
inline std::size_t rank_of(const std::vector<Point>& vectors, std::size_t dim) {
  std::vector<std::vector<Rational>> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) rows.push_back(v.coords());
  std::size_t rank = 0;
  for (std::size_t col = 0; col < dim && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && sgn(rows[pivot][col]) == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (sgn(rows[r][col]) == 0) continue;
      Rational f = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < dim; ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

/// Scales v to the primitive integer vector on the same ray.
inline Point primitive(const Point& v) {
  Integer l = 1;
  for (std::size_t i = 0; i < v.dim(); ++i) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v[i].get_den_mpz_t());
  Integer g = 0;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    Integer num = v[i].get_num() * (l / v[i].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
  }
  if (g == 0) return v;
  Point out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = v[i] * Rational(l) / Rational(g);
  return out;
}

/// Facet normals of the cone generated by `gens` in dimension <= 3.
/// Applied to facet normals it returns the extreme rays, since the two are
/// dual to each other. Requires the generators to span the space.
inline std::vector<Point> facets_low_dim(const std::vector<Point>& gens, std::size_t dim) {
  if (dim == 0 || dim > 3) throw InvalidArgument("cone conversion supports dimension 1 to 3 only");
  for (const auto& g : gens) g.require_dim(dim);
  if (rank_of(gens, dim) < dim)
    throw InvalidArgument("cone generators do not span the space (no interior)");

  std::vector<Point> candidates;
  if (dim == 1) {
    candidates.push_back(Point{Rational(1)});
    candidates.push_back(Point{Rational(-1)});
  } else if (dim == 2) {
    for (const auto& g : gens) {
      Point n{-g[1], g[0]};
      candidates.push_back(n);
      candidates.push_back(-n);
    }
  } else {
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j) {
        const Point& a = gens[i];
        const Point& b = gens[j];
        Point n{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
        candidates.push_back(n);
        candidates.push_back(-n);
      }
  }

  std::vector<Point> out;
  for (const auto& cand : candidates) {
    if (cand.is_zero()) continue;
    bool valid = true;
    std::vector<Point> tight;
    for (const auto& g : gens) {
      int s = sgn(dot(cand, g));
      if (s < 0) {
        valid = false;
        break;
      }
      if (s == 0) tight.push_back(g);
    }
    if (!valid || rank_of(tight, dim) + 1 < dim) continue;
    Point p = primitive(cand);
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

/// A nonzero element of the dual cone together with <t, unit>.
struct Direction {
  Point t;
  Rational normalization;
};

/// Polyhedral positive cone on Q^d with a designated order unit.
///
/// Carries both descriptions: generator rays, and inequality normals n_i with
/// x in the cone iff <n_i, x> >= 0 for all i. The normals generate the dual
/// cone. Construction checks that every ray satisfies every normal, that each
/// normal is tight on a facet's worth of rays, and that the unit is interior.
class Cone {
 public:
  Cone(std::size_t dim, std::vector<Point> rays, std::vector<Point> normals, Point unit)
      : dim_(dim), rays_(std::move(rays)), normals_(std::move(normals)), unit_(std::move(unit)) {
    if (dim_ == 0) throw InvalidArgument("cone dimension must be positive");
    unit_.require_dim(dim_);
    if (normals_.empty()) throw InvalidArgument("cone needs at least one inequality normal");
    if (rays_.empty()) throw InvalidArgument("cone needs at least one ray");
    for (const auto& r : rays_) r.require_dim(dim_);
    for (const auto& n : normals_) {
      n.require_dim(dim_);
      if (n.is_zero()) throw InvalidArgument("zero inequality normal");
    }
    for (const auto& n : normals_) {
      std::vector<Point> tight;
      for (const auto& r : rays_) {
        int s = sgn(dot(n, r));
        if (s < 0)
          throw InvalidArgument("ray " + to_string(r) + " violates normal " + to_string(n));
        if (s == 0) tight.push_back(r);
      }
      if (detail::rank_of(tight, dim_) + 1 < dim_)
        throw InvalidArgument("normal " + to_string(n) + " does not support a facet of the rays");
    }
    if (!is_order_unit(unit_))
      throw InvalidArgument("unit " + to_string(unit_) + " is not an interior point of the cone");
  }

  /// R_+ inside R, unit 1.
  static Cone halfline() {
    return Cone(1, {Point{Rational(1)}}, {Point{Rational(1)}}, Point{Rational(1)});
  }

  /// Nonnegative orthant in R^d; unit defaults to (1, ..., 1).
  static Cone orthant(std::size_t dim) {
    Point unit(dim);
    for (std::size_t i = 0; i < dim; ++i) unit[i] = 1;
    return orthant(dim, unit);
  }

  static Cone orthant(std::size_t dim, Point unit) {
    std::vector<Point> basis;
    for (std::size_t i = 0; i < dim; ++i) {
      Point e(dim);
      e[i] = 1;
      basis.push_back(e);
    }
    return Cone(dim, basis, basis, std::move(unit));
  }

  /// Fills in the normals from the rays; dimension 3 at most.
  static Cone from_rays(std::vector<Point> rays, Point unit) {
    std::size_t d = unit.dim();
    auto normals = detail::facets_low_dim(rays, d);
    return Cone(d, std::move(rays), std::move(normals), std::move(unit));
  }

  /// Fills in the rays from the normals; dimension 3 at most.
  static Cone from_normals(std::vector<Point> normals, Point unit) {
    std::size_t d = unit.dim();
    auto rays = detail::facets_low_dim(normals, d);
    return Cone(d, std::move(rays), std::move(normals), std::move(unit));
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Point>& rays() const noexcept { return rays_; }
  const std::vector<Point>& normals() const noexcept { return normals_; }
  const Point& unit() const noexcept { return unit_; }

  bool contains(const Point& x) const {
    x.require_dim(dim_);
    for (const auto& n : normals_)
      if (sgn(dot(n, x)) < 0) return false;
    return true;
  }

  /// x <= y, i.e. y - x lies in the cone.
  bool leq(const Point& x, const Point& y) const {
    x.require_dim(dim_);
    y.require_dim(dim_);
    for (const auto& n : normals_) {
      Rational s = 0;
      for (std::size_t i = 0; i < dim_; ++i) s += n[i] * (y[i] - x[i]);
      if (sgn(s) < 0) return false;
    }
    return true;
  }

  /// Interior point test: strictly positive on every normal, and the rays
  /// span the space so that the interior is nonempty.
  bool is_order_unit(const Point& u) const {
    u.require_dim(dim_);
    for (const auto& n : normals_)
      if (sgn(dot(n, u)) <= 0) return false;
    return detail::rank_of(rays_, dim_) == dim_;
  }

  /// Smallest k >= 0 with -k*unit <= x <= k*unit for all given points.
  Integer bounding_k(const std::vector<Point>& points) const {
    Rational worst = 0;
    for (const auto& x : points) {
      x.require_dim(dim_);
      for (const auto& n : normals_) {
        Rational v = dot(n, x);
        if (sgn(v) < 0) v = -v;
        v /= dot(n, unit_);
        if (v > worst) worst = v;
      }
    }
    return ceil_div(worst);
  }

  /// Deterministic sample of the dual cone, each normalized to <t, unit> = 1:
  /// the dual extreme rays, their pairwise midpoints, then n_samples random
  /// convex combinations drawn from SplitMix64(seed). Duplicates are dropped.
  std::vector<Direction> dual_directions(std::size_t n_samples, std::uint64_t seed) const {
    std::vector<Point> base;
    for (const auto& n : normals_) base.push_back(n * (Rational(1) / dot(n, unit_)));

    std::vector<Point> out;
    auto push = [&out](Point p) {
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
    };
    for (const auto& b : base) push(b);
    for (std::size_t i = 0; i < base.size(); ++i)
      for (std::size_t j = i + 1; j < base.size(); ++j)
        push((base[i] + base[j]) * make_rational(1, 2));

    SplitMix64 rng(seed);
    for (std::size_t s = 0; s < n_samples; ++s) {
      Point acc(dim_);
      Rational total = 0;
      for (const auto& b : base) {
        Rational w(static_cast<unsigned long>(1 + (rng.next() >> 48)));
        acc += w * b;
        total += w;
      }
      push(acc * (Rational(1) / total));
    }

    std::vector<Direction> dirs;
    dirs.reserve(out.size());
    for (auto& t : out) dirs.push_back(Direction{t, dot(t, unit_)});
    return dirs;
  }

 private:
  std::size_t dim_;
  std::vector<Point> rays_;
  std::vector<Point> normals_;
  Point unit_;
};

}  // namespace catdom
