#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "catdom/errors.hpp"
#include "catdom/point.hpp"
#include "catdom/rational.hpp"

namespace catdom {

/// Finitely supported unsigned measure on Q^d.
///
/// Atoms are kept in a map keyed by exact point, so coinciding atoms are
/// always merged and iteration order is canonical. Every stored weight is
/// strictly positive.
class Measure {
 public:
  using AtomMap = std::map<Point, Rational>;

  explicit Measure(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw InvalidArgument("measure dimension must be positive");
  }

  /// Builds from a list of (point, weight); duplicate points are merged and
  /// zero weights dropped. Negative weights are rejected.
  Measure(std::size_t dim, const std::vector<std::pair<Point, Rational>>& atoms) : Measure(dim) {
    for (const auto& [x, w] : atoms) {
      if (sgn(w) < 0) throw InvalidArgument("negative atom weight " + to_string(w));
      add(x, w);
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  const AtomMap& atoms() const noexcept { return atoms_; }

  Rational mass() const {
    Rational m = 0;
    for (const auto& [x, w] : atoms_) m += w;
    return m;
  }

  /// Weight of the atom at x, zero if absent.
  Rational weight(const Point& x) const {
    auto it = atoms_.find(x);
    return it == atoms_.end() ? Rational(0) : it->second;
  }

  std::vector<Point> support() const {
    std::vector<Point> out;
    out.reserve(atoms_.size());
    for (const auto& [x, w] : atoms_) out.push_back(x);
    return out;
  }

  /// Adds w (>= 0) at x.
  void add(const Point& x, const Rational& w) {
    x.require_dim(dim_);
    if (sgn(w) == 0) return;
    auto [it, inserted] = atoms_.try_emplace(x, w);
    if (!inserted) it->second += w;
  }

  void require_dim(std::size_t d) const {
    if (d != dim_) throw DimensionMismatch(dim_, d);
  }

  friend bool operator==(const Measure& a, const Measure& b) {
    return a.dim_ == b.dim_ && a.atoms_ == b.atoms_;
  }
  friend bool operator!=(const Measure& a, const Measure& b) { return !(a == b); }

 private:
  std::size_t dim_;
  AtomMap atoms_;
};

inline Measure delta(const Point& x) {
  Measure m(x.dim());
  m.add(x, 1);
  return m;
}

/// Single atom at a 1-D coordinate.
inline Measure delta1(const Rational& x) { return delta(Point{x}); }

/// Atom-wise weighted sum of measures of equal dimension.
inline Measure mix(const std::vector<std::pair<Rational, Measure>>& terms) {
  if (terms.empty()) throw InvalidArgument("mix of an empty list");
  Measure out(terms.front().second.dim());
  for (const auto& [c, mu] : terms) {
    mu.require_dim(out.dim());
    if (sgn(c) < 0) throw InvalidArgument("negative mixing coefficient " + to_string(c));
    if (sgn(c) == 0) continue;
    for (const auto& [x, w] : mu.atoms()) out.add(x, c * w);
  }
  return out;
}

inline Measure convolve(const Measure& mu, const Measure& nu) {
  mu.require_dim(nu.dim());
  Measure out(mu.dim());
  for (const auto& [x, w] : mu.atoms())
    for (const auto& [y, v] : nu.atoms()) out.add(x + y, w * v);
  return out;
}

inline constexpr std::size_t kDefaultAtomCap = 1'000'000;

/// n-fold convolution by binary exponentiation. Throws AtomBudgetExceeded
/// as soon as any intermediate measure holds more than cap atoms.
inline Measure convolve_power(const Measure& mu, unsigned long n,
                              std::size_t cap = kDefaultAtomCap) {
  auto check = [cap](const Measure& m) {
    if (m.size() > cap) throw AtomBudgetExceeded(m.size(), cap);
  };
  Measure result = delta(Point::zero(mu.dim()));
  if (n == 0) return result;
  Measure base = mu;
  bool first = true;
  while (true) {
    if (n & 1UL) {
      result = first ? base : convolve(result, base);
      first = false;
      check(result);
    }
    n >>= 1;
    if (n == 0) break;
    base = convolve(base, base);
    check(base);
  }
  return result;
}

inline Measure shift(const Measure& mu, const Point& a) {
  mu.require_dim(a.dim());
  Measure out(mu.dim());
  for (const auto& [x, w] : mu.atoms()) out.add(x + a, w);
  return out;
}

/// Pushforward along x -> s*x.
inline Measure scale(const Measure& mu, const Rational& s) {
  Measure out(mu.dim());
  for (const auto& [x, w] : mu.atoms()) out.add(s * x, w);
  return out;
}

/// Pushforward along the linear functional x -> <t, x>.
inline Measure project(const Measure& mu, const Point& t) {
  mu.require_dim(t.dim());
  Measure out(1);
  for (const auto& [x, w] : mu.atoms()) out.add(Point{dot(t, x)}, w);
  return out;
}

/// Rounds every coordinate down to the lattice (step*Z)^d and merges atoms.
///
/// The result nu satisfies mu * delta(-2*step*u) <= nu <= mu * delta(2*step*u)
/// for the orthant order whenever every coordinate of u is at least 1/2.
inline Measure coarsen(const Measure& mu, const Point& u, const Rational& step) {
  mu.require_dim(u.dim());
  if (sgn(step) <= 0) throw InvalidArgument("grid step must be positive");
  Measure out(mu.dim());
  for (const auto& [x, w] : mu.atoms()) {
    Point y(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) y[i] = step * Rational(floor_div(x[i] / step));
    out.add(y, w);
  }
  return out;
}

inline void require_probability(const Measure& mu, const char* what = "measure") {
  if (mu.mass() != 1)
    throw InvalidArgument(std::string(what) + " must have total mass 1, got " +
                          to_string(mu.mass()));
}

}  // namespace catdom
