#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "catdom/errors.hpp"
#include "catdom/rational.hpp"

namespace catdom {

/// Element of Q^d with exact coordinates.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim) : coords_(dim) {}
  explicit Point(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<Rational> coords) : coords_(coords) {}

  static Point zero(std::size_t dim) { return Point(dim); }

  std::size_t dim() const noexcept { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  Rational& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<Rational>& coords() const noexcept { return coords_; }

  bool is_zero() const {
    for (const auto& c : coords_)
      if (sgn(c) != 0) return false;
    return true;
  }

  Point& operator+=(const Point& o) {
    require_dim(o.dim());
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  Point& operator-=(const Point& o) {
    require_dim(o.dim());
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  Point& operator*=(const Rational& s) {
    for (auto& c : coords_) c *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator-(Point a) {
    for (auto& c : a.coords_) c = -c;
    return a;
  }
  friend Point operator*(const Rational& s, Point a) { return a *= s; }
  friend Point operator*(Point a, const Rational& s) { return a *= s; }

  friend bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  /// Lexicographic; only used for canonical ordering of atoms.
  friend bool operator<(const Point& a, const Point& b) { return a.coords_ < b.coords_; }

  void require_dim(std::size_t d) const {
    if (d != coords_.size()) throw DimensionMismatch(coords_.size(), d);
  }

 private:
  std::vector<Rational> coords_;
};

inline Rational dot(const Point& a, const Point& b) {
  a.require_dim(b.dim());
  Rational s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline std::string to_string(const Point& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) out += ", ";
    out += to_string(p[i]);
  }
  return out + ")";
}

}  // namespace catdom
