#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "catdom/errors.hpp"

namespace catdom {

/// Exact fraction in lowest terms with positive denominator.
///
/// gmpxx keeps results of arithmetic canonical; values built from a raw
/// numerator/denominator pair must go through make_rational().
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw InvalidArgument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "a", "a/b" or a decimal such as "-0.125" exactly.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw InvalidArgument("not a rational number: '" + std::string(text) + "'");
  };
  if (text.empty()) return fail();

  auto is_integer = [](std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  auto to_integer = [](std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    return Integer(std::string(s), 10);
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!is_integer(num) || !is_integer(den) || den.front() == '-' || den.front() == '+')
      return fail();
    Integer d = to_integer(den);
    if (d == 0) return fail();
    return make_rational(to_integer(num), d);
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if (whole.empty() && frac.empty()) return fail();
    for (char c : whole)
      if (!std::isdigit(static_cast<unsigned char>(c))) return fail();
    for (char c : frac)
      if (!std::isdigit(static_cast<unsigned char>(c))) return fail();
    std::string digits = std::string(whole) + std::string(frac);
    Integer num(digits.empty() ? std::string("0") : digits, 10);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    if (negative) num = -num;
    return make_rational(num, den);
  }

  if (!is_integer(text)) return fail();
  return Rational(to_integer(text));
}

/// "a" for integers, "a/b" otherwise.
inline std::string to_string(const Rational& q) { return q.get_str(10); }

inline Integer floor_div(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

inline Integer ceil_div(const Rational& q) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

/// Natural log of a positive integer without overflowing double.
inline double log_integer(const Integer& z) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

/// Natural log of q; -inf for zero. Accurate for values far outside double range.
inline double log_rational(const Rational& q) {
  if (sgn(q) < 0) throw InvalidArgument("log of negative rational");
  if (sgn(q) == 0) return -std::numeric_limits<double>::infinity();
  return log_integer(q.get_num()) - log_integer(q.get_den());
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace catdom
