#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "permsum/errors.hpp"

namespace permsum {

// All exact paths run on arbitrary-precision integers and rationals;
// doubles appear only in Monte Carlo estimates and report rendering.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Values on an integer grid (scaled rationals). Engines check up front that
/// sums of products stay below 2^62 and refuse inputs that would overflow.
using GridValue = std::int64_t;

inline Int numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Int floor_div(const Int& a, const Int& b) {
  // b > 0; cpp_int division truncates toward zero
  Int q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
  Int q = a / b;
  if (a % b != 0 && a > 0) ++q;
  return q;
}

inline Int rational_floor(const Rational& r) { return floor_div(numerator(r), denominator(r)); }
inline Int rational_ceil(const Rational& r) { return ceil_div(numerator(r), denominator(r)); }

inline Int factorial(unsigned n) {
  Int f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

inline Int binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Int b = 1;
  for (unsigned i = 1; i <= k; ++i) {
    b *= n - k + i;
    b /= i;
  }
  return b;
}

inline GridValue to_grid_checked(const Int& x) {
  if (x > std::numeric_limits<GridValue>::max() || x < std::numeric_limits<GridValue>::min())
    throw std::overflow_error("grid value exceeds 64-bit range: " + x.str());
  return static_cast<GridValue>(x);
}

/// Parses "p/q" or a plain integer. No decimals: exact values must survive
/// the text boundary losslessly.
inline Rational parse_rational(std::string_view s) {
  auto bad = [&] { throw precondition_error("not a rational (expected p or p/q): '" + std::string(s) + "'"); };
  if (s.empty()) bad();
  auto is_int = [](std::string_view t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto to_int = [&](std::string_view t) {
    if (!is_int(t)) bad();
    if (t[0] == '+') t.remove_prefix(1);
    return Int(std::string(t));
  };
  auto slash = s.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(to_int(s));
    Int num = to_int(s.substr(0, slash));
    Int den = to_int(s.substr(slash + 1));
    if (den == 0) throw precondition_error("zero denominator: '" + std::string(s) + "'");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    bad();
  }
  return Rational{};  // unreachable
}

/// Renders as "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  Int n = numerator(r), d = denominator(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

}  // namespace permsum
