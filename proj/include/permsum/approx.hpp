#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "permsum/rational.hpp"

namespace permsum {

// Directed-rounding rational brackets for the irrational quantities that
// appear in bound formulas (square roots, natural logs). Bound evaluators
// round every irrational factor in the favorable direction so a reported
// bound value never understates the true formula value. Default precision
// is 64 fractional bits.

inline constexpr unsigned kDefaultFracBits = 64;

inline Int isqrt_floor(const Int& x) {
  if (x < 0) throw precondition_error("isqrt of negative value");
  return boost::multiprecision::sqrt(x);
}

/// Largest multiple of 2^-bits that is <= sqrt(x).
inline Rational sqrt_lower(const Rational& x, unsigned bits = kDefaultFracBits) {
  if (x < 0) throw precondition_error("sqrt of negative value");
  Int one_shifted = Int(1) << bits;
  // sqrt(x)*2^bits = sqrt(p*4^bits/q); flooring the radicand keeps the root a lower bound
  Int radicand = floor_div(numerator(x) << (2 * bits), denominator(x));
  return Rational(isqrt_floor(radicand), one_shifted);
}

/// Smallest multiple of 2^-bits that is >= sqrt(x).
inline Rational sqrt_upper(const Rational& x, unsigned bits = kDefaultFracBits) {
  if (x < 0) throw precondition_error("sqrt of negative value");
  Int one_shifted = Int(1) << bits;
  Int radicand = ceil_div(numerator(x) << (2 * bits), denominator(x));
  Int root = isqrt_floor(radicand);
  if (root * root < radicand) ++root;
  return Rational(root, one_shifted);
}

namespace detail {

/// Upper bound on atanh(z) for rational z in [0, 1/2): truncated odd power
/// series plus a closed-form tail bound z^(2K+3)/((2K+3)(1-z^2)).
inline Rational atanh_upper(const Rational& z, unsigned bits) {
  if (z == 0) return Rational(0);
  // Terms shrink by at least z^2 <= 1/4 per step; stop once the tail bound
  // drops below 2^-(bits+2).
  Rational z2 = z * z;
  Rational term = z, sum = z;
  unsigned k = 1;
  Rational tail_scale = 1 / (1 - z2);
  Rational limit = Rational(1, Int(1) << (bits + 2));
  for (;;) {
    term *= z2;
    Rational tail = term * z2 / (2 * k + 3) * tail_scale;
    sum += term / (2 * k + 1);
    if (tail < limit) {
      sum += tail;
      break;
    }
    ++k;
  }
  return sum;
}

}  // namespace detail

/// Upper bound on ln(n) for integer n >= 1, rounded up to 2^-bits. Uses
/// ln(n) = a*ln2 + 2*atanh((r-1)/(r+1)) with r = n/2^a in [1, 2).
inline Rational log_upper(const Int& n, unsigned bits = kDefaultFracBits) {
  if (n < 1) throw precondition_error("log of value < 1");
  if (n == 1) return Rational(0);
  unsigned a = boost::multiprecision::msb(n);
  Int pow2 = Int(1) << a;
  Rational ln2_up = 2 * detail::atanh_upper(Rational(1, 3), bits + 8);
  Rational sum = int(a) * ln2_up;
  if (n != pow2) sum += 2 * detail::atanh_upper(Rational(n - pow2, n + pow2), bits + 8);
  return Rational(rational_ceil(sum * (Int(1) << bits)), Int(1) << bits);
}

/// Exact sign of a + b*sqrt(d) for rationals a, b and d >= 0.
inline int sign_with_sqrt(const Rational& a, const Rational& b, const Rational& d) {
  if (d < 0) throw precondition_error("sign_with_sqrt: negative radicand");
  auto sgn = [](const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); };
  if (b == 0 || d == 0) return sgn(a);
  if (b > 0 && a >= 0) return 1;
  if (b < 0 && a <= 0) return -1;
  // Opposite signs: compare a^2 against b^2*d.
  Rational lhs = a * a, rhs = b * b * d;
  int larger = lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
  if (larger == 0) return 0;
  return a > 0 ? larger : -larger;
}

}  // namespace permsum
