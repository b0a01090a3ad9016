#pragma once

#include <algorithm>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string_view>
#include <utility>
#include <vector>

#include "permsum/rational.hpp"

namespace permsum {

/// Vector of exact rational coordinates. Never empty.
class RationalVector {
 public:
  explicit RationalVector(std::vector<Rational> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw precondition_error("vector must have at least one coordinate");
  }

  RationalVector(std::initializer_list<long long> ints)
      : RationalVector([&] {
          std::vector<Rational> c;
          c.reserve(ints.size());
          for (long long x : ints) c.emplace_back(x);
          return c;
        }()) {}

  std::size_t size() const { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<Rational>& coords() const { return coords_; }
  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  bool is_constant() const {
    return std::all_of(coords_.begin(), coords_.end(), [&](const Rational& x) { return x == coords_[0]; });
  }

  bool all_distinct() const {
    std::set<Rational> seen(coords_.begin(), coords_.end());
    return seen.size() == coords_.size();
  }

  bool is_increasing() const {
    return std::is_sorted(coords_.begin(), coords_.end());
  }

  RationalVector sorted() const {
    std::vector<Rational> c = coords_;
    std::sort(c.begin(), c.end());
    return RationalVector(std::move(c));
  }

  Rational sum() const {
    Rational s = 0;
    for (const Rational& x : coords_) s += x;
    return s;
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) out += ',';
      out += to_string(coords_[i]);
    }
    return out;
  }

 private:
  std::vector<Rational> coords_;
};

/// Parses "1,-1/2,3" into a RationalVector.
inline RationalVector parse_vector(std::string_view s) {
  std::vector<Rational> coords;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    std::string_view tok = s.substr(start, comma == std::string_view::npos ? s.size() - start : comma - start);
    coords.push_back(parse_rational(tok));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return RationalVector(std::move(coords));
}

/// Affine map between an integer grid and the rational value space:
/// value = (grid + offset) / scale, exactly.
struct GridMap {
  Int scale{1};
  Int offset{0};

  Rational value_of(GridValue g) const { return Rational(Int(g) + offset, scale); }

  /// Grid window [lo_g, hi_g] covering exactly the grid points whose values
  /// lie in the closed rational interval [lo, hi].
  std::pair<Int, Int> window(const Rational& lo, const Rational& hi) const {
    return {rational_ceil(lo * scale - offset), rational_floor(hi * scale - offset)};
  }

  friend bool operator==(const GridMap&, const GridMap&) = default;
};

/// Minimal-scale integer embedding of a rational vector.
struct GridEmbedding {
  GridMap map;
  std::vector<GridValue> values;

  Rational value_of(GridValue g) const { return map.value_of(g); }
};

/// Embeds v onto the coarsest integer grid: scale is the LCM of all
/// coordinate denominators, offset 0. Reconstruction is exact.
inline GridEmbedding embed(const RationalVector& v) {
  Int scale = 1;
  for (const Rational& x : v) scale = boost::multiprecision::lcm(scale, denominator(x));
  GridEmbedding e;
  e.map.scale = scale;
  e.values.reserve(v.size());
  for (const Rational& x : v) e.values.push_back(to_grid_checked(numerator(x) * (scale / denominator(x))));
  return e;
}

}  // namespace permsum
