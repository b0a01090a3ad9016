#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "permsum/grid.hpp"
#include "permsum/rational.hpp"

namespace permsum {

/// Closed interval [lo, hi] in the rational value space.
struct Interval {
  Rational lo;
  Rational hi;

  Interval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo > hi) throw precondition_error("interval endpoints out of order: " + to_string(lo) + " > " + to_string(hi));
  }

  static Interval point(const Rational& x) { return Interval(x, x); }

  Rational length() const { return hi - lo; }
};

/// Exact finite distribution: strictly increasing integer support with
/// arbitrary-precision counts. Immutable after construction; probabilities
/// are exact rationals count/total.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<GridValue> support, std::vector<Int> counts, GridMap grid)
      : support_(std::move(support)), counts_(std::move(counts)), grid_(std::move(grid)) {
    if (support_.empty()) throw precondition_error("distribution must have nonempty support");
    if (support_.size() != counts_.size()) throw precondition_error("support/count length mismatch");
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (i > 0 && support_[i - 1] >= support_[i]) throw precondition_error("support must be strictly increasing");
      if (counts_[i] <= 0) throw precondition_error("counts must be positive");
      total_ += counts_[i];
    }
  }

  static DiscreteDistribution from_counts(const std::map<GridValue, Int>& counts, GridMap grid) {
    std::vector<GridValue> support;
    std::vector<Int> cs;
    support.reserve(counts.size());
    cs.reserve(counts.size());
    for (const auto& [value, count] : counts) {
      if (count == 0) continue;
      support.push_back(value);
      cs.push_back(count);
    }
    return DiscreteDistribution(std::move(support), std::move(cs), std::move(grid));
  }

  const std::vector<GridValue>& support() const { return support_; }
  const std::vector<Int>& counts() const { return counts_; }
  const Int& total() const { return total_; }
  const GridMap& grid() const { return grid_; }
  std::size_t size() const { return support_.size(); }

  Rational value_at(std::size_t i) const { return grid_.value_of(support_[i]); }
  Rational probability_at(std::size_t i) const { return Rational(counts_[i], total_); }

  Rational min_value() const { return value_at(0); }
  Rational max_value() const { return value_at(support_.size() - 1); }

 private:
  std::vector<GridValue> support_;
  std::vector<Int> counts_;
  Int total_{0};
  GridMap grid_;
};

/// Exact P(S in I): sum of counts over support points inside the closed
/// interval, divided by the total.
inline Rational prob_mass(const DiscreteDistribution& d, const Interval& I) {
  auto [lo, hi] = d.grid().window(I.lo, I.hi);
  if (lo > hi) return Rational(0);
  // Window endpoints are exact; beyond the support range the mass is zero.
  const auto& sup = d.support();
  auto first = std::lower_bound(sup.begin(), sup.end(), lo, [](GridValue g, const Int& bound) { return Int(g) < bound; });
  Int acc = 0;
  for (auto it = first; it != sup.end() && Int(*it) <= hi; ++it) acc += d.counts()[static_cast<std::size_t>(it - sup.begin())];
  return Rational(acc, d.total());
}

/// Exact concentration function: the largest mass any closed interval of
/// length t can capture. An optimal interval can always be slid left until
/// its left endpoint hits a support point without losing mass, so the sup
/// is realized over windows anchored at support points.
inline Rational concentration_function(const DiscreteDistribution& d, const Rational& t) {
  if (t < 0) throw precondition_error("interval length must be nonnegative");
  // Window of value-length t anchored at grid point g covers grid points up
  // to g + floor(t * scale) exactly (offset cancels).
  Int width = rational_floor(t * d.grid().scale);
  const auto& sup = d.support();
  const auto& cnt = d.counts();
  Int best = 0, window = 0;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < sup.size(); ++hi) {
    window += cnt[hi];
    while (Int(sup[hi]) - Int(sup[lo]) > width) window -= cnt[lo++];
    if (window > best) best = window;
  }
  return Rational(best, d.total());
}

/// Largest point mass and the smallest support value attaining it.
struct MaxPointMass {
  Rational probability;
  Rational witness;
};

inline MaxPointMass max_point_mass_of(const DiscreteDistribution& d) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < d.size(); ++i)
    if (d.counts()[i] > d.counts()[arg]) arg = i;
  return {d.probability_at(arg), d.value_at(arg)};
}

}  // namespace permsum
