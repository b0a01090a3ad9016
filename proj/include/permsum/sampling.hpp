#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "permsum/distribution.hpp"
#include "permsum/exact_engines.hpp"
#include "permsum/grid.hpp"
#include "permsum/parallel.hpp"
#include "permsum/rng.hpp"

namespace permsum {

/// Monte Carlo estimate with its binomial standard error. Identical inputs
/// (seed, samples, instance) give bit-identical results on every platform
/// and for every thread count.
struct McEstimate {
  double estimate{0.0};
  double stderr_{0.0};
  std::int64_t samples{0};
  std::uint64_t seed{0};
};

namespace detail {

// Samples are drawn in fixed blocks; block b uses the sub-seed derived from
// (master seed, b), so the stream layout is independent of scheduling.
inline constexpr std::int64_t kMcBlockSize = 1 << 14;

inline std::int64_t block_count(std::int64_t samples) { return (samples + kMcBlockSize - 1) / kMcBlockSize; }

inline McEstimate finish_estimate(std::int64_t successes, std::int64_t samples, std::uint64_t seed) {
  double p = static_cast<double>(successes) / static_cast<double>(samples);
  McEstimate e;
  e.estimate = p;
  e.stderr_ = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  e.samples = samples;
  e.seed = seed;
  return e;
}

/// Clamps an exact grid window to the 64-bit range of sampled values; an
/// empty optional means no sampled value can ever fall inside.
inline std::optional<std::pair<GridValue, GridValue>> clamp_window(const Int& lo, const Int& hi) {
  if (lo > hi) return std::nullopt;
  constexpr GridValue kMin = std::numeric_limits<GridValue>::min();
  constexpr GridValue kMax = std::numeric_limits<GridValue>::max();
  if (lo > kMax || hi < kMin) return std::nullopt;
  GridValue l = lo <= kMin ? kMin : static_cast<GridValue>(lo);
  GridValue h = hi >= kMax ? kMax : static_cast<GridValue>(hi);
  return std::make_pair(l, h);
}

}  // namespace detail

/// A seeded source of exact grid values together with the map interpreting
/// them in the rational value space.
struct GridSampler {
  GridMap map;
  std::function<GridValue(Xoshiro256pp&)> draw;
};

inline GridSampler make_perm_sum_sampler(const RationalVector& w, const RationalVector& v) {
  if (w.size() != v.size())
    throw precondition_error("length mismatch: |w|=" + std::to_string(w.size()) + " |v|=" + std::to_string(v.size()));
  GridEmbedding we = embed(w), ve = embed(v);
  detail::check_product_range(w.size(), we.values, ve.values);
  GridSampler s;
  s.map.scale = we.map.scale * ve.map.scale;
  s.draw = [wg = we.values, vg = ve.values](Xoshiro256pp& rng) {
    std::vector<std::int32_t> perm = sample_permutation(wg.size(), rng);
    GridValue sum = 0;
    for (std::size_t i = 0; i < wg.size(); ++i) sum += wg[i] * vg[static_cast<std::size_t>(perm[i])];
    return sum;
  };
  return s;
}

inline GridSampler make_subset_sum_sampler(const RationalVector& A, int k, SubsetMode mode) {
  GridEmbedding e = embed(A);
  detail::require_distinct(e.values, "subset sum");
  std::size_t n = A.size();
  if (mode == SubsetMode::with_replacement) {
    if (k < 1) throw precondition_error("draw count k must be >= 1");
    detail::check_sum_range(static_cast<std::size_t>(k), e.values);
  } else {
    if (k < 0 || static_cast<std::size_t>(k) > n)
      throw precondition_error("subset size k=" + std::to_string(k) + " out of range [0, " + std::to_string(n) + "]");
    detail::check_sum_range(n, e.values);
  }
  GridSampler s;
  s.map = e.map;
  if (mode == SubsetMode::with_replacement) {
    s.draw = [values = e.values, k](Xoshiro256pp& rng) {
      GridValue sum = 0;
      for (int i = 0; i < k; ++i) sum += values[static_cast<std::size_t>(rng.bounded(values.size()))];
      return sum;
    };
  } else {
    s.draw = [values = e.values, k](Xoshiro256pp& rng) mutable {
      std::vector<GridValue> pool = values;
      partial_shuffle(pool, static_cast<std::size_t>(k), rng);
      GridValue sum = 0;
      for (int i = 0; i < k; ++i) sum += pool[static_cast<std::size_t>(i)];
      return sum;
    };
  }
  return s;
}

/// One draw of the k-element subset sum of A.
inline GridValue sample_subset_sum(const RationalVector& A, int k, SubsetMode mode, Xoshiro256pp& rng) {
  return make_subset_sum_sampler(A, k, mode).draw(rng);
}

/// Fraction of samples landing in each of several exact grid windows, all
/// evaluated on one shared sample stream.
inline std::vector<McEstimate> estimate_window_masses(const GridSampler& sampler,
                                                      const std::vector<std::pair<Int, Int>>& windows,
                                                      std::int64_t samples, std::uint64_t seed, unsigned threads = 0) {
  if (samples < 1) throw precondition_error("sample count must be >= 1");
  std::vector<std::optional<std::pair<GridValue, GridValue>>> clamped;
  clamped.reserve(windows.size());
  for (const auto& [lo, hi] : windows) clamped.push_back(detail::clamp_window(lo, hi));

  std::int64_t nblocks = detail::block_count(samples);
  std::vector<std::vector<std::int64_t>> successes(static_cast<std::size_t>(nblocks),
                                                   std::vector<std::int64_t>(windows.size(), 0));
  for_each_index(static_cast<std::size_t>(nblocks), threads, [&](std::size_t b) {
    Xoshiro256pp rng(derive_subseed(seed, b));
    std::int64_t begin = static_cast<std::int64_t>(b) * detail::kMcBlockSize;
    std::int64_t len = std::min(detail::kMcBlockSize, samples - begin);
    auto& mine = successes[b];
    for (std::int64_t s = 0; s < len; ++s) {
      GridValue x = sampler.draw(rng);
      for (std::size_t wdx = 0; wdx < clamped.size(); ++wdx)
        if (clamped[wdx] && x >= clamped[wdx]->first && x <= clamped[wdx]->second) ++mine[wdx];
    }
  });

  std::vector<McEstimate> out;
  out.reserve(windows.size());
  for (std::size_t wdx = 0; wdx < windows.size(); ++wdx) {
    std::int64_t hits = 0;
    for (const auto& blk : successes) hits += blk[wdx];
    out.push_back(detail::finish_estimate(hits, samples, seed));
  }
  return out;
}

/// Fraction of sampled permutations with w_pi . v inside the closed interval
/// I. Membership is tested on exact grid integers, so boundary values are
/// never misclassified.
inline McEstimate estimate_interval_mass(const RationalVector& w, const RationalVector& v, const Interval& I,
                                         std::int64_t samples, std::uint64_t seed, unsigned threads = 0) {
  GridSampler s = make_perm_sum_sampler(w, v);
  auto [lo, hi] = s.map.window(I.lo, I.hi);
  return estimate_window_masses(s, {{lo, hi}}, samples, seed, threads)[0];
}

inline McEstimate estimate_point_mass(const RationalVector& w, const RationalVector& v, const Rational& x,
                                      std::int64_t samples, std::uint64_t seed, unsigned threads = 0) {
  return estimate_interval_mass(w, v, Interval::point(x), samples, seed, threads);
}

/// Empirical concentration function: draws samples, then slides the exact
/// window maximum over the empirical support. The estimator is positively
/// biased for Q (it maximizes over windows of a noisy histogram); the bias
/// is reported rather than corrected, and stderr comes from a seeded
/// bootstrap over `resamples` replicates.
inline McEstimate estimate_concentration_function(const GridSampler& sampler, const Rational& t, std::int64_t samples,
                                                  std::uint64_t seed, unsigned threads = 0, int resamples = 100) {
  if (t < 0) throw precondition_error("interval length must be nonnegative");
  if (samples < 1) throw precondition_error("sample count must be >= 1");
  if (resamples < 2) throw precondition_error("bootstrap needs at least 2 resamples");

  std::int64_t nblocks = detail::block_count(samples);
  std::vector<std::map<GridValue, std::int64_t>> hists(static_cast<std::size_t>(nblocks));
  for_each_index(static_cast<std::size_t>(nblocks), threads, [&](std::size_t b) {
    Xoshiro256pp rng(derive_subseed(seed, b));
    std::int64_t begin = static_cast<std::int64_t>(b) * detail::kMcBlockSize;
    std::int64_t len = std::min(detail::kMcBlockSize, samples - begin);
    for (std::int64_t s = 0; s < len; ++s) ++hists[b][sampler.draw(rng)];
  });
  std::map<GridValue, std::int64_t> merged;
  for (const auto& h : hists)
    for (const auto& [value, count] : h) merged[value] += count;

  std::vector<GridValue> support;
  std::vector<std::int64_t> counts;
  support.reserve(merged.size());
  for (const auto& [value, count] : merged) {
    support.push_back(value);
    counts.push_back(count);
  }

  Int width = rational_floor(t * sampler.map.scale);
  auto window_max = [&](const std::vector<std::int64_t>& cs) {
    std::int64_t best = 0, window = 0;
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < support.size(); ++hi) {
      window += cs[hi];
      while (Int(support[hi]) - Int(support[lo]) > width) window -= cs[lo++];
      best = std::max(best, window);
    }
    return best;
  };

  double q_hat = static_cast<double>(window_max(counts)) / static_cast<double>(samples);

  // Bootstrap streams use block indices above the sampling blocks.
  std::vector<std::int64_t> cumulative(counts.size());
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) cumulative[i] = (acc += counts[i]);
  std::vector<double> replicates(static_cast<std::size_t>(resamples));
  for (int r = 0; r < resamples; ++r) {
    Xoshiro256pp rng(derive_subseed(seed, static_cast<std::uint64_t>(nblocks + r)));
    std::vector<std::int64_t> resampled(counts.size(), 0);
    for (std::int64_t s = 0; s < samples; ++s) {
      std::int64_t u = static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(samples)));
      std::size_t idx = static_cast<std::size_t>(
          std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
      ++resampled[idx];
    }
    replicates[static_cast<std::size_t>(r)] =
        static_cast<double>(window_max(resampled)) / static_cast<double>(samples);
  }
  double mean = 0;
  for (double q : replicates) mean += q;
  mean /= static_cast<double>(resamples);
  double var = 0;
  for (double q : replicates) var += (q - mean) * (q - mean);
  var /= static_cast<double>(resamples - 1);

  McEstimate e;
  e.estimate = q_hat;
  e.stderr_ = std::sqrt(var);
  e.samples = samples;
  e.seed = seed;
  return e;
}

}  // namespace permsum
