#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "permsum/distribution.hpp"
#include "permsum/grid.hpp"
#include "permsum/rational.hpp"

namespace permsum {

struct ExactOptions {
  int cap = 12;          // largest n for exact permutation enumeration
  unsigned threads = 0;  // 0 = hardware concurrency
};

enum class SubsetMode { with_replacement, without_replacement };

namespace detail {

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

inline void check_product_range(std::size_t n, const std::vector<GridValue>& a, const std::vector<GridValue>& b) {
  Int max_a = 0, max_b = 0;
  for (GridValue x : a) max_a = std::max(max_a, Int(x < 0 ? -Int(x) : Int(x)));
  for (GridValue x : b) max_b = std::max(max_b, Int(x < 0 ? -Int(x) : Int(x)));
  if (Int(n) * max_a * max_b > (Int(1) << 62))
    throw std::overflow_error("grid values too large for 64-bit exact enumeration");
}

inline void check_sum_range(std::size_t n, const std::vector<GridValue>& a) {
  Int max_a = 0;
  for (GridValue x : a) max_a = std::max(max_a, Int(x < 0 ? -Int(x) : Int(x)));
  if (Int(n) * max_a > (Int(1) << 62)) throw std::overflow_error("grid values too large for 64-bit sums");
}

struct WeightGroups {
  std::vector<GridValue> values;  // distinct weight grid values
  std::vector<int> mult;
  Int arrangement_weight;  // product of multiplicity factorials
};

inline WeightGroups group_weights(std::vector<GridValue> wg) {
  std::sort(wg.begin(), wg.end());
  WeightGroups g;
  g.arrangement_weight = 1;
  for (std::size_t i = 0; i < wg.size();) {
    std::size_t j = i;
    while (j < wg.size() && wg[j] == wg[i]) ++j;
    g.values.push_back(wg[i]);
    g.mult.push_back(static_cast<int>(j - i));
    g.arrangement_weight *= factorial(static_cast<unsigned>(j - i));
    i = j;
  }
  return g;
}

// One distinct assignment of the weight multiset to positions corresponds to
// arrangement_weight underlying permutations, so enumerating assignments and
// weighting at the end keeps the total at n! while collapsing symmetric
// branches of repeated weights.
inline void enumerate_assignments(const std::vector<GridValue>& vg, const std::vector<GridValue>& group_values,
                                  std::vector<int>& remaining, std::size_t depth, GridValue partial,
                                  std::unordered_map<GridValue, std::uint64_t>& out) {
  if (depth == vg.size()) {
    ++out[partial];
    return;
  }
  for (std::size_t g = 0; g < group_values.size(); ++g) {
    if (remaining[g] == 0) continue;
    --remaining[g];
    enumerate_assignments(vg, group_values, remaining, depth + 1, partial + group_values[g] * vg[depth], out);
    ++remaining[g];
  }
}

struct EnumTask {
  std::vector<int> remaining;
  GridValue partial;
  std::size_t depth;
};

inline std::vector<EnumTask> split_tasks(const WeightGroups& groups, const std::vector<GridValue>& vg,
                                         std::size_t min_tasks) {
  std::vector<EnumTask> tasks{{groups.mult, 0, 0}};
  while (tasks.size() < min_tasks && tasks.front().depth < vg.size()) {
    std::vector<EnumTask> next;
    for (const EnumTask& t : tasks) {
      for (std::size_t g = 0; g < groups.values.size(); ++g) {
        if (t.remaining[g] == 0) continue;
        EnumTask child = t;
        --child.remaining[g];
        child.partial += groups.values[g] * vg[t.depth];
        ++child.depth;
        next.push_back(std::move(child));
      }
    }
    tasks = std::move(next);
  }
  return tasks;
}

}  // namespace detail

/// Exact law of w_pi . v over a uniform permutation pi in S_n. Counts carry
/// total n! exactly. Enumeration collapses repeated weight values and may
/// shard across threads; the result is independent of the thread count.
inline DiscreteDistribution perm_sum_distribution(const RationalVector& w, const RationalVector& v,
                                                  const ExactOptions& opts = {}) {
  if (w.size() != v.size())
    throw precondition_error("length mismatch: |w|=" + std::to_string(w.size()) + " |v|=" + std::to_string(v.size()));
  std::size_t n = w.size();
  if (static_cast<int>(n) > opts.cap)
    throw cap_exceeded_error("n=" + std::to_string(n) + " exceeds exact cap " + std::to_string(opts.cap) +
                             "; use the Monte Carlo path");
  GridEmbedding we = embed(w), ve = embed(v);
  detail::check_product_range(n, we.values, ve.values);

  detail::WeightGroups groups = detail::group_weights(we.values);
  unsigned threads = detail::resolve_threads(opts.threads);
  std::vector<detail::EnumTask> tasks =
      detail::split_tasks(groups, ve.values, threads > 1 ? 4 * static_cast<std::size_t>(threads) : 1);

  std::vector<std::unordered_map<GridValue, std::uint64_t>> partials(tasks.size());
  auto run_task = [&](std::size_t i) {
    std::vector<int> remaining = tasks[i].remaining;
    detail::enumerate_assignments(ve.values, groups.values, remaining, tasks[i].depth, tasks[i].partial, partials[i]);
  };
  if (threads <= 1 || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) run_task(i);
      });
    for (auto& th : pool) th.join();
  }

  std::map<GridValue, Int> counts;
  for (const auto& part : partials)
    for (const auto& [sum, arrangements] : part) counts[sum] += Int(arrangements) * groups.arrangement_weight;

  GridMap map;
  map.scale = we.map.scale * ve.map.scale;
  DiscreteDistribution dist = DiscreteDistribution::from_counts(counts, map);
  if (dist.total() != factorial(static_cast<unsigned>(n)))
    throw std::logic_error("permutation enumeration total mismatch");
  return dist;
}

/// Exact P(w_pi . v = x).
inline Rational point_mass(const RationalVector& w, const RationalVector& v, const Rational& x,
                           const ExactOptions& opts = {}) {
  return prob_mass(perm_sum_distribution(w, v, opts), Interval::point(x));
}

/// Largest point mass of w_pi . v with its smallest attaining value.
inline MaxPointMass max_point_mass(const RationalVector& w, const RationalVector& v, const ExactOptions& opts = {}) {
  return max_point_mass_of(perm_sum_distribution(w, v, opts));
}

namespace detail {

// Dense DP layers indexed by sum-offset; falls back to ordered maps when the
// value range would make dense tables too large.
inline const Int kDenseCellCap = Int(1) << 21;

inline void require_distinct(const std::vector<GridValue>& values, const char* who) {
  std::vector<GridValue> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw precondition_error(std::string(who) + " requires pairwise distinct coordinates");
}

inline std::map<GridValue, Int> subset_layer_map(const std::vector<GridValue>& values, int k) {
  std::vector<std::map<GridValue, Int>> layers(static_cast<std::size_t>(k) + 1);
  layers[0][0] = 1;
  for (std::size_t processed = 0; processed < values.size(); ++processed) {
    GridValue a = values[processed];
    int top = static_cast<int>(std::min<std::size_t>(processed + 1, static_cast<std::size_t>(k)));
    for (int c = top; c >= 1; --c)
      for (const auto& [sum, count] : layers[static_cast<std::size_t>(c) - 1]) layers[static_cast<std::size_t>(c)][sum + a] += count;
  }
  return layers[static_cast<std::size_t>(k)];
}

struct DenseLayers {
  std::vector<GridValue> min_sum;        // per cardinality
  std::vector<std::vector<Int>> counts;  // per cardinality, indexed by sum - min_sum
};

/// All subset-sum layers at once: counts[c][s - min_sum[c]] = number of
/// c-subsets with sum s. Layer bounds come from prefix sums of the sorted
/// values, so tables are tight.
inline DenseLayers subset_layers_dense(const std::vector<GridValue>& values) {
  std::size_t n = values.size();
  std::vector<GridValue> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<GridValue> lo(n + 1, 0), hi(n + 1, 0);
  for (std::size_t c = 1; c <= n; ++c) {
    lo[c] = lo[c - 1] + sorted[c - 1];
    hi[c] = hi[c - 1] + sorted[n - c];
  }
  Int cells = 0;
  for (std::size_t c = 0; c <= n; ++c) cells += Int(hi[c]) - lo[c] + 1;
  if (cells > kDenseCellCap) return {};  // caller falls back to maps

  DenseLayers dp;
  dp.min_sum.assign(n + 1, 0);
  dp.counts.resize(n + 1);
  for (std::size_t c = 0; c <= n; ++c) {
    dp.min_sum[c] = lo[c];
    dp.counts[c].assign(static_cast<std::size_t>(hi[c] - lo[c]) + 1, Int(0));
  }
  dp.counts[0][0] = 1;
  for (std::size_t processed = 0; processed < n; ++processed) {
    GridValue a = values[processed];
    for (std::size_t c = std::min(processed + 1, n); c >= 1; --c) {
      const auto& prev = dp.counts[c - 1];
      for (std::size_t i = 0; i < prev.size(); ++i) {
        if (prev[i] == 0) continue;
        GridValue sum = dp.min_sum[c - 1] + static_cast<GridValue>(i) + a;
        dp.counts[c][static_cast<std::size_t>(sum - dp.min_sum[c])] += prev[i];
      }
    }
  }
  return dp;
}

inline DiscreteDistribution layer_to_distribution(const std::map<GridValue, Int>& layer, GridMap map, const Int& expected_total,
                                                  const char* what) {
  DiscreteDistribution d = DiscreteDistribution::from_counts(layer, std::move(map));
  if (d.total() != expected_total) throw std::logic_error(std::string(what) + ": DP total mismatch");
  return d;
}

}  // namespace detail

/// Exact laws of the sum of a uniform k-subset of A for every k = 0..n in one
/// dynamic program over elements tracking (cardinality, sum).
inline std::vector<DiscreteDistribution> subset_sum_without_replacement_all(const RationalVector& A) {
  GridEmbedding e = embed(A);
  detail::require_distinct(e.values, "subset sum");
  detail::check_sum_range(A.size(), e.values);
  std::size_t n = A.size();

  std::vector<DiscreteDistribution> out;
  out.reserve(n + 1);
  detail::DenseLayers dense = detail::subset_layers_dense(e.values);
  for (std::size_t k = 0; k <= n; ++k) {
    std::map<GridValue, Int> layer;
    if (!dense.counts.empty()) {
      const auto& row = dense.counts[k];
      for (std::size_t i = 0; i < row.size(); ++i)
        if (row[i] != 0) layer[dense.min_sum[k] + static_cast<GridValue>(i)] = row[i];
    } else {
      layer = detail::subset_layer_map(e.values, static_cast<int>(k));
    }
    out.push_back(detail::layer_to_distribution(layer, e.map, binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)),
                                                "subset sum without replacement"));
  }
  return out;
}

/// Exact law of the sum of a uniform k-subset of A (distinct coordinates
/// required; total C(n,k)).
inline DiscreteDistribution subset_sum_without_replacement(const RationalVector& A, int k) {
  std::size_t n = A.size();
  if (k < 0 || static_cast<std::size_t>(k) > n)
    throw precondition_error("subset size k=" + std::to_string(k) + " out of range [0, " + std::to_string(n) + "]");
  GridEmbedding e = embed(A);
  detail::require_distinct(e.values, "subset sum");
  detail::check_sum_range(n, e.values);
  std::map<GridValue, Int> layer = detail::subset_layer_map(e.values, k);
  return detail::layer_to_distribution(layer, e.map, binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)),
                                       "subset sum without replacement");
}

/// Exact laws of the sum of k iid uniform draws from A for k = 1..k_max
/// (k-fold convolution on the grid; totals n^k).
inline std::vector<DiscreteDistribution> subset_sum_with_replacement_up_to(const RationalVector& A, int k_max) {
  if (k_max < 1) throw precondition_error("draw count k must be >= 1");
  GridEmbedding e = embed(A);
  detail::require_distinct(e.values, "subset sum");
  detail::check_sum_range(static_cast<std::size_t>(k_max), e.values);
  std::size_t n = A.size();

  std::vector<DiscreteDistribution> out;
  out.reserve(static_cast<std::size_t>(k_max));
  std::map<GridValue, Int> current;
  Int total = 1;
  for (GridValue a : e.values) current[a] += 1;
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) {
      std::map<GridValue, Int> next;
      for (const auto& [sum, count] : current)
        for (GridValue a : e.values) next[sum + a] += count;
      current = std::move(next);
    }
    total *= static_cast<unsigned>(n);
    out.push_back(detail::layer_to_distribution(current, e.map, total, "subset sum with replacement"));
  }
  return out;
}

/// Exact law of the sum of k iid uniform draws from A.
inline DiscreteDistribution subset_sum_with_replacement(const RationalVector& A, int k) {
  std::vector<DiscreteDistribution> all = subset_sum_with_replacement_up_to(A, k);
  return std::move(all.back());
}

/// Exact law of sum xi_i v_i with iid signs uniform on {-1, +1}; total 2^n.
inline DiscreteDistribution rademacher_sum_distribution(const RationalVector& v) {
  GridEmbedding e = embed(v);
  detail::check_sum_range(v.size(), e.values);
  std::map<GridValue, Int> current{{0, Int(1)}};
  for (GridValue x : e.values) {
    std::map<GridValue, Int> next;
    for (const auto& [sum, count] : current) {
      next[sum + x] += count;
      next[sum - x] += count;
    }
    current = std::move(next);
  }
  return detail::layer_to_distribution(current, e.map, Int(1) << v.size(), "rademacher sum");
}

}  // namespace permsum
