#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "permsum/distribution.hpp"
#include "permsum/exact_engines.hpp"
#include "permsum/grid.hpp"
#include "permsum/rng.hpp"

namespace permsum {

/// A subset of a linearly ordered ground set, kept strictly increasing.
using Subset = std::vector<int>;

// Dominance order on equal-size subsets, oriented so that a subset moves UP
// by exchanging an element for a larger one. With subsets read as the value
// positions of the large-weight block, the block sum increases along the
// order, which is the orientation the covering-step machinery needs.

/// U <= V iff the i-th smallest element of U is <= that of V for every i.
inline bool dominance_leq(const Subset& U, const Subset& V) {
  if (U.size() != V.size()) throw precondition_error("dominance compares equal-size subsets");
  for (std::size_t i = 0; i < U.size(); ++i)
    if (U[i] > V[i]) return false;
  return true;
}

/// Equivalent prefix-count characterization: U <= V iff U has at least as
/// many elements as V below every threshold.
inline bool dominance_leq_by_prefix_counts(const Subset& U, const Subset& V) {
  if (U.size() != V.size()) throw precondition_error("dominance compares equal-size subsets");
  std::vector<int> thresholds;
  thresholds.reserve(U.size() + V.size());
  thresholds.insert(thresholds.end(), U.begin(), U.end());
  thresholds.insert(thresholds.end(), V.begin(), V.end());
  for (int x : thresholds) {
    auto below = [x](const Subset& S) {
      return std::upper_bound(S.begin(), S.end(), x) - S.begin();
    };
    if (below(U) < below(V)) return false;
  }
  return true;
}

/// All k-subsets of a sorted ground set, in lexicographic order.
inline std::vector<Subset> k_subsets(const std::vector<int>& ground, int k) {
  std::size_t n = ground.size();
  if (k < 0 || static_cast<std::size_t>(k) > n) throw precondition_error("subset size out of range");
  std::vector<Subset> out;
  Subset current;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (current.size() == static_cast<std::size_t>(k)) {
      out.push_back(current);
      return;
    }
    for (std::size_t i = start; i + (static_cast<std::size_t>(k) - current.size()) <= n; ++i) {
      current.push_back(ground[i]);
      rec(i + 1);
      current.pop_back();
    }
  };
  rec(0);
  return out;
}

/// Width of the dominance poset on k-subsets of {1..n}: the peak number of
/// k-subsets sharing one sum, read off the exact subset-sum distribution on
/// (1..n). Equivalently the largest coefficient of the Gaussian binomial.
inline Int stanley_width(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw precondition_error("width arguments out of range");
  if (k == 0 || k == n) return 1;
  std::vector<Rational> ramp;
  ramp.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) ramp.emplace_back(i);
  DiscreteDistribution d = subset_sum_without_replacement(RationalVector(std::move(ramp)), k);
  Int best = 0;
  for (const Int& c : d.counts()) best = std::max(best, c);
  return best;
}

namespace detail {

inline bool kuhn_augment(int u, const std::vector<std::vector<int>>& adj, std::vector<int>& match_right,
                         std::vector<char>& visited) {
  for (int v : adj[static_cast<std::size_t>(u)]) {
    if (visited[static_cast<std::size_t>(v)]) continue;
    visited[static_cast<std::size_t>(v)] = 1;
    if (match_right[static_cast<std::size_t>(v)] < 0 ||
        kuhn_augment(match_right[static_cast<std::size_t>(v)], adj, match_right, visited)) {
      match_right[static_cast<std::size_t>(v)] = u;
      return true;
    }
  }
  return false;
}

/// Maximum matching in the bipartite comparability graph (left copy strictly
/// below right copy); returns match_right, right -> left or -1.
inline std::vector<int> comparability_matching(const std::vector<Subset>& elements) {
  std::size_t m = elements.size();
  std::vector<std::vector<int>> adj(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && elements[i] != elements[j] && dominance_leq(elements[i], elements[j]))
        adj[i].push_back(static_cast<int>(j));
  std::vector<int> match_right(m, -1);
  std::vector<char> visited(m);
  for (std::size_t u = 0; u < m; ++u) {
    std::fill(visited.begin(), visited.end(), 0);
    kuhn_augment(static_cast<int>(u), adj, match_right, visited);
  }
  return match_right;
}

}  // namespace detail

/// Exact width (max antichain) of a finite family of equal-size subsets under
/// dominance, computed independently of the counting formula: the minimum
/// chain cover equals |E| - max matching on the comparability graph, and by
/// Dilworth's theorem that is the width.
inline long long dilworth_width_of(const std::vector<Subset>& elements, int cap = 500) {
  if (static_cast<int>(elements.size()) > cap)
    throw cap_exceeded_error("poset has " + std::to_string(elements.size()) + " elements, oracle cap is " +
                             std::to_string(cap));
  std::vector<int> match_right = detail::comparability_matching(elements);
  long long matched = std::count_if(match_right.begin(), match_right.end(), [](int m) { return m >= 0; });
  return static_cast<long long>(elements.size()) - matched;
}

/// Matching-based width of the dominance poset on k-subsets of {1..n}.
inline long long dilworth_width_oracle(int n, int k, int cap = 500) {
  if (n < 0 || k < 0 || k > n) throw precondition_error("width arguments out of range");
  if (binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)) > cap)
    throw cap_exceeded_error("C(" + std::to_string(n) + "," + std::to_string(k) + ") exceeds oracle cap " +
                             std::to_string(cap));
  std::vector<int> ground(static_cast<std::size_t>(n));
  std::iota(ground.begin(), ground.end(), 1);
  return dilworth_width_of(k_subsets(ground, k), cap);
}

/// Width computed by the counting formula, optionally cross-checked by the
/// independent matching oracle.
struct WidthCertificate {
  Int stanley;
  std::optional<long long> dilworth;
  bool agree = true;
};

inline WidthCertificate width_certificate(int n, int k, bool run_oracle, int cap = 500) {
  WidthCertificate cert{stanley_width(n, k), std::nullopt, true};
  if (run_oracle) {
    cert.dilworth = dilworth_width_oracle(n, k, cap);
    cert.agree = cert.stanley == *cert.dilworth;
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Covering-step machinery: the explicit permutation construction behind the
// chain-length bound. Weights below t1 form the small block, weights at or
// above t2 the large block; everything else is fixed by the context. A
// subset U of the free positions lists where the large block sits, and S(U)
// is the full permutation sum that choice induces.

struct AssignmentContext {
  RationalVector w, v;  // both increasing
  Rational t1, t2;
  std::vector<int> small_block;       // w-indices with w_i < t1
  std::vector<int> large_block;       // w-indices with w_i >= t2
  std::vector<int> middle;            // remaining w-indices
  std::vector<int> middle_positions;  // fixed v-positions of the middle, aligned with `middle`
  std::vector<int> free_positions;    // sorted v-positions shared by the two blocks
  std::vector<int> small_order;       // fill order: r-th listed weight takes the r-th smallest position
  std::vector<int> large_order;

  /// S(U): permutation sum with the large block on positions U (sorted) and
  /// the small block on the remaining free positions.
  Rational sum_value(const Subset& large_positions) const {
    if (large_positions.size() != large_block.size())
      throw precondition_error("subset size must match the large block");
    Rational s = 0;
    for (std::size_t i = 0; i < middle.size(); ++i)
      s += w[static_cast<std::size_t>(middle[i])] * v[static_cast<std::size_t>(middle_positions[i])];
    Subset small_positions;
    small_positions.reserve(free_positions.size() - large_positions.size());
    std::set_difference(free_positions.begin(), free_positions.end(), large_positions.begin(), large_positions.end(),
                        std::back_inserter(small_positions));
    for (std::size_t r = 0; r < large_positions.size(); ++r)
      s += w[static_cast<std::size_t>(large_order[r])] * v[static_cast<std::size_t>(large_positions[r])];
    for (std::size_t r = 0; r < small_positions.size(); ++r)
      s += w[static_cast<std::size_t>(small_order[r])] * v[static_cast<std::size_t>(small_positions[r])];
    return s;
  }
};

inline AssignmentContext make_assignment_context(RationalVector w, RationalVector v, Rational t1, Rational t2,
                                                 std::vector<int> middle_positions, std::vector<int> small_order,
                                                 std::vector<int> large_order) {
  if (w.size() != v.size()) throw precondition_error("length mismatch");
  if (!w.is_increasing() || !v.is_increasing()) throw precondition_error("w and v must be increasing");
  if (!(t1 < t2)) throw precondition_error("thresholds must satisfy t1 < t2");
  std::size_t n = w.size();
  AssignmentContext ctx{std::move(w), std::move(v), std::move(t1), std::move(t2), {}, {}, {}, {}, {}, {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    if (ctx.w[i] < ctx.t1)
      ctx.small_block.push_back(static_cast<int>(i));
    else if (ctx.w[i] >= ctx.t2)
      ctx.large_block.push_back(static_cast<int>(i));
    else
      ctx.middle.push_back(static_cast<int>(i));
  }
  if (ctx.small_block.empty() || ctx.large_block.empty())
    throw precondition_error("both weight blocks must be nonempty (adjust t1, t2)");
  if (middle_positions.size() != ctx.middle.size()) throw precondition_error("middle assignment size mismatch");
  ctx.middle_positions = std::move(middle_positions);
  std::vector<char> used(n, 0);
  for (int p : ctx.middle_positions) {
    if (p < 0 || static_cast<std::size_t>(p) >= n || used[static_cast<std::size_t>(p)])
      throw precondition_error("middle assignment must be an injection into positions");
    used[static_cast<std::size_t>(p)] = 1;
  }
  for (std::size_t p = 0; p < n; ++p)
    if (!used[p]) ctx.free_positions.push_back(static_cast<int>(p));
  auto is_perm_of = [](const std::vector<int>& order, const std::vector<int>& block) {
    std::vector<int> a = order, b = block;
    std::sort(a.begin(), a.end());
    return a == b;
  };
  if (!is_perm_of(small_order, ctx.small_block) || !is_perm_of(large_order, ctx.large_block))
    throw precondition_error("fill orders must permute their blocks");
  ctx.small_order = std::move(small_order);
  ctx.large_order = std::move(large_order);
  return ctx;
}

/// Context with the step-(i) and step-(ii) outcomes drawn uniformly.
inline AssignmentContext random_assignment_context(const RationalVector& w, const RationalVector& v, const Rational& t1,
                                                   const Rational& t2, Xoshiro256pp& rng) {
  std::size_t n = w.size();
  std::vector<int> small, large, middle;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] < t1)
      small.push_back(static_cast<int>(i));
    else if (w[i] >= t2)
      large.push_back(static_cast<int>(i));
    else
      middle.push_back(static_cast<int>(i));
  }
  std::vector<int> positions(n);
  std::iota(positions.begin(), positions.end(), 0);
  partial_shuffle(positions, middle.size(), rng);
  std::vector<int> middle_positions(positions.begin(), positions.begin() + static_cast<std::ptrdiff_t>(middle.size()));
  partial_shuffle(small, small.size(), rng);
  partial_shuffle(large, large.size(), rng);
  return make_assignment_context(w, v, t1, t2, std::move(middle_positions), std::move(small), std::move(large));
}

/// S(V) - S(U) for a covering pair U < V (V = U with one element exchanged
/// upward to the next free position). Positive and at least
/// delta(v) * (t2 - t1) by construction.
inline Rational covering_step_gap(const AssignmentContext& ctx, const Subset& U, const Subset& V) {
  if (U.size() != V.size() || U.size() != ctx.large_block.size())
    throw precondition_error("covering pair must be subsets of the free positions sized like the large block");
  Subset removed, added;
  std::set_difference(U.begin(), U.end(), V.begin(), V.end(), std::back_inserter(removed));
  std::set_difference(V.begin(), V.end(), U.begin(), U.end(), std::back_inserter(added));
  if (removed.size() != 1 || added.size() != 1)
    throw precondition_error("not a covering pair: subsets must differ in exactly one element");
  int x = removed[0], y = added[0];
  if (y <= x) throw precondition_error("not a covering pair: exchange must move a position upward");
  for (int z : ctx.free_positions)
    if (z > x && z < y) throw precondition_error("not a covering pair: another free position lies between");

  Rational gap = ctx.sum_value(V) - ctx.sum_value(U);
  Rational dv = ctx.v[1] - ctx.v[0];  // v is increasing, so the min gap is adjacent
  for (std::size_t i = 2; i < ctx.v.size(); ++i) dv = std::min(dv, Rational(ctx.v[i] - ctx.v[i - 1]));
  if (gap < dv * (ctx.t2 - ctx.t1)) throw std::logic_error("covering gap below delta * (t2 - t1)");
  return gap;
}

/// Uniform random subset of the free positions sized like the large block,
/// plus one uniform upward covering move from it. Returns nothing when the
/// drawn subset is maximal.
inline std::optional<std::pair<Subset, Subset>> random_covering_pair(const AssignmentContext& ctx, Xoshiro256pp& rng) {
  std::vector<int> pool = ctx.free_positions;
  partial_shuffle(pool, ctx.large_block.size(), rng);
  Subset U(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(ctx.large_block.size()));
  std::sort(U.begin(), U.end());
  std::vector<std::pair<int, int>> moves;  // (x, successor)
  for (int x : U) {
    auto it = std::upper_bound(ctx.free_positions.begin(), ctx.free_positions.end(), x);
    if (it == ctx.free_positions.end()) continue;
    if (!std::binary_search(U.begin(), U.end(), *it)) moves.emplace_back(x, *it);
  }
  if (moves.empty()) return std::nullopt;
  auto [x, y] = moves[static_cast<std::size_t>(rng.bounded(moves.size()))];
  Subset V;
  for (int u : U)
    if (u != x) V.push_back(u);
  V.push_back(y);
  std::sort(V.begin(), V.end());
  return std::make_pair(std::move(U), std::move(V));
}

/// A subset together with its permutation-sum value.
struct ValuedSubset {
  Subset set;
  Rational value;
};

/// Decomposes E into the minimum number of chains under dominance (greedy
/// along a linear extension, repaired to the matching optimum when greedy
/// overshoots). When every value lies in I, each chain is checked against
/// the size bound 1 + |I| / delta_gap implied by the covering-step gap.
inline std::vector<std::vector<std::size_t>> chain_decompose(const std::vector<ValuedSubset>& E, const Interval& I,
                                                             const Rational& delta_gap, int cap = 500) {
  if (delta_gap <= 0) throw precondition_error("delta_gap must be positive");
  if (E.empty()) return {};
  if (static_cast<int>(E.size()) > cap)
    throw cap_exceeded_error("chain decomposition capped at " + std::to_string(cap) + " elements");
  for (const ValuedSubset& e : E)
    if (e.set.size() != E.front().set.size()) throw precondition_error("subsets must share one size");

  std::vector<std::size_t> order(E.size());
  std::iota(order.begin(), order.end(), 0);
  // Element-sum is a linear extension of dominance.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    long long sa = std::accumulate(E[a].set.begin(), E[a].set.end(), 0LL);
    long long sb = std::accumulate(E[b].set.begin(), E[b].set.end(), 0LL);
    if (sa != sb) return sa < sb;
    return E[a].set < E[b].set;
  });

  std::vector<std::vector<std::size_t>> chains;
  for (std::size_t idx : order) {
    bool placed = false;
    for (auto& chain : chains) {
      const Subset& tail = E[chain.back()].set;
      if (tail != E[idx].set && dominance_leq(tail, E[idx].set)) {
        chain.push_back(idx);
        placed = true;
        break;
      }
    }
    if (!placed) chains.push_back({idx});
  }

  std::vector<Subset> sets;
  sets.reserve(E.size());
  for (const ValuedSubset& e : E) sets.push_back(e.set);
  long long width = dilworth_width_of(sets, cap);
  if (static_cast<long long>(chains.size()) > width) {
    // Rebuild optimally from the matching: matched edges link chain neighbors.
    std::vector<int> match_right = detail::comparability_matching(sets);
    std::vector<int> successor(E.size(), -1);
    std::vector<char> has_predecessor(E.size(), 0);
    for (std::size_t v = 0; v < match_right.size(); ++v)
      if (match_right[v] >= 0) {
        successor[static_cast<std::size_t>(match_right[v])] = static_cast<int>(v);
        has_predecessor[v] = 1;
      }
    chains.clear();
    for (std::size_t i : order) {
      if (has_predecessor[i]) continue;
      std::vector<std::size_t> chain;
      for (int cur = static_cast<int>(i); cur >= 0; cur = successor[static_cast<std::size_t>(cur)])
        chain.push_back(static_cast<std::size_t>(cur));
      chains.push_back(std::move(chain));
    }
  }

  bool all_inside = std::all_of(E.begin(), E.end(),
                                [&](const ValuedSubset& e) { return e.value >= I.lo && e.value <= I.hi; });
  if (all_inside) {
    Rational limit = 1 + I.length() / delta_gap;
    for (const auto& chain : chains)
      if (Rational(chain.size()) > limit)
        throw std::invalid_argument("chain size exceeds 1 + |I|/delta_gap: values inconsistent with dominance gaps");
  }
  return chains;
}

}  // namespace permsum
