#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permsum/approx.hpp"
#include "permsum/distribution.hpp"
#include "permsum/exact_engines.hpp"
#include "permsum/grid.hpp"
#include "permsum/sampling.hpp"

namespace permsum {

/// Evaluated theoretical bound. `value` is empty exactly when a precondition
/// failed (the bound is +infinity). Bounds whose statements carry an
/// unspecified absolute constant are evaluated with constant 1 and flagged
/// `constant_mode`.
struct BoundReport {
  std::string statement;
  bool preconditions_ok = true;
  std::vector<std::string> violations;
  bool constant_mode = false;
  std::optional<Rational> value;
  std::vector<std::pair<std::string, std::string>> inputs;

  void require(bool ok, const std::string& condition) {
    if (!ok) {
      preconditions_ok = false;
      violations.push_back(condition);
    }
  }
  void echo(const std::string& key, const std::string& val) { inputs.emplace_back(key, val); }
};

/// Minimum pairwise coordinate gap of v; 0 when any value repeats.
inline Rational delta(const RationalVector& v) {
  if (v.size() < 2) throw precondition_error("delta needs at least two coordinates");
  std::vector<Rational> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  Rational best = sorted[1] - sorted[0];
  for (std::size_t i = 2; i < sorted.size(); ++i) best = std::min(best, Rational(sorted[i] - sorted[i - 1]));
  return best;
}

namespace detail {

/// Positive lower bound on sqrt(x) for x > 0, escalating precision until the
/// rounded value is nonzero (it sits in a denominator).
inline Rational sqrt_lower_positive(const Rational& x) {
  for (unsigned bits = kDefaultFracBits; bits <= 1024; bits *= 2) {
    Rational r = sqrt_lower(x, bits);
    if (r > 0) return r;
  }
  throw std::overflow_error("sqrt lower bound underflows at 1024 fractional bits");
}

}  // namespace detail

/// Interval-mass bound for increasing w, v in terms of indices i1, i2
/// (1-based): value = (1 + |I| / (delta(v) * gap)) / ((i1+i2) * sqrt(min(i1,i2)))
/// where gap is the i2-th largest weight minus the i1-th smallest. Valid when
/// i1 + i2 <= n and gap > 0. The square root is rounded down so the reported
/// value never understates the formula.
inline BoundReport main_theorem_bound(const RationalVector& w, const RationalVector& v, const Rational& len_I, int i1,
                                      int i2) {
  BoundReport r;
  r.statement = "main";
  r.constant_mode = true;
  std::size_t n = w.size();
  r.echo("n", std::to_string(n));
  r.echo("i1", std::to_string(i1));
  r.echo("i2", std::to_string(i2));
  r.echo("len_I", to_string(len_I));
  if (!w.is_increasing() || !v.is_increasing()) r.echo("sorted_internally", "1");

  r.require(w.size() == v.size(), "len(w) = len(v)");
  r.require(len_I >= 0, "|I| >= 0");
  r.require(i1 >= 1 && i2 >= 1, "i1, i2 >= 1");
  r.require(i1 + i2 <= static_cast<int>(n), "i1 + i2 <= n");
  Rational dv = v.size() >= 2 ? delta(v.sorted()) : Rational(0);
  r.echo("delta_v", to_string(dv));
  r.require(dv > 0, "delta(v) > 0");
  Rational gap = 0;
  if (r.preconditions_ok) {
    RationalVector ws = w.sorted();
    gap = ws[n - static_cast<std::size_t>(i2)] - ws[static_cast<std::size_t>(i1) - 1];
    r.echo("weight_gap", to_string(gap));
    r.require(gap > 0, "i2-th largest weight > i1-th smallest weight");
  }
  if (!r.preconditions_ok) return r;

  Rational numerator = 1 + len_I / (dv * gap);
  Rational root = detail::sqrt_lower_positive(Rational(std::min(i1, i2)));
  r.value = numerator / ((i1 + i2) * root);
  return r;
}

struct OptimizedIndices {
  int i1 = 0;
  int i2 = 0;
  BoundReport report;
};

/// Exhaustive search over valid (i1, i2) pairs for the minimizing bound.
/// Ties break toward smaller i1, then smaller i2.
inline OptimizedIndices optimize_indices(const RationalVector& w, const RationalVector& v, const Rational& len_I) {
  if (w.size() != v.size()) throw precondition_error("length mismatch");
  int n = static_cast<int>(w.size());
  OptimizedIndices best;
  for (int i1 = 1; i1 < n; ++i1) {
    for (int i2 = 1; i1 + i2 <= n; ++i2) {
      BoundReport r = main_theorem_bound(w, v, len_I, i1, i2);
      if (!r.preconditions_ok) continue;
      if (!best.report.value || *r.value < *best.report.value) {
        best = {i1, i2, std::move(r)};
      }
    }
  }
  if (!best.report.value)
    throw precondition_error("no valid (i1, i2): every index pair has zero weight gap");
  return best;
}

/// Point-mass bound 1/(eps * n^{3/2}) under the repetition hypothesis: no
/// weight value occurs more than (1-eps)*n times and v is all-distinct.
inline BoundReport repetition_corollary_bound(const RationalVector& w, const RationalVector& v, const Rational& eps) {
  BoundReport r;
  r.statement = "repetition";
  r.constant_mode = true;
  std::size_t n = w.size();
  r.echo("n", std::to_string(n));
  r.echo("eps", to_string(eps));

  r.require(w.size() == v.size(), "len(w) = len(v)");
  r.require(eps > 0 && eps <= 1, "eps in (0, 1]");
  r.require(v.all_distinct(), "v all-distinct");
  std::map<Rational, std::size_t> mult;
  for (const Rational& x : w) ++mult[x];
  std::size_t max_mult = 0;
  for (const auto& [value, count] : mult) max_mult = std::max(max_mult, count);
  r.echo("max_weight_multiplicity", std::to_string(max_mult));
  // A value occurring once is not repeated, so only multiplicities >= 2 are
  // held against the (1-eps)*n budget (eps = 1 then demands all-distinct w).
  if (eps > 0 && eps <= 1)
    r.require(max_mult == 1 || Rational(max_mult) <= (1 - eps) * Rational(n),
              "no weight repeated more than (1-eps)*n times");
  if (!r.preconditions_ok) return r;

  r.value = 1 / (eps * Rational(n) * detail::sqrt_lower_positive(Rational(n)));
  return r;
}

/// Interval-mass bound |I| * sqrt(log n) / (n * sigma * delta(v)) + 1/n with
/// sigma^2 = sum (w_i - mean(w))^2. Irrational factors are rounded so the
/// report never understates the formula: log and its root up, sigma down.
inline BoundReport sigma_corollary_bound(const RationalVector& w, const RationalVector& v, const Rational& len_I) {
  BoundReport r;
  r.statement = "sigma";
  r.constant_mode = true;
  std::size_t n = w.size();
  r.echo("n", std::to_string(n));
  r.echo("len_I", to_string(len_I));

  r.require(w.size() == v.size(), "len(w) = len(v)");
  r.require(len_I >= 0, "|I| >= 0");
  Rational dv = v.size() >= 2 ? delta(v) : Rational(0);
  r.echo("delta_v", to_string(dv));
  r.require(dv > 0, "delta(v) > 0");
  Rational mean = w.sum() / Rational(n);
  Rational sigma2 = 0;
  for (const Rational& x : w) sigma2 += (x - mean) * (x - mean);
  r.echo("sigma2", to_string(sigma2));
  r.require(sigma2 > 0, "sigma > 0 (w nonconstant)");
  if (!r.preconditions_ok) return r;

  Rational first = 0;
  if (len_I > 0) {
    Rational root_log = sqrt_upper(log_upper(Int(n)));
    first = len_I * root_log / (Rational(n) * detail::sqrt_lower_positive(sigma2) * dv);
  }
  r.value = first + Rational(1, n);
  return r;
}

/// Sharp point-mass check: max_x P(w_pi . v = x) against 1/n (n odd) or
/// 1/(n-1) (n even). Requires all-distinct v and nonconstant w; the
/// nonconstant form of the hypothesis is used because the point mass is
/// invariant under adding constants to w.
struct PawlowskiResult {
  std::size_t n = 0;
  Rational bound;
  Rational max_mass;
  Rational witness;
  bool satisfied = false;
};

inline PawlowskiResult pawlowski_check(const RationalVector& w, const RationalVector& v, const ExactOptions& opts = {}) {
  if (w.size() != v.size()) throw precondition_error("length mismatch");
  if (!v.all_distinct()) throw precondition_error("v must be all-distinct");
  if (w.is_constant()) throw precondition_error("w must be nonconstant");
  std::size_t n = w.size();
  PawlowskiResult res;
  res.n = n;
  res.bound = n % 2 == 1 ? Rational(1, n) : Rational(1, n - 1);
  MaxPointMass mp = max_point_mass(w, v, opts);
  res.max_mass = mp.probability;
  res.witness = mp.witness;
  res.satisfied = res.max_mass <= res.bound;
  return res;
}

/// Point-mass bounds of the subset-sum lemmas: 1/(n sqrt(k)) with
/// replacement, 1/(n sqrt(min(k, n-k))) without.
inline BoundReport subset_lemma_bound(int n, int k, SubsetMode mode) {
  BoundReport r;
  r.statement = mode == SubsetMode::with_replacement ? "lemma-with" : "lemma-without";
  r.constant_mode = true;
  r.echo("n", std::to_string(n));
  r.echo("k", std::to_string(k));
  r.require(n >= 1, "n >= 1");
  r.require(k >= 1 && k <= n, "1 <= k <= n");
  int effective = mode == SubsetMode::with_replacement ? k : std::min(k, n - k);
  if (mode == SubsetMode::without_replacement) r.require(effective >= 1, "min(k, n-k) >= 1");
  if (!r.preconditions_ok) return r;
  r.value = 1 / (Rational(n) * detail::sqrt_lower_positive(Rational(effective)));
  return r;
}

/// Monte Carlo decay profile of P(|u_pi . v - L n| <= 1) for v = (1..n) and
/// u = (w - mean(w)) / ||w - mean(w)||. The centering shift and squared norm
/// of the affine normalization are recorded; membership tests run in exact
/// arithmetic (the norm enters only through its square).
struct SozePoint {
  Rational L;
  McEstimate estimate;
};

struct SozeProfile {
  Rational mean_shift;  // subtracted from every coordinate
  Rational norm2;       // squared norm of the centered weights
  std::vector<SozePoint> points;
};

namespace detail {

/// Smallest integer >= coef * sqrt(d), exactly (d >= 0).
inline Int ceil_coef_sqrt(const Rational& coef, const Rational& d) {
  Rational over = coef >= 0 ? coef * sqrt_upper(d) : coef * sqrt_lower(d);
  Int g = rational_ceil(over);
  while (sign_with_sqrt(Rational(g - 1), -coef, d) >= 0) --g;
  while (sign_with_sqrt(Rational(g), -coef, d) < 0) ++g;
  return g;
}

/// Largest integer <= coef * sqrt(d), exactly (d >= 0).
inline Int floor_coef_sqrt(const Rational& coef, const Rational& d) {
  Rational under = coef >= 0 ? coef * sqrt_lower(d) : coef * sqrt_upper(d);
  Int g = rational_floor(under);
  while (sign_with_sqrt(Rational(g + 1), -coef, d) <= 0) ++g;
  while (sign_with_sqrt(Rational(g), -coef, d) > 0) --g;
  return g;
}

}  // namespace detail

inline SozeProfile soze_decay_profile(const RationalVector& w, const std::vector<Rational>& L_values,
                                      std::int64_t samples, std::uint64_t seed, unsigned threads = 0) {
  if (w.is_constant()) throw precondition_error("w must be nonconstant (cannot be centered to a unit vector)");
  std::size_t n = w.size();
  SozeProfile profile;
  profile.mean_shift = w.sum() / Rational(n);
  std::vector<Rational> centered;
  centered.reserve(n);
  profile.norm2 = 0;
  for (const Rational& x : w) {
    centered.push_back(x - profile.mean_shift);
    profile.norm2 += centered.back() * centered.back();
  }
  RationalVector c(std::move(centered));
  std::vector<Rational> ramp;
  ramp.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) ramp.emplace_back(i);
  RationalVector v(std::move(ramp));

  GridSampler sampler = make_perm_sum_sampler(c, v);
  // Event |X/s - L n| <= 1 with s = sqrt(norm2) and X on grid scale S becomes
  // the integer window [ceil(S(Ln-1)s), floor(S(Ln+1)s)].
  std::vector<std::pair<Int, Int>> windows;
  windows.reserve(L_values.size());
  for (const Rational& L : L_values) {
    Rational scale(sampler.map.scale);
    windows.emplace_back(detail::ceil_coef_sqrt(scale * (L * Rational(n) - 1), profile.norm2),
                         detail::floor_coef_sqrt(scale * (L * Rational(n) + 1), profile.norm2));
  }
  std::vector<McEstimate> estimates = estimate_window_masses(sampler, windows, samples, seed, threads);
  profile.points.reserve(L_values.size());
  for (std::size_t i = 0; i < L_values.size(); ++i) profile.points.push_back({L_values[i], estimates[i]});
  return profile;
}

}  // namespace permsum
