#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "permsum/bounds.hpp"
#include "permsum/distribution.hpp"
#include "permsum/exact_engines.hpp"
#include "permsum/grid.hpp"
#include "permsum/parallel.hpp"
#include "permsum/rng.hpp"
#include "permsum/version.hpp"

namespace permsum {

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Kendall tau-b trend test with the standard tie-corrected normal
// approximation. Comparisons run on the exact types, so rational ratios are
// ranked without rounding.

struct KendallResult {
  double tau = 0.0;
  double z = 0.0;
  double p_increasing = 1.0;  // one-sided: small means evidence of an increasing trend
};

template <class X, class Y>
KendallResult kendall_trend(const std::vector<std::pair<X, Y>>& data) {
  std::size_t n = data.size();
  KendallResult r;
  if (n < 2) return r;
  long long concordant_minus_discordant = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      int sx = data[i].first < data[j].first ? 1 : (data[j].first < data[i].first ? -1 : 0);
      int sy = data[i].second < data[j].second ? 1 : (data[j].second < data[i].second ? -1 : 0);
      concordant_minus_discordant += sx * sy;
    }

  auto tie_sizes = [&](auto key) {
    std::map<std::decay_t<decltype(key(data[0]))>, long long> groups;
    for (const auto& point : data) ++groups[key(point)];
    std::vector<long long> sizes;
    for (const auto& [value, count] : groups)
      if (count > 1) sizes.push_back(count);
    return sizes;
  };
  std::vector<long long> tx = tie_sizes([](const auto& p) { return p.first; });
  std::vector<long long> ty = tie_sizes([](const auto& p) { return p.second; });

  auto sum_t = [](const std::vector<long long>& ts, auto f) {
    long long s = 0;
    for (long long t : ts) s += f(t);
    return s;
  };
  long long nn = static_cast<long long>(n);
  long long n0 = nn * (nn - 1) / 2;
  long long n1 = sum_t(tx, [](long long t) { return t * (t - 1) / 2; });
  long long n2 = sum_t(ty, [](long long t) { return t * (t - 1) / 2; });
  double denom = std::sqrt(static_cast<double>(n0 - n1)) * std::sqrt(static_cast<double>(n0 - n2));
  r.tau = denom > 0 ? static_cast<double>(concordant_minus_discordant) / denom : 0.0;

  double v0 = static_cast<double>(nn) * (nn - 1) * (2 * nn + 5);
  double vt = static_cast<double>(sum_t(tx, [](long long t) { return t * (t - 1) * (2 * t + 5); }));
  double vu = static_cast<double>(sum_t(ty, [](long long t) { return t * (t - 1) * (2 * t + 5); }));
  double var = (v0 - vt - vu) / 18.0;
  if (nn > 2) {
    double t1 = static_cast<double>(sum_t(tx, [](long long t) { return t * (t - 1); }));
    double u1 = static_cast<double>(sum_t(ty, [](long long t) { return t * (t - 1); }));
    double t2 = static_cast<double>(sum_t(tx, [](long long t) { return t * (t - 1) * (t - 2); }));
    double u2 = static_cast<double>(sum_t(ty, [](long long t) { return t * (t - 1) * (t - 2); }));
    var += t2 * u2 / (9.0 * nn * (nn - 1) * (nn - 2));
    var += t1 * u1 / (2.0 * nn * (nn - 1));
  }
  if (var <= 0) return r;
  r.z = static_cast<double>(concordant_minus_discordant) / std::sqrt(var);
  r.p_increasing = 0.5 * std::erfc(r.z / std::sqrt(2.0));
  return r;
}

// ---------------------------------------------------------------------------
// Sweep harness

struct SweepConfig {
  std::string statement;       // pawlowski | lemma-with | lemma-without | main | sigma
  std::string generator = "";  // grid (pawlowski), ramp | perturbed (lemmas), random (main/sigma)
  int n_min = 3;
  int n_max = 6;
  std::string k_rule = "all";  // all | half
  int count = 100;             // random battery size
  std::uint64_t seed = 1;
  int coord_bound = 2;  // |w| entries bounded by this on the grid
  int v_max = 0;        // v entries in [1, v_max]; 0 means n+1
  std::string output;   // CSV path; empty = stdout only

  std::string default_generator() const {
    if (statement == "pawlowski") return "grid";
    if (statement == "main" || statement == "sigma") return "random";
    return "ramp";
  }
};

inline SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig cfg;
  bool have_statement = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      auto notspace = [](unsigned char c) { return !std::isspace(c); };
      s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
      s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
      return s;
    };
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw precondition_error("sweep config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(stripped.substr(0, eq)), value = trim(stripped.substr(eq + 1));
    try {
      if (key == "statement") {
        cfg.statement = value;
        have_statement = true;
      } else if (key == "generator")
        cfg.generator = value;
      else if (key == "n_min")
        cfg.n_min = std::stoi(value);
      else if (key == "n_max")
        cfg.n_max = std::stoi(value);
      else if (key == "k_rule")
        cfg.k_rule = value;
      else if (key == "count")
        cfg.count = std::stoi(value);
      else if (key == "seed")
        cfg.seed = std::stoull(value);
      else if (key == "coord_bound")
        cfg.coord_bound = std::stoi(value);
      else if (key == "v_max")
        cfg.v_max = std::stoi(value);
      else if (key == "output")
        cfg.output = value;
      else
        throw precondition_error("sweep config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    } catch (const std::logic_error&) {
      throw precondition_error("sweep config line " + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
  if (!have_statement) throw precondition_error("sweep config: missing 'statement'");
  if (cfg.generator.empty()) cfg.generator = cfg.default_generator();
  if (cfg.n_min < 1 || cfg.n_max < cfg.n_min) throw precondition_error("sweep config: bad n range");
  return cfg;
}

inline SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw precondition_error("cannot open sweep config: " + path);
  return parse_sweep_config(in);
}

inline std::string serialize_sweep_config(const SweepConfig& cfg) {
  std::ostringstream out;
  out << "statement = " << cfg.statement << "\n";
  out << "generator = " << cfg.generator << "\n";
  out << "n_min = " << cfg.n_min << "\n";
  out << "n_max = " << cfg.n_max << "\n";
  out << "k_rule = " << cfg.k_rule << "\n";
  out << "count = " << cfg.count << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "coord_bound = " << cfg.coord_bound << "\n";
  out << "v_max = " << cfg.v_max << "\n";
  if (!cfg.output.empty()) out << "output = " << cfg.output << "\n";
  return out.str();
}

struct SweepRecord {
  std::string instance;  // canonical descriptor; records are sorted by it
  int n = 0;
  int k = -1;  // -1 when not applicable
  Rational len_I;
  Rational lhs;
  Rational bound;
  Rational ratio;
  Rational running_max;
  bool violation = false;  // only meaningful for constant-free statements
};

struct SweepSummary {
  std::size_t records = 0;
  Rational max_ratio;  // fitted constant C*
  bool constant_mode = false;
  std::vector<std::string> violations;
  KendallResult ratio_trend;  // per-record ratio vs n (diagnostic)
  KendallResult cstar_trend;  // per-size fitted constant vs n
  // Pass semantics for constant-mode sweeps: the per-size fitted constant
  // shows no significant increasing trend at level 0.01.
  bool trend_ok = true;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRecord> records;
  SweepSummary summary;
};

// ---------------------------------------------------------------------------
// Instance generators

namespace detail {

inline std::string pad_int(long long x, int width) {
  std::ostringstream s;
  s << x;
  std::string raw = s.str();
  std::string sign;
  if (!raw.empty() && raw[0] == '-') {
    sign = "-";
    raw.erase(raw.begin());
  }
  while (static_cast<int>(raw.size()) < width) raw.insert(raw.begin(), '0');
  return sign + raw;
}

/// Sorted nonconstant weight multisets with entries in [-bound, bound]. By
/// permutation invariance of w_pi . v these represent every weight vector on
/// the grid.
inline std::vector<std::vector<long long>> sorted_weight_multisets(int n, int bound) {
  std::vector<std::vector<long long>> out;
  std::vector<long long> current;
  std::function<void(long long)> rec = [&](long long lo) {
    if (static_cast<int>(current.size()) == n) {
      if (current.front() != current.back()) out.push_back(current);
      return;
    }
    for (long long x = lo; x <= bound; ++x) {
      current.push_back(x);
      rec(x);
      current.pop_back();
    }
  };
  rec(-bound);
  return out;
}

/// Strictly increasing vectors of length n with entries in [1, top].
inline std::vector<std::vector<long long>> increasing_vectors(int n, int top) {
  std::vector<std::vector<long long>> out;
  std::vector<long long> current;
  std::function<void(long long)> rec = [&](long long lo) {
    if (static_cast<int>(current.size()) == n) {
      out.push_back(current);
      return;
    }
    for (long long x = lo; x <= top - (n - 1 - static_cast<long long>(current.size())); ++x) {
      current.push_back(x);
      rec(x + 1);
      current.pop_back();
    }
  };
  rec(1);
  return out;
}

inline RationalVector to_rational_vector(const std::vector<long long>& xs) {
  std::vector<Rational> c;
  c.reserve(xs.size());
  for (long long x : xs) c.emplace_back(x);
  return RationalVector(std::move(c));
}

struct RandomInstance {
  RationalVector w, v;
  Interval interval;
  int index;
};

/// Seeded battery shared by the main-theorem and sigma sweeps: sorted
/// nonconstant weights in [-3, 3], strictly increasing v drawn from [1, 2n],
/// and intervals of cycling lengths {0, delta, 3 delta} anchored at an
/// achievable sum.
inline std::vector<RandomInstance> random_battery(const SweepConfig& cfg) {
  Xoshiro256pp rng(cfg.seed);
  std::vector<RandomInstance> out;
  out.reserve(static_cast<std::size_t>(cfg.count));
  for (int i = 0; i < cfg.count; ++i) {
    int n = cfg.n_min + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(cfg.n_max - cfg.n_min + 1)));
    std::vector<long long> wv(static_cast<std::size_t>(n));
    do {
      for (auto& x : wv) x = static_cast<long long>(rng.bounded(7)) - 3;
    } while (std::all_of(wv.begin(), wv.end(), [&](long long x) { return x == wv[0]; }));
    std::sort(wv.begin(), wv.end());
    std::vector<int> pool(static_cast<std::size_t>(2 * n));
    std::iota(pool.begin(), pool.end(), 1);
    partial_shuffle(pool, static_cast<std::size_t>(n), rng);
    std::vector<long long> vv(pool.begin(), pool.begin() + n);
    std::sort(vv.begin(), vv.end());

    RationalVector w = to_rational_vector(wv), v = to_rational_vector(vv);
    Rational dv = delta(v);
    Rational len = (i % 3 == 0) ? Rational(0) : (i % 3 == 1 ? dv : 3 * dv);
    std::vector<std::int32_t> perm = sample_permutation(static_cast<std::size_t>(n), rng);
    Rational anchor = 0;
    for (int j = 0; j < n; ++j) anchor += w[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(perm[j])];
    out.push_back({std::move(w), std::move(v), Interval(anchor, anchor + len), i});
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scaling studies for the subset-sum lemmas

struct ScalingRow {
  int n = 0;
  int k = 0;
  Rational max_mass;
  Rational bound;
  Rational ratio;
};

/// Exact max point mass of the k-element subset sum of A against the lemma
/// bound, for every (n, k) selected by the rule. A is (1..n), optionally with
/// distinct seeded perturbations on the rational grid.
inline std::vector<ScalingRow> scaling_study(SubsetMode mode, int n_min, int n_max, const std::string& k_rule,
                                             const std::string& base = "ramp", std::uint64_t seed = 1) {
  if (n_min < 2 || n_max < n_min) throw precondition_error("bad n range");
  if (k_rule != "all" && k_rule != "half") throw precondition_error("k_rule must be 'all' or 'half'");
  std::vector<ScalingRow> rows;
  Xoshiro256pp rng(seed);
  for (int n = n_min; n <= n_max; ++n) {
    std::vector<Rational> coords;
    coords.reserve(static_cast<std::size_t>(n));
    if (base == "ramp") {
      for (int i = 1; i <= n; ++i) coords.emplace_back(i);
    } else if (base == "perturbed") {
      // i + pi(i)/(2n): distinct by construction, still increasing
      std::vector<std::int32_t> perm = sample_permutation(static_cast<std::size_t>(n), rng);
      for (int i = 1; i <= n; ++i)
        coords.push_back(Rational(i) + Rational(perm[static_cast<std::size_t>(i - 1)], 2 * n));
    } else {
      throw precondition_error("base must be 'ramp' or 'perturbed'");
    }
    RationalVector A(std::move(coords));

    std::vector<int> ks;
    if (k_rule == "half")
      ks.push_back(std::max(1, n / 2));
    else if (mode == SubsetMode::with_replacement)
      for (int k = 1; k <= n; ++k) ks.push_back(k);
    else
      for (int k = 1; k <= n - 1; ++k) ks.push_back(k);

    if (mode == SubsetMode::with_replacement) {
      int k_top = *std::max_element(ks.begin(), ks.end());
      std::vector<DiscreteDistribution> dists = subset_sum_with_replacement_up_to(A, k_top);
      for (int k : ks) {
        const DiscreteDistribution& d = dists[static_cast<std::size_t>(k - 1)];
        Rational mass = max_point_mass_of(d).probability;
        Rational bound = *subset_lemma_bound(n, k, mode).value;
        rows.push_back({n, k, mass, bound, mass / bound});
      }
    } else {
      std::vector<DiscreteDistribution> layers = subset_sum_without_replacement_all(A);
      for (int k : ks) {
        Rational mass = max_point_mass_of(layers[static_cast<std::size_t>(k)]).probability;
        Rational bound = *subset_lemma_bound(n, k, mode).value;
        rows.push_back({n, k, mass, bound, mass / bound});
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// run_sweep

namespace detail {

inline void finish_summary(SweepResult& result) {
  std::sort(result.records.begin(), result.records.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.instance < b.instance; });
  Rational running = 0;
  std::vector<std::pair<long long, Rational>> trend_data;
  std::map<long long, Rational> per_size_max;
  trend_data.reserve(result.records.size());
  for (SweepRecord& rec : result.records) {
    running = std::max(running, rec.ratio);
    rec.running_max = running;
    trend_data.emplace_back(rec.n, rec.ratio);
    auto [it, fresh] = per_size_max.try_emplace(rec.n, rec.ratio);
    if (!fresh) it->second = std::max(it->second, rec.ratio);
    if (rec.violation) result.summary.violations.push_back(rec.instance);
  }
  result.summary.records = result.records.size();
  result.summary.max_ratio = running;
  result.summary.ratio_trend = kendall_trend(trend_data);
  std::vector<std::pair<long long, Rational>> cstar_data(per_size_max.begin(), per_size_max.end());
  result.summary.cstar_trend = kendall_trend(cstar_data);
  result.summary.trend_ok =
      !(result.summary.cstar_trend.tau > 0 && result.summary.cstar_trend.p_increasing < 0.01);
}

}  // namespace detail

/// Evaluates one paper statement over a generated instance family. Records
/// come back in canonical descriptor order with the fitted constant
/// C* = max ratio; constant-mode summaries carry the Kendall trend check,
/// constant-free ones a violations list.
inline SweepResult run_sweep(const SweepConfig& cfg_in) {
  SweepConfig cfg = cfg_in;
  if (cfg.generator.empty()) cfg.generator = cfg.default_generator();
  SweepResult result;
  result.config = cfg;

  if (cfg.statement == "pawlowski") {
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
      int v_top = cfg.v_max > 0 ? cfg.v_max : n + 1;
      std::vector<std::vector<long long>> ws = detail::sorted_weight_multisets(n, cfg.coord_bound);
      std::vector<std::vector<long long>> vs = detail::increasing_vectors(n, v_top);
      if (ws.empty() || vs.empty()) throw precondition_error("sweep generator produced no valid instances");
      std::size_t pairs = ws.size() * vs.size();
      std::vector<SweepRecord> local(pairs);
      for_each_index(pairs, 0, [&](std::size_t idx) {
        const auto& wv = ws[idx / vs.size()];
        const auto& vv = vs[idx % vs.size()];
        RationalVector w = detail::to_rational_vector(wv), v = detail::to_rational_vector(vv);
        PawlowskiResult pr = pawlowski_check(w, v);
        SweepRecord rec;
        rec.n = n;
        rec.lhs = pr.max_mass;
        rec.bound = pr.bound;
        rec.ratio = pr.max_mass / pr.bound;
        rec.violation = !pr.satisfied;
        rec.instance = "n=" + detail::pad_int(n, 2) + ";w=" + w.str() + ";v=" + v.str();
        local[idx] = std::move(rec);
      });
      for (auto& rec : local) result.records.push_back(std::move(rec));
    }
    result.summary.constant_mode = false;
  } else if (cfg.statement == "lemma-with" || cfg.statement == "lemma-without") {
    SubsetMode mode = cfg.statement == "lemma-with" ? SubsetMode::with_replacement : SubsetMode::without_replacement;
    std::string base = cfg.generator == "perturbed" ? "perturbed" : "ramp";
    std::vector<ScalingRow> rows = scaling_study(mode, cfg.n_min, cfg.n_max, cfg.k_rule, base, cfg.seed);
    if (rows.empty()) throw precondition_error("sweep generator produced no valid instances");
    for (const ScalingRow& row : rows) {
      SweepRecord rec;
      rec.n = row.n;
      rec.k = row.k;
      rec.lhs = row.max_mass;
      rec.bound = row.bound;
      rec.ratio = row.ratio;
      rec.instance = "n=" + detail::pad_int(row.n, 3) + ";k=" + detail::pad_int(row.k, 3) + ";A=" + base;
      result.records.push_back(std::move(rec));
    }
    result.summary.constant_mode = true;
  } else if (cfg.statement == "main" || cfg.statement == "sigma") {
    std::vector<detail::RandomInstance> battery = detail::random_battery(cfg);
    if (battery.empty()) throw precondition_error("sweep generator produced no valid instances");
    std::vector<SweepRecord> local(battery.size());
    for_each_index(battery.size(), 0, [&](std::size_t idx) {
      const detail::RandomInstance& inst = battery[idx];
      DiscreteDistribution dist = perm_sum_distribution(inst.w, inst.v);
      Rational lhs = prob_mass(dist, inst.interval);
      Rational bound;
      std::string tag;
      if (cfg.statement == "main") {
        OptimizedIndices opt = optimize_indices(inst.w, inst.v, inst.interval.length());
        bound = *opt.report.value;
        tag = ";i1=" + std::to_string(opt.i1) + ";i2=" + std::to_string(opt.i2);
      } else {
        bound = *sigma_corollary_bound(inst.w, inst.v, inst.interval.length()).value;
      }
      SweepRecord rec;
      rec.n = static_cast<int>(inst.w.size());
      rec.len_I = inst.interval.length();
      rec.lhs = lhs;
      rec.bound = bound;
      rec.ratio = lhs / bound;
      rec.instance = "i=" + detail::pad_int(inst.index, 4) + ";n=" + detail::pad_int(rec.n, 2) + ";len=" +
                     to_string(rec.len_I) + ";w=" + inst.w.str() + ";v=" + inst.v.str() + tag;
      local[idx] = std::move(rec);
    });
    for (auto& rec : local) result.records.push_back(std::move(rec));
    result.summary.constant_mode = true;
  } else {
    throw precondition_error("unknown sweep statement: " + cfg.statement);
  }

  detail::finish_summary(result);
  return result;
}

/// CSV schema (version-pinned, quoted descriptor last):
/// n,k,len_I,lhs,bound,ratio,ratio_float,instance
inline void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "# permsum " << kVersion << "\n";
  out << "# config: ";
  std::string cfg = serialize_sweep_config(result.config);
  for (char& c : cfg)
    if (c == '\n') c = ';';
  out << cfg << "\n";
  out << "n,k,len_I,lhs,bound,ratio,ratio_float,instance\n";
  for (const SweepRecord& rec : result.records) {
    out << rec.n << ',';
    if (rec.k >= 0) out << rec.k;
    out << ',' << to_string(rec.len_I) << ',' << to_string(rec.lhs) << ',' << to_string(rec.bound) << ','
        << to_string(rec.ratio) << ',' << format_double(static_cast<double>(rec.ratio)) << ",\"" << rec.instance
        << "\"\n";
  }
}

inline std::string sweep_summary_text(const SweepResult& result) {
  std::ostringstream out;
  out << "records=" << result.summary.records << "\n";
  out << "max_ratio=" << to_string(result.summary.max_ratio) << "\n";
  out << "max_ratio_float=" << format_double(static_cast<double>(result.summary.max_ratio)) << "\n";
  out << "constant_mode=" << (result.summary.constant_mode ? "true" : "false") << "\n";
  if (result.summary.constant_mode) {
    out << "ratio_kendall_tau=" << format_double(result.summary.ratio_trend.tau) << "\n";
    out << "ratio_kendall_p_increasing=" << format_double(result.summary.ratio_trend.p_increasing) << "\n";
    out << "cstar_kendall_tau=" << format_double(result.summary.cstar_trend.tau) << "\n";
    out << "cstar_kendall_p_increasing=" << format_double(result.summary.cstar_trend.p_increasing) << "\n";
    out << "trend_ok=" << (result.summary.trend_ok ? "true" : "false") << "\n";
  } else {
    out << "violations=" << result.summary.violations.size() << "\n";
    for (const std::string& v : result.summary.violations) out << "violation=" << v << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Extremal-instance search

enum class Objective { point_mass, concentration };

struct ExtremalResult {
  RationalVector w{{Rational(0)}};
  RationalVector v{{Rational(0)}};
  Rational value;
  std::string mode;  // "exhaustive" or "hill-climb"
};

namespace detail {

inline Rational extremal_objective(const RationalVector& w, const RationalVector& v, Objective obj, const Rational& t,
                                   const ExactOptions& opts) {
  DiscreteDistribution d = perm_sum_distribution(w, v, opts);
  if (obj == Objective::point_mass) return max_point_mass_of(d).probability;
  return concentration_function(d, t);
}

}  // namespace detail

/// Best (w, v) on the coordinate grid [-bound, bound]: exhaustive over sorted
/// representatives for n <= 5 (exact global optimum by permutation
/// invariance), seeded single-coordinate hill climbing with restarts above.
inline ExtremalResult extremal_search(int n, int coord_bound, Objective obj, const Rational& t = 0,
                                      std::uint64_t seed = 1, int restarts = 32, const ExactOptions& opts = {}) {
  if (n < 2) throw precondition_error("search needs n >= 2");
  if (n > opts.cap) throw cap_exceeded_error("n exceeds the exact engine cap");
  if (2 * coord_bound + 1 < n) throw precondition_error("grid too small for all-distinct v");

  ExtremalResult best;
  best.value = -1;
  if (n <= 5) {
    best.mode = "exhaustive";
    std::vector<std::vector<long long>> ws = detail::sorted_weight_multisets(n, coord_bound);
    std::vector<std::vector<long long>> vs;
    {
      // strictly increasing v with entries in [-bound, bound]
      for (auto& raw : detail::increasing_vectors(n, 2 * coord_bound + 1))
        vs.push_back([&] {
          std::vector<long long> shifted = raw;
          for (auto& x : shifted) x -= coord_bound + 1;
          return shifted;
        }());
    }
    for (const auto& wv : ws)
      for (const auto& vv : vs) {
        RationalVector w = detail::to_rational_vector(wv), v = detail::to_rational_vector(vv);
        Rational val = detail::extremal_objective(w, v, obj, t, opts);
        if (val > best.value) {
          best.value = val;
          best.w = w;
          best.v = v;
        }
      }
    return best;
  }

  best.mode = "hill-climb";
  Xoshiro256pp rng(seed);
  for (int restart = 0; restart < restarts; ++restart) {
    std::vector<long long> wv(static_cast<std::size_t>(n)), vv;
    do {
      for (auto& x : wv) x = static_cast<long long>(rng.bounded(2 * static_cast<std::uint64_t>(coord_bound) + 1)) - coord_bound;
    } while (std::all_of(wv.begin(), wv.end(), [&](long long x) { return x == wv[0]; }));
    std::vector<long long> pool;
    for (long long x = -coord_bound; x <= coord_bound; ++x) pool.push_back(x);
    partial_shuffle(pool, static_cast<std::size_t>(n), rng);
    vv.assign(pool.begin(), pool.begin() + n);
    std::sort(vv.begin(), vv.end());

    Rational current = detail::extremal_objective(detail::to_rational_vector(wv), detail::to_rational_vector(vv), obj,
                                                  t, opts);
    bool improved = true;
    while (improved) {
      improved = false;
      for (int which = 0; which < 2 && !improved; ++which) {
        auto& vec = which == 0 ? wv : vv;
        for (std::size_t i = 0; i < vec.size() && !improved; ++i)
          for (long long step : {-1LL, +1LL}) {
            std::vector<long long> cand = vec;
            cand[i] += step;
            if (cand[i] < -coord_bound || cand[i] > coord_bound) continue;
            std::vector<long long> cw = which == 0 ? cand : wv;
            std::vector<long long> cv = which == 0 ? vv : cand;
            std::sort(cv.begin(), cv.end());
            if (std::adjacent_find(cv.begin(), cv.end()) != cv.end()) continue;
            if (std::all_of(cw.begin(), cw.end(), [&](long long x) { return x == cw[0]; })) continue;
            Rational val =
                detail::extremal_objective(detail::to_rational_vector(cw), detail::to_rational_vector(cv), obj, t, opts);
            if (val > current) {
              current = val;
              vec = cand;
              if (which == 1) {
                std::sort(vv.begin(), vv.end());
              }
              improved = true;
              break;
            }
          }
      }
    }
    if (current > best.value) {
      best.value = current;
      best.w = detail::to_rational_vector(wv);
      best.v = detail::to_rational_vector(vv);
    }
  }
  return best;
}

}  // namespace permsum
