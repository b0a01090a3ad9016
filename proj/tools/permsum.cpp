// Command-line front end for the permsum library: exact distributions,
// Monte Carlo estimators, bound evaluators, poset width tools, sweeps, and
// extremal search. Scalar results print as key=value lines, tabular results
// as CSV; every document starts with a reproducibility preamble in comment
// lines. Exit codes: 0 success, 2 input/precondition error, 3 resource cap.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "permsum/bounds.hpp"
#include "permsum/distribution.hpp"
#include "permsum/exact_engines.hpp"
#include "permsum/experiments.hpp"
#include "permsum/grid.hpp"
#include "permsum/poset.hpp"
#include "permsum/sampling.hpp"
#include "permsum/version.hpp"

namespace {

using namespace permsum;

// Vector flags accept an inline comma list or @path (one value per line).
RationalVector vector_arg(const std::string& raw, const char* name) {
  if (raw.empty()) throw precondition_error(std::string("missing --") + name);
  if (raw[0] != '@') return parse_vector(raw);
  std::ifstream in(raw.substr(1));
  if (!in) throw precondition_error("cannot open vector file: " + raw.substr(1));
  std::vector<Rational> coords;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    coords.push_back(parse_rational(line));
  }
  if (coords.empty()) throw precondition_error("vector file is empty: " + raw.substr(1));
  return RationalVector(std::move(coords));
}

Interval interval_arg(const std::string& raw) {
  auto colon = raw.find(':');
  if (colon == std::string::npos) throw precondition_error("interval must be lo:hi");
  return Interval(parse_rational(raw.substr(0, colon)), parse_rational(raw.substr(colon + 1)));
}

unsigned threads_arg(unsigned flag_value) {
  if (flag_value != 0) return flag_value;
  if (const char* env = std::getenv("PERMSUM_THREADS")) {
    long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) return static_cast<unsigned>(parsed);
  }
  return 0;  // auto
}

// Thread counts are deliberately left out: outputs are byte-identical for
// every --threads value, and the preamble must not break that.
void preamble(const std::string& command, const std::vector<std::pair<std::string, std::string>>& args) {
  std::cout << "# permsum " << kVersion << "\n";
  std::cout << "# command: " << command;
  for (const auto& [key, value] : args) std::cout << ' ' << key << '=' << value;
  std::cout << "\n";
}

void print_distribution_csv(const DiscreteDistribution& d) {
  std::cout << "value,count,probability\n";
  for (std::size_t i = 0; i < d.size(); ++i)
    std::cout << to_string(d.value_at(i)) << ',' << d.counts()[i].str() << ',' << to_string(d.probability_at(i))
              << "\n";
}

void print_scalar(const std::string& format, const Rational& value) {
  if (format == "csv")
    std::cout << "value\n" << to_string(value) << "\n";
  else
    std::cout << "value=" << to_string(value) << "\n";
}

void print_estimate(const std::string& format, const McEstimate& e) {
  if (format == "csv") {
    std::cout << "estimate,stderr,samples,seed\n";
    std::cout << format_double(e.estimate) << ',' << format_double(e.stderr_) << ',' << e.samples << ',' << e.seed
              << "\n";
  } else {
    std::cout << "estimate=" << format_double(e.estimate) << "\n";
    std::cout << "stderr=" << format_double(e.stderr_) << "\n";
    std::cout << "samples=" << e.samples << "\n";
    std::cout << "seed=" << e.seed << "\n";
  }
}

// Returns false when preconditions failed (caller exits 2).
bool print_report(const BoundReport& report) {
  std::cout << "statement=" << report.statement << "\n";
  for (const auto& [key, value] : report.inputs) std::cout << key << '=' << value << "\n";
  std::cout << "constant_mode=" << (report.constant_mode ? "true" : "false") << "\n";
  std::cout << "preconditions_ok=" << (report.preconditions_ok ? "true" : "false") << "\n";
  for (const std::string& v : report.violations) std::cout << "violated=" << v << "\n";
  if (report.value) {
    std::cout << "value=" << to_string(*report.value) << "\n";
    std::cout << "value_float=" << format_double(static_cast<double>(*report.value)) << "\n";
  } else {
    std::cout << "value=+inf\n";
  }
  return report.preconditions_ok;
}

struct ExactArgs {
  std::string w, v;
  std::string point, interval, conc;
  bool full = false;
  int cap = 12;
  unsigned threads = 0;
  std::string format = "structured";
};

int run_exact(const ExactArgs& a) {
  RationalVector w = vector_arg(a.w, "w"), v = vector_arg(a.v, "v");
  int selectors = static_cast<int>(!a.point.empty()) + static_cast<int>(!a.interval.empty()) +
                  static_cast<int>(!a.conc.empty()) + static_cast<int>(a.full);
  if (selectors != 1) throw precondition_error("choose exactly one of --point, --interval, --conc, --full");
  ExactOptions opts{a.cap, threads_arg(a.threads)};

  std::vector<std::pair<std::string, std::string>> echo{{"w", w.str()}, {"v", v.str()}, {"cap", std::to_string(a.cap)}};
  if (!a.point.empty()) echo.emplace_back("point", a.point);
  if (!a.interval.empty()) echo.emplace_back("interval", a.interval);
  if (!a.conc.empty()) echo.emplace_back("conc", a.conc);
  if (a.full) echo.emplace_back("full", "1");
  preamble("exact", echo);

  DiscreteDistribution dist = perm_sum_distribution(w, v, opts);
  if (a.full) {
    print_distribution_csv(dist);
  } else if (!a.point.empty()) {
    print_scalar(a.format, prob_mass(dist, Interval::point(parse_rational(a.point))));
  } else if (!a.interval.empty()) {
    print_scalar(a.format, prob_mass(dist, interval_arg(a.interval)));
  } else {
    print_scalar(a.format, concentration_function(dist, parse_rational(a.conc)));
  }
  return 0;
}

struct McArgs {
  std::string w, v;
  std::string point, interval, conc;
  std::int64_t samples = 0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  int resamples = 100;
  std::string format = "structured";
};

int run_mc(const McArgs& a) {
  RationalVector w = vector_arg(a.w, "w"), v = vector_arg(a.v, "v");
  int selectors =
      static_cast<int>(!a.point.empty()) + static_cast<int>(!a.interval.empty()) + static_cast<int>(!a.conc.empty());
  if (selectors != 1) throw precondition_error("choose exactly one of --point, --interval, --conc");
  unsigned threads = threads_arg(a.threads);

  std::vector<std::pair<std::string, std::string>> echo{{"w", w.str()},
                                                        {"v", v.str()},
                                                        {"samples", std::to_string(a.samples)},
                                                        {"seed", std::to_string(a.seed)}};
  if (!a.point.empty()) echo.emplace_back("point", a.point);
  if (!a.interval.empty()) echo.emplace_back("interval", a.interval);
  if (!a.conc.empty()) {
    echo.emplace_back("conc", a.conc);
    echo.emplace_back("resamples", std::to_string(a.resamples));
  }
  preamble("mc", echo);

  McEstimate est;
  if (!a.point.empty())
    est = estimate_point_mass(w, v, parse_rational(a.point), a.samples, a.seed, threads);
  else if (!a.interval.empty())
    est = estimate_interval_mass(w, v, interval_arg(a.interval), a.samples, a.seed, threads);
  else
    est = estimate_concentration_function(make_perm_sum_sampler(w, v), parse_rational(a.conc), a.samples, a.seed,
                                          threads, a.resamples);
  print_estimate(a.format, est);
  return 0;
}

struct BoundsArgs {
  std::string statement;
  std::string w, v;
  std::string len_I = "0";
  int i1 = 0, i2 = 0;
  bool optimize = false;
  std::string eps;
  int n = 0, k = 0;
  int cap = 12;
  std::vector<std::string> L;
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

int run_bounds(const BoundsArgs& a) {
  unsigned threads = threads_arg(a.threads);
  if (a.statement == "main") {
    RationalVector w = vector_arg(a.w, "w"), v = vector_arg(a.v, "v");
    if (a.optimize) {
      preamble("bounds",
               {{"statement", a.statement}, {"w", w.str()}, {"v", v.str()}, {"len_I", a.len_I}, {"optimize", "1"}});
      OptimizedIndices best = optimize_indices(w, v, parse_rational(a.len_I));
      std::cout << "chosen_i1=" << best.i1 << "\n";
      std::cout << "chosen_i2=" << best.i2 << "\n";
      return print_report(best.report) ? 0 : 2;
    }
    if (a.i1 < 1 || a.i2 < 1) throw precondition_error("--i1 and --i2 are required (or pass --optimize)");
    preamble("bounds", {{"statement", a.statement},
                        {"w", w.str()},
                        {"v", v.str()},
                        {"len_I", a.len_I},
                        {"i1", std::to_string(a.i1)},
                        {"i2", std::to_string(a.i2)}});
    return print_report(main_theorem_bound(w, v, parse_rational(a.len_I), a.i1, a.i2)) ? 0 : 2;
  }
  if (a.statement == "sigma") {
    RationalVector w = vector_arg(a.w, "w"), v = vector_arg(a.v, "v");
    preamble("bounds", {{"statement", a.statement}, {"w", w.str()}, {"v", v.str()}, {"len_I", a.len_I}});
    return print_report(sigma_corollary_bound(w, v, parse_rational(a.len_I))) ? 0 : 2;
  }
  if (a.statement == "repetition") {
    RationalVector w = vector_arg(a.w, "w"), v = vector_arg(a.v, "v");
    if (a.eps.empty()) throw precondition_error("--eps is required for the repetition bound");
    preamble("bounds", {{"statement", a.statement}, {"w", w.str()}, {"v", v.str()}, {"eps", a.eps}});
    return print_report(repetition_corollary_bound(w, v, parse_rational(a.eps))) ? 0 : 2;
  }
  if (a.statement == "pawlowski") {
    RationalVector w = vector_arg(a.w, "w"), v = vector_arg(a.v, "v");
    preamble("bounds", {{"statement", a.statement}, {"w", w.str()}, {"v", v.str()}, {"cap", std::to_string(a.cap)}});
    PawlowskiResult res = pawlowski_check(w, v, ExactOptions{a.cap, threads});
    std::cout << "statement=pawlowski\n";
    std::cout << "n=" << res.n << "\n";
    std::cout << "bound=" << to_string(res.bound) << "\n";
    std::cout << "max_mass=" << to_string(res.max_mass) << "\n";
    std::cout << "witness=" << to_string(res.witness) << "\n";
    std::cout << "satisfied=" << (res.satisfied ? "true" : "false") << "\n";
    std::cout << "note=hypothesis implemented as nonconstant w; the point mass is invariant under w -> w + c\n";
    return 0;
  }
  if (a.statement == "lemma-with" || a.statement == "lemma-without") {
    if (a.n < 1) throw precondition_error("--n is required");
    preamble("bounds", {{"statement", a.statement}, {"n", std::to_string(a.n)}, {"k", std::to_string(a.k)}});
    SubsetMode mode = a.statement == "lemma-with" ? SubsetMode::with_replacement : SubsetMode::without_replacement;
    return print_report(subset_lemma_bound(a.n, a.k, mode)) ? 0 : 2;
  }
  if (a.statement == "soze") {
    RationalVector w = vector_arg(a.w, "w");
    if (a.L.empty()) throw precondition_error("pass at least one --L value");
    std::vector<Rational> L_values;
    L_values.reserve(a.L.size());
    for (const std::string& raw : a.L) L_values.push_back(parse_rational(raw));
    std::vector<std::pair<std::string, std::string>> echo{
        {"statement", a.statement}, {"w", w.str()}, {"samples", std::to_string(a.samples)}, {"seed", std::to_string(a.seed)}};
    for (const Rational& L : L_values) echo.emplace_back("L", to_string(L));
    preamble("bounds", echo);
    SozeProfile profile = soze_decay_profile(w, L_values, a.samples, a.seed, threads);
    std::cout << "# mean_shift=" << to_string(profile.mean_shift) << "\n";
    std::cout << "# norm2=" << to_string(profile.norm2) << "\n";
    std::cout << "L,estimate,stderr,samples,seed\n";
    for (const SozePoint& point : profile.points)
      std::cout << to_string(point.L) << ',' << format_double(point.estimate.estimate) << ','
                << format_double(point.estimate.stderr_) << ',' << point.estimate.samples << ','
                << point.estimate.seed << "\n";
    return 0;
  }
  throw precondition_error("unknown --statement: " + a.statement);
}

struct WidthArgs {
  int n = 0, k = 0;
  bool oracle = false;
  int cap = 500;
};

int run_width(const WidthArgs& a) {
  preamble("width", {{"n", std::to_string(a.n)},
                     {"k", std::to_string(a.k)},
                     {"oracle", a.oracle ? "1" : "0"},
                     {"cap", std::to_string(a.cap)}});
  WidthCertificate cert = width_certificate(a.n, a.k, a.oracle, a.cap);
  std::cout << "n=" << a.n << "\n";
  std::cout << "k=" << a.k << "\n";
  std::cout << "stanley_width=" << cert.stanley.str() << "\n";
  if (cert.dilworth) {
    std::cout << "dilworth_width=" << *cert.dilworth << "\n";
    std::cout << "agree=" << (cert.agree ? "true" : "false") << "\n";
  }
  return cert.agree ? 0 : 1;
}

int run_sweep_cmd(const std::string& config_path) {
  SweepConfig cfg = load_sweep_config(config_path);
  preamble("sweep", {{"config", config_path}, {"statement", cfg.statement}, {"seed", std::to_string(cfg.seed)}});
  SweepResult result = run_sweep(cfg);
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output);
    if (!out) throw precondition_error("cannot open sweep output: " + cfg.output);
    write_sweep_csv(result, out);
    std::cout << "csv=" << cfg.output << "\n";
    std::cout << sweep_summary_text(result);
  } else {
    write_sweep_csv(result, std::cout);
    std::istringstream summary(sweep_summary_text(result));
    std::string line;
    while (std::getline(summary, line)) std::cout << "# " << line << "\n";
  }
  return 0;
}

struct SearchArgs {
  int n = 0;
  int coord_bound = 0;
  std::string objective = "point-mass";
  std::string t = "0";
  std::uint64_t seed = 1;
  int restarts = 32;
  int cap = 12;
};

int run_search(const SearchArgs& a) {
  preamble("search", {{"n", std::to_string(a.n)},
                      {"coord_bound", std::to_string(a.coord_bound)},
                      {"objective", a.objective},
                      {"t", a.t},
                      {"seed", std::to_string(a.seed)},
                      {"restarts", std::to_string(a.restarts)}});
  Objective obj;
  if (a.objective == "point-mass")
    obj = Objective::point_mass;
  else if (a.objective == "concentration")
    obj = Objective::concentration;
  else
    throw precondition_error("objective must be point-mass or concentration");
  ExtremalResult best = extremal_search(a.n, a.coord_bound, obj, parse_rational(a.t), a.seed, a.restarts,
                                        ExactOptions{a.cap, 0});
  std::cout << "mode=" << best.mode << "\n";
  std::cout << "value=" << to_string(best.value) << "\n";
  std::cout << "value_float=" << format_double(static_cast<double>(best.value)) << "\n";
  std::cout << "w=" << best.w.str() << "\n";
  std::cout << "v=" << best.v.str() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact and Monte Carlo computation for random-permutation sums"};
  app.require_subcommand(1);

  ExactArgs exact_args;
  CLI::App* exact = app.add_subcommand("exact", "exact distribution / point mass / interval mass / Q(S,t)");
  exact->add_option("--w", exact_args.w, "weight vector (comma list or @file)")->required();
  exact->add_option("--v", exact_args.v, "value vector (comma list or @file)")->required();
  exact->add_option("--point", exact_args.point, "point x for P(S = x)");
  exact->add_option("--interval", exact_args.interval, "closed interval lo:hi");
  exact->add_option("--conc", exact_args.conc, "interval length t for Q(S,t)");
  exact->add_flag("--full", exact_args.full, "print the whole distribution as CSV");
  exact->add_option("--cap", exact_args.cap, "largest n enumerated exactly");
  exact->add_option("--threads", exact_args.threads, "worker threads (0 = auto)");
  exact->add_option("--format", exact_args.format, "structured | csv")->check(CLI::IsMember({"structured", "csv"}));

  McArgs mc_args;
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo estimates with standard errors");
  mc->add_option("--w", mc_args.w)->required();
  mc->add_option("--v", mc_args.v)->required();
  mc->add_option("--point", mc_args.point);
  mc->add_option("--interval", mc_args.interval);
  mc->add_option("--conc", mc_args.conc);
  mc->add_option("--samples", mc_args.samples, "number of samples")->required();
  mc->add_option("--seed", mc_args.seed, "64-bit master seed");
  mc->add_option("--threads", mc_args.threads);
  mc->add_option("--resamples", mc_args.resamples, "bootstrap replicates for --conc");
  mc->add_option("--format", mc_args.format)->check(CLI::IsMember({"structured", "csv"}));

  BoundsArgs bounds_args;
  CLI::App* bounds = app.add_subcommand("bounds", "evaluate a stated bound");
  bounds->add_option("--statement", bounds_args.statement,
                     "main | sigma | repetition | pawlowski | lemma-with | lemma-without | soze")
      ->required();
  bounds->add_option("--w", bounds_args.w);
  bounds->add_option("--v", bounds_args.v);
  bounds->add_option("--len-I", bounds_args.len_I, "interval length");
  bounds->add_option("--i1", bounds_args.i1);
  bounds->add_option("--i2", bounds_args.i2);
  bounds->add_flag("--optimize", bounds_args.optimize, "search (i1, i2) minimizing the bound");
  bounds->add_option("--eps", bounds_args.eps);
  bounds->add_option("--n", bounds_args.n);
  bounds->add_option("--k", bounds_args.k);
  bounds->add_option("--cap", bounds_args.cap);
  bounds->add_option("--L", bounds_args.L, "decay offsets (repeatable)");
  bounds->add_option("--samples", bounds_args.samples);
  bounds->add_option("--seed", bounds_args.seed);
  bounds->add_option("--threads", bounds_args.threads);

  WidthArgs width_args;
  CLI::App* width = app.add_subcommand("width", "poset width certificate");
  width->add_option("--n", width_args.n)->required();
  width->add_option("--k", width_args.k)->required();
  width->add_flag("--oracle", width_args.oracle, "also run the matching-based width oracle");
  width->add_option("--cap", width_args.cap, "largest poset the oracle accepts");

  std::string sweep_config;
  CLI::App* sweep = app.add_subcommand("sweep", "run a configured bound sweep");
  sweep->add_option("--config", sweep_config, "sweep config file")->required();

  SearchArgs search_args;
  CLI::App* search = app.add_subcommand("search", "extremal instance search");
  search->add_option("--n", search_args.n)->required();
  search->add_option("--coord-bound", search_args.coord_bound)->required();
  search->add_option("--objective", search_args.objective, "point-mass | concentration");
  search->add_option("--t", search_args.t, "interval length for the concentration objective");
  search->add_option("--seed", search_args.seed);
  search->add_option("--restarts", search_args.restarts);
  search->add_option("--cap", search_args.cap);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(exact)) return run_exact(exact_args);
    if (app.got_subcommand(mc)) return run_mc(mc_args);
    if (app.got_subcommand(bounds)) return run_bounds(bounds_args);
    if (app.got_subcommand(width)) return run_width(width_args);
    if (app.got_subcommand(sweep)) return run_sweep_cmd(sweep_config);
    if (app.got_subcommand(search)) return run_search(search_args);
  } catch (const precondition_error& e) {
    std::cerr << "error=" << e.what() << "\n";
    return 2;
  } catch (const cap_exceeded_error& e) {
    std::cerr << "error=" << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error=" << e.what() << "\n";
    return 1;
  }
  return 0;
}
