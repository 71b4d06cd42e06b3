// randpoly: command-line front end for the randpoly library.
//
//   randpoly simulate   --n 256 --mu 1 --trials 10000 --seed 7
//   randpoly kacrice    --n 256 --interval "(-1, 1)"
//   randpoly classify   --profile mixed-sign --n 1024 --interval "[0.995, 1.005)"
//   randpoly experiment run halving --seed 1 --out results
//   randpoly report results
//
// Exit status: 0 success or pass verdict, 2 fail verdict, 1 error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "randpoly/comparison.hpp"
#include "randpoly/experiments.hpp"
#include "randpoly/kacrice.hpp"
#include "randpoly/montecarlo.hpp"
#include "randpoly/serialization.hpp"

namespace {

using namespace randpoly;
using nlohmann::json;

struct ProfileArgs {
  ExperimentConfig cfg;  // only the profile fields are used
  std::size_t n = 64;
  std::string profile_json;
  std::string noise = "gaussian";
  double noise_mu = 0.0;
  std::string interval = "R";

  void add(CLI::App* app) {
    app->add_option("--profile", cfg.profile,
                    "kac, hyperbolic, power, mixed-sign or hyperbolic-derivative")
        ->capture_default_str();
    app->add_option("--profile-json", profile_json,
                    "read the profile {n, rho, b, c, family} from a JSON file instead");
    app->add_option("-n,--n", n, "degree")->capture_default_str();
    app->add_option("--L", cfg.L, "hyperbolic parameter")->capture_default_str();
    app->add_option("--mu", cfg.mu, "mean scale of the coefficients")->capture_default_str();
    app->add_option("--rho", cfg.rho, "growth exponent of c_j")->capture_default_str();
    app->add_option("--rho-mean", cfg.rho_mean, "growth exponent of b_j (power profile)");
    app->add_option("--rho-prime", cfg.rho_prime, "even-index mean exponent (mixed-sign)");
    app->add_option("--rho-dprime", cfg.rho_dprime, "odd-index mean exponent (mixed-sign)");
    app->add_option("--k", cfg.k, "derivative order (hyperbolic-derivative)");
    app->add_option("--interval", interval, "interval set, e.g. \"[-1, 1)\" or \"R\"")
        ->capture_default_str();
  }

  void add_noise(CLI::App* app) {
    app->add_option("--noise", noise, "gaussian, rademacher, uniform or two-point")
        ->capture_default_str();
    app->add_option("--noise-mu", noise_mu, "shift added to every innovation");
  }

  CoefficientProfile profile() const {
    if (!profile_json.empty()) {
      std::ifstream in(profile_json);
      if (!in) throw std::runtime_error("cannot read " + profile_json);
      return profile_from_json(json::parse(in));
    }
    return make_profile(cfg, n);
  }

  NoiseSpec noise_spec() const { return {noise_family_from_string(noise), noise_mu}; }
};

int run_simulate(const ProfileArgs& a, std::uint64_t trials, std::uint64_t seed, unsigned threads,
                 bool csv) {
  const CoefficientProfile p = a.profile();
  const auto pieces = parse_interval_set(a.interval);
  MonteCarloOptions opts;
  opts.threads = threads;
  const auto rows = simulate_counts(p, a.noise_spec(), pieces, trials, seed, opts);
  std::vector<int> total(trials, 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < trials; ++i) {
      total[i] = (total[i] == kDiscardedCount || row[i] == kDiscardedCount) ? kDiscardedCount
                                                                            : total[i] + row[i];
    }
  }
  const TrialStatistics st = count_statistics(total);
  if (csv) {
    std::cout << trial_statistics_csv_header() << "\n" << to_csv_row(p.degree(), st) << "\n";
  } else {
    json out{{"profile_id", p.id()}, {"n", p.degree()}, {"interval", a.interval},
             {"noise", a.noise_spec()}, {"seed", seed}, {"statistics", st}};
    std::cout << out.dump(2) << "\n";
  }
  if (st.flagged) std::cerr << "warning: discard rate above 0.1%\n";
  return 0;
}

int run_kacrice(const ProfileArgs& a, const std::string& denom, double abs_tol, double rel_tol) {
  const CoefficientProfile p = a.profile();
  KacRiceOptions opts;
  opts.erf_denominator = erf_denominator_from_string(denom);
  opts.abs_tol = abs_tol;
  opts.rel_tol = rel_tol;
  json parts = json::array();
  double total = 0.0;
  for (const auto& iv : parse_interval_set(a.interval)) {
    const KacRiceResult r = kac_rice_interval(p, iv, opts);
    total += r.total;
    parts.push_back(r);
  }
  json out{{"profile_id", p.id()}, {"n", p.degree()},
           {"erf_denominator", denom}, {"total", total}, {"parts", parts}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_classify(const ProfileArgs& a, const ClassifierOptions& co, bool predict) {
  const CoefficientProfile p = a.profile();
  json reports = json::array();
  for (const auto& iv : parse_interval_set(a.interval)) {
    if (predict) {
      const CountPrediction pr = predict_count(p, iv, co);
      json j = pr.report;
      j["prediction"] = {{"value", pr.value ? json(*pr.value) : json(nullptr)},
                         {"order_one", pr.order_one},
                         {"bounded_error_band", pr.bounded_error_band},
                         {"description", pr.description}};
      reports.push_back(j);
    } else {
      reports.push_back(classify_regime(p, iv, co));
    }
  }
  std::cout << json{{"profile_id", p.id()}, {"n", p.degree()}, {"reports", reports}}.dump(2)
            << "\n";
  return 0;
}

int run_experiment_cmd(const std::string& name, const std::string& config_path,
                       std::optional<std::uint64_t> seed, const std::string& out_dir,
                       std::optional<std::uint64_t> trials, std::optional<unsigned> threads) {
  json j = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read config " + config_path);
    j = json::parse(in);
  }
  j["name"] = name;
  if (seed) j["seed"] = *seed;
  if (!out_dir.empty()) j["output"] = out_dir;
  if (trials) j["trials"] = *trials;
  if (threads) j["threads"] = *threads;
  const ExperimentConfig cfg = config_from_json(j);
  const ExperimentRecord rec = run_experiment(cfg);
  std::cout << rec.config.name << " [" << rec.theorem << "] "
            << (rec.verdict ? (*rec.verdict ? "PASS" : "FAIL") : "NO VERDICT") << " in "
            << rec.wall_clock_seconds << " s\n"
            << rec.verdict_detail << "\n"
            << "written to " << cfg.output << "/" << cfg.name << "-" << record_hash(rec)
            << ".{csv,json}\n";
  return rec.verdict && !*rec.verdict ? 2 : 0;
}

int run_report(const std::string& dir, const std::string& out) {
  const auto records = load_records(dir);
  if (records.empty()) throw std::runtime_error("no experiment records in " + dir);
  const auto files = emit_report(records, out.empty() ? dir : out);
  for (const auto& f : files) std::cout << f.string() << "\n";
  bool failed = false;
  for (const auto& r : records) failed = failed || (r.verdict && !*r.verdict);
  return failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real roots of random polynomials: Kac-Rice counts, regime classification, "
               "Monte Carlo experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(randpoly::version()));

  ProfileArgs sim_args, kr_args, cls_args;
  std::uint64_t trials = 10000, seed = 0;
  unsigned threads = 0;
  bool csv = false;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of E N(I)");
  sim_args.add(sim);
  sim_args.add_noise(sim);
  sim->add_option("--trials", trials)->capture_default_str();
  sim->add_option("--seed", seed, "64-bit seed")->required();
  sim->add_option("--threads", threads, "worker threads (0 = all cores)");
  sim->add_flag("--csv", csv, "print a CSV row instead of JSON");

  std::string denom = "sqrt-s";
  double abs_tol = 1e-8, rel_tol = 1e-6;
  auto* kr = app.add_subcommand("kacrice", "Kac-Rice expected count (Gaussian noise)");
  kr_args.add(kr);
  kr->add_option("--erf-denominator", denom, "sqrt-s or literal-s")->capture_default_str();
  kr->add_option("--abs-tol", abs_tol)->capture_default_str();
  kr->add_option("--rel-tol", rel_tol)->capture_default_str();

  ClassifierOptions co;
  bool predict = false;
  auto* cls = app.add_subcommand("classify", "regime report near +-1");
  cls_args.add(cls);
  cls->add_option("--C", co.C, "threshold constant")->capture_default_str();
  cls->add_option("--grid", co.grid_size, "points per grid segment")->capture_default_str();
  cls->add_option("--band", co.band, "half-width of the band around +-1")->capture_default_str();
  cls->add_flag("--predict", predict, "also give the regime's count prediction");

  auto* exp = app.add_subcommand("experiment", "registered experiments");
  exp->require_subcommand(1);
  std::string exp_name, config_path, out_dir;
  std::optional<std::uint64_t> exp_seed, exp_trials;
  std::optional<unsigned> exp_threads;
  auto* exp_run = exp->add_subcommand("run", "run one experiment and persist CSV + JSON");
  exp_run->add_option("name", exp_name, "registry name")->required();
  exp_run->add_option("--config", config_path, "flat JSON config overriding the defaults");
  exp_run->add_option("--seed", exp_seed, "64-bit seed (required here or in the config)");
  exp_run->add_option("--out", out_dir, "output directory");
  exp_run->add_option("--trials", exp_trials, "override the trial count");
  exp_run->add_option("--threads", exp_threads, "worker threads (0 = all cores)");
  auto* exp_list = exp->add_subcommand("list", "list registered experiments");

  std::string report_dir, report_out;
  auto* rep = app.add_subcommand("report", "plot data and summary table from saved records");
  rep->add_option("dir", report_dir, "directory holding experiment JSON records")->required();
  rep->add_option("--out", report_out, "output directory (default: the input directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) return run_simulate(sim_args, trials, seed, threads, csv);
    if (kr->parsed()) return run_kacrice(kr_args, denom, abs_tol, rel_tol);
    if (cls->parsed()) return run_classify(cls_args, co, predict);
    if (exp_list->parsed()) {
      for (const auto& e : experiment_registry()) {
        std::cout << e.name << " [" << e.theorem << "]: " << e.description << "\n";
      }
      return 0;
    }
    if (exp_run->parsed()) {
      return run_experiment_cmd(exp_name, config_path, exp_seed, out_dir, exp_trials,
                                exp_threads);
    }
    if (rep->parsed()) return run_report(report_dir, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
