#include "randpoly/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "randpoly/comparison.hpp"
#include "randpoly/serialization.hpp"

#ifndef RANDPOLY_VERSION
#define RANDPOLY_VERSION "0.0.0"
#endif

namespace randpoly {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view version() { return RANDPOLY_VERSION; }

namespace {

constexpr const char* kRecordKind = "randpoly-experiment-record";

std::vector<std::size_t> dyadic(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> v;
  for (std::size_t n = lo; n <= hi; n *= 2) v.push_back(n);
  return v;
}

ExperimentConfig base(std::string name, std::string profile, std::vector<std::size_t> n_list,
                      std::uint64_t trials) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.profile = std::move(profile);
  c.n_list = std::move(n_list);
  c.trials = trials;
  return c;
}

std::vector<ExperimentSpec> build_registry() {
  std::vector<ExperimentSpec> r;

  auto centered = base("centered-slope", "kac", dyadic(128, 8192), 10000);
  r.push_back({"centered-slope", "small-mean",
               "slope of E N(R) in ln n for a centered profile: (1 + sqrt(2 rho + 1)) / pi; "
               "Monte Carlo slope within 10%, Kac-Rice slope within 3%",
               0.10, 0.03, centered});

  auto halving = base("halving", "kac", dyadic(128, 8192), 10000);
  halving.mu = 1.0;
  r.push_back({"halving", "hyperbolic-mean",
               "hyperbolic profile with nonzero mean: slope (1 + sqrt L) / (2 pi), within 10%",
               0.10, std::nullopt, halving});

  auto deriv = base("derivative-slope", "hyperbolic-derivative", dyadic(128, 8192), 10000);
  deriv.mu = 1.0;
  deriv.k = 1;
  r.push_back({"derivative-slope", "hyperbolic-derivative",
               "k-th derivative of a hyperbolic profile with nonzero mean: slope "
               "(1 + sqrt(L + 2k)) / (2 pi), within 12%",
               0.12, std::nullopt, deriv});

  auto flat = base("mean-dominated-flat", "mixed-sign", dyadic(128, 4096), 4000);
  r.push_back({"mean-dominated-flat", "large-mean",
               "mean-dominated profile: max - min of E N at most 1.0 and the slope CI "
               "contains 0",
               1.0, std::nullopt, flat});

  auto kr = base("kacrice-vs-mc", "kac", {16, 64, 256}, 10000);
  r.push_back({"kacrice-vs-mc", "gaussian-kac-rice",
               "Kac-Rice total inside the Monte Carlo 95% CI for every n (Gaussian noise)", 0.0,
               std::nullopt, kr});

  auto uni = base("universality-pair", "kac", {512}, 20000);
  uni.delta = 1.0 / 16.0;
  r.push_back({"universality-pair", "correlation-universality",
               "Gaussian vs second ensemble in the window (1 - 3 delta, 1 - delta): |E N "
               "difference| <= 0.5 with overlapping 95% CIs, and overlapping CIs for E N(N-1); "
               "counts over the configured interval are reported without a verdict",
               0.5, std::nullopt, uni});

  auto ball = base("small-ball-decay", "kac", {512}, 10000);
  ball.delta = 1.0 / 8.0;
  ball.thresholds = {1.0, 0.1, 0.01, 0.001};
  r.push_back({"small-ball-decay", "small-ball",
               "P(|p(1 - delta)| <= t) non-increasing along the thresholds and below 0.05 at "
               "the last one",
               0.05, std::nullopt, ball});

  auto bulk = base("bulk-O1", "kac", dyadic(128, 4096), 10000);
  bulk.interval = "[-0.5, 0.5] U (-inf, -2] U [2, inf)";
  r.push_back({"bulk-O1", "bulk-order-one",
               "E N away from +-1 is at most 1.0 for every n and the slope CI reaches 0 or "
               "below",
               1.0, std::nullopt, bulk});
  return r;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t h, int digits) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf + 16 - digits, static_cast<std::size_t>(digits));
}

Regime combine(Regime a, Regime b) {
  if (a == Regime::indeterminate || b == Regime::indeterminate) return Regime::indeterminate;
  return a == b ? a : Regime::mixed;
}

std::string regime_of(const CoefficientProfile& p, const std::vector<Interval>& pieces) {
  std::optional<Regime> out;
  for (const auto& iv : pieces) {
    const Regime r = classify_regime(p, iv).regime;
    out = out ? combine(*out, r) : r;
  }
  return std::string(to_string(out.value_or(Regime::indeterminate)));
}

double kac_rice_sum(const CoefficientProfile& p, const std::vector<Interval>& pieces,
                    ErfDenominator d) {
  KacRiceOptions opts;
  opts.erf_denominator = d;
  double total = 0.0;
  for (const auto& iv : pieces) total += kac_rice_interval(p, iv, opts).total;
  return total;
}

// Per-trial sums of the counts over the pieces; discarded trials stay marked.
std::vector<int> summed_counts(const std::vector<std::vector<int>>& rows) {
  std::vector<int> out(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (out[i] == kDiscardedCount || row[i] == kDiscardedCount) {
        out[i] = kDiscardedCount;
      } else {
        out[i] += row[i];
      }
    }
  }
  return out;
}

MonteCarloOptions mc_options(const ExperimentConfig& cfg) {
  MonteCarloOptions o;
  o.threads = cfg.threads;
  return o;
}

std::vector<SlopePoint> main_series(const ExperimentRecord& rec, bool analytic) {
  std::vector<SlopePoint> pts;
  for (const auto& p : rec.points) {
    if (!p.series.empty()) continue;
    if (analytic) {
      if (!p.predicted) return {};
      pts.push_back({static_cast<double>(p.n), *p.predicted, 0.0});
    } else {
      pts.push_back({static_cast<double>(p.n), p.stats.mean, p.stats.std_error});
    }
  }
  return pts;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5g", x);
  return buf;
}

bool within(double value, double target, double rel) {
  return std::abs(value - target) <= rel * std::abs(target);
}

bool overlap(const TrialStatistics& a, const TrialStatistics& b) {
  return a.ci_lo <= b.ci_hi && b.ci_lo <= a.ci_hi;
}

double predicted_slope_for(const ExperimentConfig& cfg) {
  const double L = cfg.profile == "kac" ? 1.0 : cfg.L;
  if (cfg.name == "centered-slope") {
    const double rho = cfg.profile == "power" ? cfg.rho : (L - 1.0) / 2.0;
    return asymptotic_slope(SlopeFamily::centered_power, rho).slope;
  }
  if (cfg.name == "halving") return asymptotic_slope(SlopeFamily::hyperbolic_nonzero_mean, L).slope;
  if (cfg.name == "derivative-slope") {
    return asymptotic_slope(SlopeFamily::hyperbolic_derivative, L, static_cast<double>(cfg.k))
        .slope;
  }
  return 0.0;
}

// Monte Carlo (or, with zero trials, the Kac-Rice value itself) of the count
// over the configured interval set, one main-series row per n.
void run_count_series(const ExperimentConfig& cfg, ExperimentRecord& rec) {
  const auto pieces = parse_interval_set(cfg.interval);
  for (std::size_t n : cfg.n_list) {
    const CoefficientProfile p = make_profile(cfg, n);
    ExperimentPoint pt;
    pt.n = n;
    pt.predicted = kac_rice_sum(p, pieces, cfg.erf_denominator);
    pt.regime = regime_of(p, pieces);
    if (cfg.trials > 0) {
      const auto rows = simulate_counts(p, cfg.noise, pieces, cfg.trials, cfg.seed, mc_options(cfg));
      pt.stats = count_statistics(summed_counts(rows));
    } else {
      const double v = *pt.predicted;
      pt.stats = summarize(std::span(&v, 1), 1);
    }
    rec.points.push_back(std::move(pt));
  }
}

void judge_slope(const ExperimentSpec& spec, ExperimentRecord& rec) {
  const double pred = *rec.predicted_slope;
  std::ostringstream d;
  bool ok = true;
  if (rec.config.trials > 0) {
    const bool mc = within(rec.fit->slope, pred, spec.tolerance);
    d << "Monte Carlo slope " << fmt(rec.fit->slope) << " +- " << fmt(rec.fit->slope_stderr)
      << " vs " << fmt(pred) << " (tol " << fmt(100 * spec.tolerance) << "%) "
      << (mc ? "ok" : "FAIL");
    ok = mc;
  }
  if (rec.analytic_fit && (spec.analytic_tolerance || rec.config.trials == 0)) {
    const double tol = spec.analytic_tolerance.value_or(spec.tolerance);
    const bool an = within(rec.analytic_fit->slope, pred, tol);
    if (!d.str().empty()) d << "; ";
    d << "Kac-Rice slope " << fmt(rec.analytic_fit->slope) << " vs " << fmt(pred) << " (tol "
      << fmt(100 * tol) << "%) " << (an ? "ok" : "FAIL");
    ok = ok && an;
  }
  rec.tolerance = spec.tolerance;
  rec.verdict = ok;
  rec.verdict_detail = d.str();
}

void run_slope(const ExperimentSpec& spec, ExperimentRecord& rec) {
  run_count_series(rec.config, rec);
  rec.predicted_slope = predicted_slope_for(rec.config);
  rec.analytic_fit = slope_fit(main_series(rec, true));
  rec.fit = rec.config.trials > 0 ? slope_fit(main_series(rec, false)) : rec.analytic_fit;
  judge_slope(spec, rec);
}

void run_flat(const ExperimentSpec& spec, ExperimentRecord& rec) {
  run_count_series(rec.config, rec);
  rec.predicted_slope = 0.0;
  rec.fit = slope_fit(main_series(rec, false));
  rec.analytic_fit = slope_fit(main_series(rec, true));
  rec.tolerance = spec.tolerance;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& p : rec.points) {
    lo = std::min(lo, p.stats.mean);
    hi = std::max(hi, p.stats.mean);
  }
  std::ostringstream d;
  bool ok;
  if (rec.config.name == "bulk-O1") {
    const bool bounded = hi <= spec.tolerance;
    const bool trend = rec.fit->ci_lo() <= 0.0;
    ok = bounded && trend;
    d << "max E N " << fmt(hi) << " (bound " << fmt(spec.tolerance) << ") "
      << (bounded ? "ok" : "FAIL") << "; slope " << fmt(rec.fit->slope) << " CI ["
      << fmt(rec.fit->ci_lo()) << ", " << fmt(rec.fit->ci_hi()) << "] "
      << (trend ? "ok" : "FAIL");
  } else {
    const bool spread = hi - lo <= spec.tolerance;
    const bool trend = rec.fit->ci_lo() <= 0.0 && rec.fit->ci_hi() >= 0.0;
    ok = spread && trend;
    d << "spread " << fmt(hi - lo) << " (bound " << fmt(spec.tolerance) << ") "
      << (spread ? "ok" : "FAIL") << "; slope " << fmt(rec.fit->slope) << " CI ["
      << fmt(rec.fit->ci_lo()) << ", " << fmt(rec.fit->ci_hi()) << "] "
      << (trend ? "ok" : "FAIL");
  }
  rec.verdict = ok;
  rec.verdict_detail = d.str();
}

void run_kacrice_vs_mc(const ExperimentSpec& spec, ExperimentRecord& rec) {
  if (rec.config.trials == 0) throw std::invalid_argument("kacrice-vs-mc needs trials > 0");
  run_count_series(rec.config, rec);
  rec.tolerance = spec.tolerance;
  bool ok = true;
  std::ostringstream d;
  d << "erf denominator " << to_string(rec.config.erf_denominator) << ":";
  for (const auto& p : rec.points) {
    const bool in = *p.predicted >= p.stats.ci_lo && *p.predicted <= p.stats.ci_hi;
    ok = ok && in;
    d << " n=" << p.n << " KR " << fmt(*p.predicted) << " CI [" << fmt(p.stats.ci_lo) << ", "
      << fmt(p.stats.ci_hi) << "] " << (in ? "ok" : "FAIL") << ";";
  }
  rec.verdict = ok;
  rec.verdict_detail = d.str();
}

void run_universality(const ExperimentSpec& spec, ExperimentRecord& rec) {
  const ExperimentConfig& cfg = rec.config;
  if (cfg.trials == 0) throw std::invalid_argument("universality-pair needs trials > 0");
  const auto pieces = parse_interval_set(cfg.interval);
  const double center = 1.0 - 2.0 * cfg.delta;
  if (center - cfg.delta < 1.0 - kPairWindowBand) {
    throw std::invalid_argument("pair-count window (1 - 3 delta, 1 - delta) leaves the band "
                                "|t| >= 1 - " + format_double(kPairWindowBand));
  }
  rec.tolerance = spec.tolerance;
  bool ok = true;
  std::ostringstream d;
  const Interval window = Interval::open(center - cfg.delta, center + cfg.delta);
  for (std::size_t n : cfg.n_list) {
    const CoefficientProfile p = make_profile(cfg, n);
    const double kr_window = kac_rice_sum(p, {window}, cfg.erf_denominator);
    const double kr_set = kac_rice_sum(p, pieces, cfg.erf_denominator);
    const std::string regime = regime_of(p, {window});
    TrialStatistics en[2], pair[2];
    const NoiseSpec noises[2] = {cfg.noise, cfg.compare_noise};
    for (int e = 0; e < 2; ++e) {
      // Last interval is the window; the configured set is reported alongside.
      std::vector<Interval> all = pieces;
      all.push_back(window);
      const auto rows = simulate_counts(p, noises[e], all, cfg.trials, cfg.seed, mc_options(cfg));
      const TrialStatistics on_set = count_statistics(summed_counts({rows.begin(), rows.end() - 1}));
      en[e] = count_statistics(rows.back());
      std::vector<double> v;
      for (int c : rows.back()) {
        if (c != kDiscardedCount) v.push_back(static_cast<double>(c) * (c - 1));
      }
      pair[e] = summarize(v, cfg.trials);
      const std::string fam(to_string(noises[e].family));
      rec.points.push_back({e == 0 ? "" : "window/" + fam, n, cfg.delta, en[e], kr_window, regime});
      rec.points.push_back({"pair/" + fam, n, cfg.delta, pair[e], std::nullopt, regime});
      rec.points.push_back({"interval/" + fam, n, 0.0, on_set, kr_set, ""});
    }
    const double diff = std::abs(en[0].mean - en[1].mean);
    const bool en_ok = diff <= spec.tolerance && overlap(en[0], en[1]);
    const bool pair_ok = overlap(pair[0], pair[1]);
    ok = ok && en_ok && pair_ok;
    d << "n=" << n << " window E N " << fmt(en[0].mean) << " vs " << fmt(en[1].mean)
      << (en_ok ? " ok" : " FAIL") << ", E N(N-1) " << fmt(pair[0].mean) << " vs "
      << fmt(pair[1].mean) << (pair_ok ? " ok" : " FAIL") << ";";
  }
  rec.verdict = ok;
  rec.verdict_detail = d.str();
}

void run_small_ball(const ExperimentSpec& spec, ExperimentRecord& rec) {
  const ExperimentConfig& cfg = rec.config;
  if (cfg.thresholds.empty()) throw std::invalid_argument("small-ball-decay needs thresholds");
  rec.tolerance = spec.tolerance;
  bool ok = true;
  std::ostringstream d;
  for (std::size_t n : cfg.n_list) {
    const CoefficientProfile p = make_profile(cfg, n);
    const double z = 1.0 - cfg.delta;
    const auto est = small_ball(p, cfg.noise, z, 0.0, cfg.thresholds, cfg.trials, cfg.seed,
                                mc_options(cfg));
    bool mono = true;
    for (std::size_t i = 0; i < est.size(); ++i) {
      TrialStatistics st;
      st.mean = est[i].probability;
      st.std_error = est[i].std_error;
      st.variance = est[i].probability * (1.0 - est[i].probability);
      st.ci_lo = st.mean - 1.96 * st.std_error;
      st.ci_hi = st.mean + 1.96 * st.std_error;
      st.trials = est[i].trials;
      rec.points.push_back({"", n, cfg.thresholds[i], st, std::nullopt, ""});
      if (i > 0 && est[i].probability > est[i - 1].probability) mono = false;
    }
    const bool small = est.back().probability < spec.tolerance;
    ok = ok && mono && small;
    d << "n=" << n << " probabilities";
    for (const auto& e : est) d << " " << fmt(e.probability);
    d << (mono ? " non-increasing" : " NOT monotone") << ", last " << (small ? "< " : ">= ")
      << fmt(spec.tolerance) << ";";
  }
  rec.verdict = ok;
  rec.verdict_detail = d.str();
}

json point_to_json(const ExperimentPoint& p) {
  return json{{"series", p.series},
              {"n", p.n},
              {"param", p.param},
              {"stats", p.stats},
              {"predicted", p.predicted ? json(*p.predicted) : json(nullptr)},
              {"regime", p.regime}};
}

ExperimentPoint point_from_json(const json& j) {
  ExperimentPoint p;
  p.series = j.at("series").get<std::string>();
  p.n = j.at("n").get<std::size_t>();
  p.param = j.at("param").get<double>();
  p.stats = j.at("stats").get<TrialStatistics>();
  if (!j.at("predicted").is_null()) p.predicted = j.at("predicted").get<double>();
  p.regime = j.at("regime").get<std::string>();
  return p;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

const std::vector<ExperimentSpec>& experiment_registry() {
  static const std::vector<ExperimentSpec> registry = build_registry();
  return registry;
}

const ExperimentSpec& find_experiment(const std::string& name) {
  for (const auto& e : experiment_registry()) {
    if (e.name == name) return e;
  }
  std::string names;
  for (const auto& e : experiment_registry()) names += (names.empty() ? "" : ", ") + e.name;
  throw std::invalid_argument("unknown experiment '" + name + "'; valid names: " + names);
}

CoefficientProfile make_profile(const ExperimentConfig& cfg, std::size_t n) {
  if (cfg.profile == "kac") return hyperbolic_profile(1.0, n, cfg.mu);
  if (cfg.profile == "hyperbolic") return hyperbolic_profile(cfg.L, n, cfg.mu);
  if (cfg.profile == "power") return power_profile(n, cfg.rho, cfg.mu, cfg.rho_mean);
  if (cfg.profile == "mixed-sign") {
    return mixed_sign_profile(n, cfg.rho, cfg.rho_prime, cfg.rho_dprime);
  }
  if (cfg.profile == "hyperbolic-derivative") {
    // Degree n after differentiating k times.
    return derivative_profile(hyperbolic_profile(cfg.L, n + cfg.k, cfg.mu), cfg.k);
  }
  throw std::invalid_argument("unknown profile family '" + cfg.profile +
                              "' (expected kac, hyperbolic, power, mixed-sign, "
                              "hyperbolic-derivative)");
}

json config_to_json(const ExperimentConfig& c) {
  return json{{"name", c.name},
              {"profile", c.profile},
              {"L", c.L},
              {"mu", c.mu},
              {"rho", c.rho},
              {"rho_mean", c.rho_mean},
              {"rho_prime", c.rho_prime},
              {"rho_dprime", c.rho_dprime},
              {"k", c.k},
              {"noise", std::string(to_string(c.noise.family))},
              {"noise_mu", c.noise.mu},
              {"compare_noise", std::string(to_string(c.compare_noise.family))},
              {"n_list", c.n_list},
              {"trials", c.trials},
              {"seed", c.seed},
              {"interval", c.interval},
              {"delta", c.delta},
              {"thresholds", c.thresholds},
              {"erf_denominator", std::string(to_string(c.erf_denominator))},
              {"threads", c.threads},
              {"output", c.output}};
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
  if (!j.contains("name")) throw std::invalid_argument("experiment config needs a \"name\"");
  if (!j.contains("seed")) {
    throw std::invalid_argument("experiment config needs a \"seed\" (no implicit seeding)");
  }
  ExperimentConfig c = find_experiment(j.at("name").get<std::string>()).defaults;
  static const std::set<std::string> known = {
      "name",   "profile",  "L",        "mu",       "rho",        "rho_mean",        "rho_prime",
      "rho_dprime", "k",    "noise",    "noise_mu", "compare_noise", "n_list",        "trials",
      "seed",   "interval", "delta",    "thresholds", "erf_denominator", "threads",   "output"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");
    if (value.is_object()) {
      throw std::invalid_argument("config key '" + key + "' must not be an object (flat config)");
    }
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("profile", c.profile);
  get("L", c.L);
  get("mu", c.mu);
  get("rho", c.rho);
  get("rho_mean", c.rho_mean);
  get("rho_prime", c.rho_prime);
  get("rho_dprime", c.rho_dprime);
  get("k", c.k);
  if (j.contains("noise")) c.noise.family = noise_family_from_string(j.at("noise").get<std::string>());
  get("noise_mu", c.noise.mu);
  if (j.contains("compare_noise")) {
    c.compare_noise.family = noise_family_from_string(j.at("compare_noise").get<std::string>());
  }
  get("n_list", c.n_list);
  get("trials", c.trials);
  get("seed", c.seed);
  get("interval", c.interval);
  get("delta", c.delta);
  get("thresholds", c.thresholds);
  if (j.contains("erf_denominator")) {
    c.erf_denominator = erf_denominator_from_string(j.at("erf_denominator").get<std::string>());
  }
  get("threads", c.threads);
  get("output", c.output);
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  const ExperimentSpec& spec = find_experiment(c.name);
  if (c.n_list.empty()) throw std::invalid_argument("n_list must not be empty");
  for (std::size_t i = 1; i < c.n_list.size(); ++i) {
    if (c.n_list[i] <= c.n_list[i - 1]) {
      throw std::invalid_argument("n_list must be strictly increasing");
    }
  }
  if (c.n_list.front() < 1) throw std::invalid_argument("degrees in n_list must be >= 1");
  const bool slope = spec.name == "centered-slope" || spec.name == "halving" ||
                     spec.name == "derivative-slope" || spec.name == "mean-dominated-flat" ||
                     spec.name == "bulk-O1";
  if (slope && c.n_list.size() < 3) {
    throw std::invalid_argument(spec.name + " fits a slope and needs at least 3 degrees");
  }
  parse_interval_set(c.interval);
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  (void)make_profile(c, c.n_list.front());
}

ExperimentRecord compute_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const ExperimentSpec& spec = find_experiment(cfg.name);
  const auto start = std::chrono::steady_clock::now();
  ExperimentRecord rec;
  rec.config = cfg;
  rec.theorem = spec.theorem;
  rec.artifact_version = std::string(version());
  if (cfg.name == "centered-slope" || cfg.name == "halving" || cfg.name == "derivative-slope") {
    run_slope(spec, rec);
  } else if (cfg.name == "mean-dominated-flat" || cfg.name == "bulk-O1") {
    run_flat(spec, rec);
  } else if (cfg.name == "kacrice-vs-mc") {
    run_kacrice_vs_mc(spec, rec);
  } else if (cfg.name == "universality-pair") {
    run_universality(spec, rec);
  } else if (cfg.name == "small-ball-decay") {
    run_small_ball(spec, rec);
  }
  rec.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

ExperimentRecord run_experiment(const ExperimentConfig& cfg) {
  ExperimentRecord rec = compute_experiment(cfg);
  const fs::path dir = cfg.output;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  const std::string stem = cfg.name + "-" + record_hash(rec);
  write_file(dir / (stem + ".csv"), record_csv(rec));
  write_file(dir / (stem + ".json"), record_to_json(rec).dump(2) + "\n");
  return rec;
}

json record_to_json(const ExperimentRecord& r) {
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back(point_to_json(p));
  return json{{"kind", kRecordKind},
              {"config", config_to_json(r.config)},
              {"theorem", r.theorem},
              {"points", pts},
              {"fit", r.fit ? json(*r.fit) : json(nullptr)},
              {"analytic_fit", r.analytic_fit ? json(*r.analytic_fit) : json(nullptr)},
              {"predicted_slope", r.predicted_slope ? json(*r.predicted_slope) : json(nullptr)},
              {"tolerance", r.tolerance},
              {"verdict", r.verdict ? json(*r.verdict ? "pass" : "fail") : json(nullptr)},
              {"verdict_detail", r.verdict_detail},
              {"wall_clock_seconds", r.wall_clock_seconds},
              {"artifact_version", r.artifact_version}};
}

ExperimentRecord record_from_json(const json& j) {
  if (j.value("kind", std::string()) != kRecordKind) {
    throw std::invalid_argument("not an experiment record");
  }
  ExperimentRecord r;
  r.config = config_from_json(j.at("config"));
  r.theorem = j.at("theorem").get<std::string>();
  for (const auto& p : j.at("points")) r.points.push_back(point_from_json(p));
  if (!j.at("fit").is_null()) r.fit = j.at("fit").get<SlopeFit>();
  if (!j.at("analytic_fit").is_null()) r.analytic_fit = j.at("analytic_fit").get<SlopeFit>();
  if (!j.at("predicted_slope").is_null()) r.predicted_slope = j.at("predicted_slope").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  if (!j.at("verdict").is_null()) r.verdict = j.at("verdict").get<std::string>() == "pass";
  r.verdict_detail = j.at("verdict_detail").get<std::string>();
  r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  r.artifact_version = j.at("artifact_version").get<std::string>();
  return r;
}

std::string record_csv(const ExperimentRecord& r) {
  std::string out = "experiment,n,trials,mean_N,stderr,predicted,regime,verdict\n";
  const std::string verdict = r.verdict ? (*r.verdict ? "pass" : "fail") : "";
  for (const auto& p : r.points) {
    std::string exp = r.config.name;
    if (!p.series.empty()) exp += ":" + p.series;
    if (r.config.name == "small-ball-decay") exp += ":t=" + format_double(p.param);
    out += exp + "," + std::to_string(p.n) + "," + std::to_string(p.stats.trials) + "," +
           format_double(p.stats.mean) + "," + format_double(p.stats.std_error) + "," +
           (p.predicted ? format_double(*p.predicted) : "") + "," + p.regime + "," + verdict + "\n";
  }
  return out;
}

std::string record_hash(const ExperimentRecord& r) {
  json j = record_to_json(r);
  j.erase("wall_clock_seconds");
  j["config"].erase("output");
  j["config"].erase("threads");
  return hex(fnv1a(j.dump()), 10);
}

std::vector<fs::path> emit_report(const std::vector<ExperimentRecord>& records,
                                  const fs::path& dir) {
  if (records.empty()) throw std::invalid_argument("report needs at least one record");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  std::string summary = "experiment,theorem,predicted_slope,fitted_slope,verdict\n";
  for (const auto& r : records) {
    const bool by_radius = r.config.name == "small-ball-decay";
    std::vector<const ExperimentPoint*> main;
    for (const auto& p : r.points) {
      if (p.series.empty()) main.push_back(&p);
    }
    // Predicted line: fixed predicted slope, intercept fitted to the data.
    std::optional<double> line_c;
    if (r.predicted_slope && !by_radius && !main.empty()) {
      double sw = 0, s = 0;
      for (const auto* p : main) {
        const double w = p->stats.std_error > 0 ? 1.0 / (p->stats.std_error * p->stats.std_error) : 1.0;
        sw += w;
        s += w * (p->stats.mean - *r.predicted_slope * std::log(static_cast<double>(p->n)));
      }
      line_c = s / sw;
    }
    std::string data = "# experiment " + r.config.name + " (" + r.theorem + ")\n";
    data += by_radius ? "# ln_t probability stderr\n"
                      : "# ln_n mean stderr predicted_line kac_rice\n";
    for (const auto* p : main) {
      const double x = by_radius ? std::log(p->param) : std::log(static_cast<double>(p->n));
      data += format_double(x) + " " + format_double(p->stats.mean) + " " +
              format_double(p->stats.std_error);
      if (!by_radius) {
        data += " " + (line_c ? format_double(*line_c + *r.predicted_slope * x) : "nan");
        data += " " + (p->predicted ? format_double(*p->predicted) : "nan");
      }
      data += "\n";
    }
    const fs::path file = dir / (r.config.name + "-" + record_hash(r) + ".dat");
    write_file(file, data);
    written.push_back(file);
    summary += r.config.name + "," + r.theorem + "," +
               (r.predicted_slope ? format_double(*r.predicted_slope) : "") + "," +
               (r.fit ? format_double(r.fit->slope) : "") + "," +
               (r.verdict ? (*r.verdict ? "pass" : "fail") : "none") + "\n";
  }
  const fs::path table = dir / "summary.csv";
  write_file(table, summary);
  written.push_back(table);
  return written;
}

std::vector<ExperimentRecord> load_records(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw std::runtime_error(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ExperimentRecord> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw std::runtime_error("cannot read " + f.string());
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("bad JSON in " + f.string() + ": " + e.what());
    }
    if (j.is_object() && j.value("kind", std::string()) == kRecordKind) {
      out.push_back(record_from_json(j));
    }
  }
  return out;
}

}  // namespace randpoly
