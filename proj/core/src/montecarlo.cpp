#include "randpoly/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "randpoly/rootcount.hpp"

namespace randpoly {

namespace {

unsigned worker_count(const MonteCarloOptions& opts, std::uint64_t trials) {
  unsigned w = opts.threads != 0 ? opts.threads : std::thread::hardware_concurrency();
  w = std::max(1u, w);
  return static_cast<unsigned>(std::min<std::uint64_t>(w, std::max<std::uint64_t>(trials, 1)));
}

// Runs body(worker, i) for i in [0, count). Results are written by index, so
// the split across workers does not affect them.
template <class MakeState, class Body>
void parallel_trials(std::uint64_t count, unsigned workers, MakeState make_state, Body body) {
  constexpr std::uint64_t kChunk = 64;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    auto state = make_state();
    try {
      for (;;) {
        const std::uint64_t begin = next.fetch_add(kChunk);
        if (begin >= count) break;
        const std::uint64_t end = std::min(count, begin + kChunk);
        for (std::uint64_t i = begin; i < end; ++i) body(state, i);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(count);
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

struct CountState {
  RootCounter counter;
  std::vector<double> coeffs;
};

// Certified count, or the exact Sturm count when certification fails and the
// degree allows it; -1 otherwise.
int count_one(CountState& st, const Interval& iv) {
  const RootCountResult r = st.counter.count(st.coeffs, iv);
  if (r.certified) return static_cast<int>(r.count);
  if (st.coeffs.size() - 1 <= kSturmMaxDegree) {
    return static_cast<int>(SturmChain(std::span<const double>(st.coeffs)).count(iv));
  }
  return kDiscardedCount;
}

void require_trials(std::uint64_t trials) {
  if (trials < 1) throw std::invalid_argument("at least one trial is needed");
}

}  // namespace

TrialStatistics summarize(std::span<const double> values, std::uint64_t trials) {
  if (values.size() > trials) throw std::invalid_argument("more values than trials");
  TrialStatistics st;
  st.trials = trials;
  st.discarded = trials - values.size();
  st.flagged = static_cast<double>(st.discarded) > kMaxDiscardRate * static_cast<double>(trials);
  const std::size_t m = values.size();
  if (m == 0) {
    st.mean = st.variance = st.std_error = std::numeric_limits<double>::quiet_NaN();
    st.ci_lo = st.ci_hi = st.mean;
    return st;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / static_cast<double>(m);
  if (m > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    st.variance = ss / static_cast<double>(m - 1);
  }
  st.std_error = std::sqrt(st.variance / static_cast<double>(m));
  st.ci_lo = st.mean - 1.96 * st.std_error;
  st.ci_hi = st.mean + 1.96 * st.std_error;
  return st;
}

std::vector<std::vector<int>> simulate_counts(const CoefficientProfile& p, const NoiseSpec& noise,
                                              std::span<const Interval> intervals,
                                              std::uint64_t trials, std::uint64_t seed,
                                              const MonteCarloOptions& opts) {
  require_trials(trials);
  std::vector<std::vector<int>> out(intervals.size(), std::vector<int>(trials, 0));
  parallel_trials(
      trials, worker_count(opts, trials), [] { return CountState{}; },
      [&](CountState& st, std::uint64_t i) {
        const std::uint64_t trial = opts.first_trial + i;
        bool keep = sample_into(p, noise, seed, trial, st.coeffs);
        for (std::size_t k = 0; k < intervals.size() && keep; ++k) {
          const int c = count_one(st, intervals[k]);
          if (c == kDiscardedCount) keep = false;
          out[k][i] = c;
        }
        if (!keep) {
          for (auto& row : out) row[i] = kDiscardedCount;
        }
      });
  return out;
}

TrialStatistics count_statistics(std::span<const int> counts, int k) {
  if (k < 1 || k > 4) throw std::invalid_argument("moment order must be in 1..4");
  std::vector<double> v;
  v.reserve(counts.size());
  for (int c : counts) {
    if (c == kDiscardedCount) continue;
    v.push_back(std::pow(static_cast<double>(c), k));
  }
  return summarize(v, counts.size());
}

TrialStatistics estimate_EN(const CoefficientProfile& p, const NoiseSpec& noise, const Interval& iv,
                            std::uint64_t trials, std::uint64_t seed,
                            const MonteCarloOptions& opts) {
  return estimate_moment(p, noise, iv, 1, trials, seed, opts);
}

TrialStatistics estimate_moment(const CoefficientProfile& p, const NoiseSpec& noise,
                                const Interval& iv, int k, std::uint64_t trials,
                                std::uint64_t seed, const MonteCarloOptions& opts) {
  if (k < 1 || k > 4) throw std::invalid_argument("moment order must be in 1..4");
  const auto counts = simulate_counts(p, noise, std::span(&iv, 1), trials, seed, opts);
  return count_statistics(counts[0], k);
}

std::vector<SmallBallEstimate> small_ball(const CoefficientProfile& p, const NoiseSpec& noise,
                                          double z, double u, std::span<const double> t,
                                          std::uint64_t trials, std::uint64_t seed,
                                          const MonteCarloOptions& opts) {
  if (trials < 1000) throw std::invalid_argument("small-ball estimates need at least 1000 trials");
  for (double x : t) {
    if (!(x >= 0.0)) throw std::invalid_argument("small-ball radius must be non-negative");
  }
  std::vector<double> dist(trials);
  parallel_trials(
      trials, worker_count(opts, trials), [] { return std::vector<double>{}; },
      [&](std::vector<double>& coeffs, std::uint64_t i) {
        // A zero draw is a legitimate sample here: p(z) = 0.
        if (!sample_into(p, noise, seed, opts.first_trial + i, coeffs)) {
          coeffs.assign(p.degree() + 1, 0.0);
        }
        double acc = 0.0;
        for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * z + coeffs[j];
        dist[i] = std::abs(acc - u);
      });
  std::vector<SmallBallEstimate> out;
  for (double x : t) {
    std::uint64_t hits = 0;
    for (double d : dist) hits += d <= x ? 1 : 0;
    SmallBallEstimate e;
    e.trials = trials;
    e.probability = static_cast<double>(hits) / static_cast<double>(trials);
    e.std_error = std::sqrt(e.probability * (1.0 - e.probability) / static_cast<double>(trials));
    out.push_back(e);
  }
  return out;
}

SmallBallEstimate small_ball(const CoefficientProfile& p, const NoiseSpec& noise, double z,
                             double u, double t, std::uint64_t trials, std::uint64_t seed,
                             const MonteCarloOptions& opts) {
  return small_ball(p, noise, z, u, std::span(&t, 1), trials, seed, opts)[0];
}

TrialStatistics pair_count(const CoefficientProfile& p, const NoiseSpec& noise, double center,
                           double delta, std::uint64_t trials, std::uint64_t seed,
                           const MonteCarloOptions& opts, double band) {
  if (!(delta > 0.0)) throw std::invalid_argument("window half-width must be positive");
  const double lo = center - delta, hi = center + delta;
  auto in_band = [&](double x) { return std::abs(x) >= 1.0 - band && std::abs(x) <= 1.0 + band; };
  if (!in_band(lo) || !in_band(hi) || (lo < 0.0 && hi > 0.0)) {
    throw std::invalid_argument("pair-count window (" + std::to_string(lo) + ", " +
                                std::to_string(hi) + ") must lie within 1 - " +
                                std::to_string(band) + " <= |t| <= 1 + " + std::to_string(band));
  }
  const Interval w = Interval::open(lo, hi);
  const auto counts = simulate_counts(p, noise, std::span(&w, 1), trials, seed, opts);
  std::vector<double> v;
  v.reserve(trials);
  for (int c : counts[0]) {
    if (c == kDiscardedCount) continue;
    v.push_back(static_cast<double>(c) * static_cast<double>(c - 1));
  }
  return summarize(v, trials);
}

SlopeFit slope_fit(std::span<const SlopePoint> points) {
  if (points.size() < 3) throw std::invalid_argument("slope fit needs at least 3 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].n > 0.0)) throw std::invalid_argument("slope fit needs positive n");
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i].n == points[j].n) throw std::invalid_argument("slope fit needs distinct n");
    }
  }
  SlopeFit fit;
  fit.weighted = std::all_of(points.begin(), points.end(),
                             [](const SlopePoint& p) { return p.std_error > 0.0; });
  double sw = 0, sx = 0, sy = 0;
  for (const auto& p : points) {
    const double w = fit.weighted ? 1.0 / (p.std_error * p.std_error) : 1.0;
    sw += w;
    sx += w * std::log(p.n);
    sy += w * p.value;
  }
  const double xm = sx / sw, ym = sy / sw;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : points) {
    const double w = fit.weighted ? 1.0 / (p.std_error * p.std_error) : 1.0;
    const double dx = std::log(p.n) - xm, dy = p.value - ym;
    sxx += w * dx * dx;
    sxy += w * dx * dy;
    syy += w * dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  double rss = 0;
  for (const auto& p : points) {
    const double w = fit.weighted ? 1.0 / (p.std_error * p.std_error) : 1.0;
    const double r = p.value - fit.intercept - fit.slope * std::log(p.n);
    rss += w * r * r;
  }
  fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - rss / syy) : 1.0;
  if (fit.weighted) {
    fit.slope_stderr = std::sqrt(1.0 / sxx);
  } else {
    fit.slope_stderr = std::sqrt(rss / static_cast<double>(points.size() - 2) / sxx);
  }
  return fit;
}

std::uint64_t trials_needed(double lambda, double failure_prob, double l2_bound) {
  if (!(lambda > 0.0) || !(failure_prob > 0.0) || !(l2_bound > 0.0)) {
    throw std::invalid_argument("trials_needed inputs must be positive");
  }
  const double x = 4.0 * l2_bound / (failure_prob * lambda * lambda);
  if (!(x < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  auto ok = [&](std::uint64_t m) {
    return 4.0 * l2_bound / (static_cast<double>(m) * lambda * lambda) <= failure_prob;
  };
  std::uint64_t m = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(x)));
  while (m > 1 && ok(m - 1)) --m;
  while (!ok(m)) ++m;
  return m;
}

}  // namespace randpoly
