#include "bcmc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "bcmc/distributions.hpp"
#include "bcmc/errors.hpp"
#include "bcmc/rng.hpp"
#include "json.hpp"

namespace bcmc {

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_i64(std::int64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
  return buf;
}

std::string window_key(const IndexWindow& w) {
  return fmt_i64(w.lo) + ".." + fmt_i64(w.hi);
}

CriterionKind criterion_from_string(const std::string& s) {
  if (s == "hit_after_clear") return CriterionKind::HitAfterClear;
  if (s == "clear_then_hit") return CriterionKind::ClearThenHit;
  if (s == "hit_then_clear") return CriterionKind::HitThenClear;
  if (s == "zero_run_then_hit") return CriterionKind::ZeroRunThenHit;
  if (s == "hit_after_zero_run") return CriterionKind::HitAfterZeroRun;
  throw ConfigError("unknown criterion: " + s);
}

void validate(const ExperimentConfig& cfg) {
  static const std::set<std::string> kScenarios = {
      "markov_chain", "falpha_maxima", "falpha_newcomer", "concomitant",
      "series"};
  if (!kScenarios.count(cfg.scenario))
    throw ConfigError("unknown scenario: " + cfg.scenario);
  if (cfg.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
  if (cfg.threads < 1 || cfg.threads > 256)
    throw ConfigError("threads must lie in [1, 256]");
  for (const auto& w : cfg.windows) {
    if (w.lo < 1 || w.hi < w.lo || w.hi > cfg.horizon)
      throw ConfigError("window [" + window_key(w) +
                        "] must satisfy 1 <= lo <= hi <= horizon");
  }
}

// Per-replication raw outcome. probe_hits/probe_next_hits hold the event
// indicator at each probe index (and the index after it, where needed).
struct RepOutcome {
  std::int64_t count = 0;
  std::int64_t last = 0;
  std::vector<std::int64_t> window_counts;
  std::vector<std::uint8_t> probe_hits;
  std::vector<std::uint8_t> probe_next_hits;
};

template <typename Fn>
std::vector<RepOutcome> run_parallel(std::int64_t reps, int threads,
                                     const Fn& fn) {
  std::vector<RepOutcome> out(static_cast<std::size_t>(reps));
  if (threads <= 1) {
    for (std::int64_t r = 0; r < reps; ++r)
      out[static_cast<std::size_t>(r)] = fn(r);
    return out;
  }
  std::atomic<std::int64_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::int64_t r = next.fetch_add(1);
      if (r >= reps) return;
      try {
        out[static_cast<std::size_t>(r)] = fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min<int>(threads, static_cast<int>(std::min<std::int64_t>(
                                           reps, 256)));
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

double nearest_rank_quantile(std::vector<std::int64_t> sorted, double q) {
  if (sorted.empty()) return 0.0;
  const auto n = sorted.size();
  auto idx = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(n)));
  if (idx > 0) --idx;
  if (idx >= n) idx = n - 1;
  return static_cast<double>(sorted[idx]);
}

OccurrenceStats finalize_occurrence(std::vector<RepOutcome>&& reps,
                                    std::size_t n_windows) {
  OccurrenceStats st;
  const auto R = reps.size();
  st.counts.reserve(R);
  st.last_index.reserve(R);
  st.window_counts.assign(n_windows, {});
  for (auto& wc : st.window_counts) wc.reserve(R);
  double count_sum = 0.0, last_sum = 0.0;
  for (const auto& rep : reps) {
    st.counts.push_back(rep.count);
    st.last_index.push_back(rep.last);
    count_sum += static_cast<double>(rep.count);
    last_sum += static_cast<double>(rep.last);
    for (std::size_t w = 0; w < n_windows; ++w)
      st.window_counts[w].push_back(rep.window_counts[w]);
  }
  const double dr = static_cast<double>(R);
  st.mean_count = count_sum / dr;
  st.mean_last = last_sum / dr;
  std::vector<std::int64_t> sorted = st.counts;
  std::sort(sorted.begin(), sorted.end());
  for (double q : {0.1, 0.5, 0.9})
    st.count_quantiles.push_back(nearest_rank_quantile(sorted, q));
  for (std::size_t w = 0; w < n_windows; ++w) {
    std::int64_t hit = 0;
    for (auto c : st.window_counts[w])
      if (c > 0) ++hit;
    st.window_hit_fraction.push_back(static_cast<double>(hit) / dr);
  }
  return st;
}

double binom_stderr(double phat, std::int64_t reps) {
  return std::sqrt(std::max(phat * (1.0 - phat), 0.0) /
                   static_cast<double>(reps));
}

// Shared trajectory bookkeeping: feed event indicators in index order.
struct EventTally {
  const std::vector<IndexWindow>& windows;
  RepOutcome out;

  explicit EventTally(const std::vector<IndexWindow>& w,
                      std::size_t n_probes)
      : windows(w) {
    out.window_counts.assign(windows.size(), 0);
    out.probe_hits.assign(n_probes, 0);
    out.probe_next_hits.assign(n_probes, 0);
  }

  void event(std::int64_t n) {
    ++out.count;
    out.last = n;
    for (std::size_t w = 0; w < windows.size(); ++w)
      if (n >= windows[w].lo && n <= windows[w].hi) ++out.window_counts[w];
  }
};

std::vector<std::int64_t> decade_probes(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 1; d <= hi; d *= 10) {
    if (d >= lo) out.push_back(d);
    if (d > hi / 10) break;
  }
  if (out.empty() && lo <= hi) out.push_back(lo);
  return out;
}

ClassifyBudget harness_budget(std::int64_t horizon) {
  ClassifyBudget b;
  // The classifier needs a long schedule to be trustworthy, so sampling gets
  // a floor regardless of the configured horizon; the partial-sum checkpoint
  // sweep is user-facing output and never runs past what was asked for.
  b.max_index = std::max<std::int64_t>(horizon, 100000);
  b.partial_sum_horizon = std::min(b.partial_sum_horizon, horizon);
  return b;
}

IndicatorKernel markov_kernel_from(const MarkovParams& p) {
  const double stay = p.stay;
  if (p.family == "inverse_square") {
    return make_order1(
        [stay](std::int64_t) { return stay; },
        [](std::int64_t n) {
          const double d = static_cast<double>(n) + 1.0;
          return 1.0 / (d * d);
        },
        p.first_prob);
  }
  if (p.family == "inverse") {
    return make_order1(
        [stay](std::int64_t) { return stay; },
        [](std::int64_t n) { return 1.0 / (static_cast<double>(n) + 1.0); },
        p.first_prob);
  }
  if (p.family == "constant") {
    const double enter = p.enter;
    return make_order1([stay](std::int64_t) { return stay; },
                       [enter](std::int64_t) { return enter; }, p.first_prob);
  }
  throw ConfigError("unknown markov family: " + p.family);
}

RunResult run_markov(const ExperimentConfig& cfg) {
  RunResult res;
  res.config = cfg;
  const IndicatorKernel kernel = markov_kernel_from(cfg.markov);
  const CriterionKind kind = criterion_from_string(cfg.markov.criterion);

  const DichotomyReport rep =
      occurrence_dichotomy(kernel, kind, harness_budget(cfg.horizon));
  res.rows.push_back({cfg.scenario, "dichotomy", std::nullopt, std::nullopt,
                      std::nullopt, to_string(rep.verdict)});

  const auto probes = decade_probes(kernel.order, cfg.horizon);
  std::vector<double> exact_marginal;
  exact_marginal.reserve(probes.size());
  for (auto n : probes)
    exact_marginal.push_back(forward_marginals(kernel, n).marginal);

  std::vector<double> exact_window;
  for (const auto& w : cfg.windows) {
    const std::int64_t lo = std::max<std::int64_t>(
        w.lo, std::max<std::int64_t>(kernel.order, kernel.safe_start_index));
    exact_window.push_back(tail_union_window(kernel, lo, w.hi));
  }

  const auto windows = cfg.windows;
  auto one = [&](std::int64_t r) {
    const auto traj =
        simulate_chain(kernel, cfg.horizon, mix_seed(cfg.master_seed, r));
    EventTally tally(windows, probes.size());
    for (std::int64_t n = 1; n <= cfg.horizon; ++n)
      if (traj[static_cast<std::size_t>(n - 1)]) tally.event(n);
    for (std::size_t i = 0; i < probes.size(); ++i)
      tally.out.probe_hits[i] = traj[static_cast<std::size_t>(probes[i] - 1)];
    return std::move(tally.out);
  };
  auto reps = run_parallel(cfg.replications, cfg.threads, one);

  for (std::size_t i = 0; i < probes.size(); ++i) {
    std::int64_t hits = 0;
    for (const auto& rp : reps) hits += rp.probe_hits[i];
    const double phat = static_cast<double>(hits) /
                        static_cast<double>(cfg.replications);
    res.rows.push_back({cfg.scenario, fmt_i64(probes[i]), exact_marginal[i],
                        phat, binom_stderr(phat, cfg.replications), ""});
  }

  auto occ = finalize_occurrence(std::move(reps), cfg.windows.size());
  for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
    const double phat = occ.window_hit_fraction[w];
    res.rows.push_back({cfg.scenario, window_key(cfg.windows[w]),
                        exact_window[w], phat,
                        binom_stderr(phat, cfg.replications), ""});
  }
  res.occurrence = std::move(occ);
  return res;
}

RunResult run_maxima(const ExperimentConfig& cfg) {
  RunResult res;
  res.config = cfg;
  MaximaScenario sc = loglog_threshold_scenario(cfg.maxima.gamma);
  const IndicatorKernel kernel = maxima_event_kernel(sc);
  const std::int64_t first = sc.first_index;
  const std::int64_t off = first - 1;

  const auto budget = harness_budget(cfg.horizon);
  {
    auto v = classify(maxima_series_terms(sc, MaximaSeriesKind::ThresholdMass),
                      budget);
    res.rows.push_back({cfg.scenario, "mass_series", std::nullopt,
                        std::nullopt, std::nullopt, to_string(v.verdict)});
  }
  {
    auto v = classify(
        maxima_series_terms(sc, MaximaSeriesKind::ThresholdMassEscape),
        budget);
    res.rows.push_back({cfg.scenario, "escape_series", std::nullopt,
                        std::nullopt, std::nullopt, to_string(v.verdict)});
  }

  const auto probes = decade_probes(std::max<std::int64_t>(first, 10),
                                    cfg.horizon);
  std::vector<double> exact_prob;
  for (auto n : probes) exact_prob.push_back(prob_max_leq(sc, n));

  std::vector<double> exact_window;
  for (const auto& w : cfg.windows) {
    if (w.hi < first)
      throw ConfigError("window [" + window_key(w) +
                        "] ends before the scenario start index");
    const std::int64_t lo = std::max(w.lo, first);
    exact_window.push_back(tail_union_window(kernel, lo - off, w.hi - off));
  }

  const auto windows = cfg.windows;
  auto one = [&](std::int64_t r) {
    EventTally tally(windows, probes.size());
    std::size_t pi = 0;
    simulate_scheme(sc, cfg.horizon, mix_seed(cfg.master_seed, r),
                    [&](const SchemeStep& st) {
                      if (st.n < first) return;
                      if (st.below_threshold) tally.event(st.n);
                      if (pi < probes.size() && st.n == probes[pi]) {
                        tally.out.probe_hits[pi] =
                            st.below_threshold ? 1 : 0;
                        ++pi;
                      }
                    });
    return std::move(tally.out);
  };
  auto reps = run_parallel(cfg.replications, cfg.threads, one);

  for (std::size_t i = 0; i < probes.size(); ++i) {
    std::int64_t hits = 0;
    for (const auto& rp : reps) hits += rp.probe_hits[i];
    const double phat = static_cast<double>(hits) /
                        static_cast<double>(cfg.replications);
    res.rows.push_back({cfg.scenario, fmt_i64(probes[i]), exact_prob[i], phat,
                        binom_stderr(phat, cfg.replications), ""});
  }

  auto occ = finalize_occurrence(std::move(reps), cfg.windows.size());
  for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
    const double phat = occ.window_hit_fraction[w];
    res.rows.push_back({cfg.scenario, window_key(cfg.windows[w]),
                        exact_window[w], phat,
                        binom_stderr(phat, cfg.replications), ""});
  }
  res.occurrence = std::move(occ);
  return res;
}

ExponentSequence newcomer_exponents(const NewcomerParams& p) {
  if (p.alpha_family == "constant") return constant_exponents(p.param);
  if (p.alpha_family == "power") return power_exponents(p.param);
  if (p.alpha_family == "superexp") return superexponential_exponents();
  if (p.alpha_family == "one_plus_inverse")
    return one_plus_inverse_exponents(p.param);
  throw ConfigError("unknown alpha family: " + p.alpha_family);
}

RunResult run_newcomer(const ExperimentConfig& cfg) {
  RunResult res;
  res.config = cfg;
  const auto& p = cfg.newcomer;
  const bool prior_study = p.study == "prior_max";
  if (!prior_study && p.study != "newcomer_max")
    throw ConfigError("unknown study: " + p.study);
  HypothesisPolicy policy;
  if (p.hypothesis == "enforce")
    policy = HypothesisPolicy::Enforce;
  else if (p.hypothesis == "skip")
    policy = HypothesisPolicy::Skip;
  else
    throw ConfigError("unknown hypothesis policy: " + p.hypothesis);

  MaximaScenario sc = make_maxima_scenario(
      uniform_01(), newcomer_exponents(p), [](std::int64_t) { return 0.5; },
      1);

  const auto kind = prior_study ? MaximaSeriesKind::CumulativeRatio
                                : MaximaSeriesKind::ExponentShare;
  {
    auto v = classify(maxima_series_terms(sc, kind, policy),
                      harness_budget(cfg.horizon));
    res.rows.push_back({cfg.scenario, "series", std::nullopt, std::nullopt,
                        std::nullopt, to_string(v.verdict)});
  }

  std::vector<std::int64_t> probes;
  for (std::int64_t n : {std::int64_t{2}, std::int64_t{5}})
    if (n <= cfg.horizon - 1) probes.push_back(n);
  for (const auto d : decade_probes(10, cfg.horizon - 1)) probes.push_back(d);

  std::vector<NewcomerEventProbs> exact;
  exact.reserve(probes.size());
  for (auto n : probes) exact.push_back(exact_event_probs(sc, n));

  const auto windows = cfg.windows;
  auto one = [&](std::int64_t r) {
    EventTally tally(windows, probes.size());
    std::size_t pi = 0;
    simulate_scheme(sc, cfg.horizon, mix_seed(cfg.master_seed, r),
                    [&](const SchemeStep& st) {
                      const bool b = st.prior_max_wins;
                      const bool ev = prior_study ? b : !b;
                      if (st.n >= 2 && ev) tally.event(st.n);
                      while (pi < probes.size() && st.n > probes[pi] + 1) ++pi;
                      if (pi < probes.size()) {
                        if (st.n == probes[pi])
                          tally.out.probe_hits[pi] = b ? 1 : 0;
                        else if (st.n == probes[pi] + 1) {
                          tally.out.probe_next_hits[pi] = b ? 1 : 0;
                          ++pi;
                        }
                      }
                    });
    return std::move(tally.out);
  };
  auto reps = run_parallel(cfg.replications, cfg.threads, one);

  const double dr = static_cast<double>(cfg.replications);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    std::int64_t b_hits = 0, handoff_hits = 0;
    for (const auto& rp : reps) {
      b_hits += rp.probe_hits[i];
      handoff_hits += (rp.probe_hits[i] && !rp.probe_next_hits[i]) ? 1 : 0;
    }
    const double pb = static_cast<double>(b_hits) / dr;
    const double ph = static_cast<double>(handoff_hits) / dr;
    res.rows.push_back({cfg.scenario,
                        "prior_max_wins[" + fmt_i64(probes[i]) + "]",
                        exact[i].prior_max_wins, pb,
                        binom_stderr(pb, cfg.replications), ""});
    res.rows.push_back({cfg.scenario, "handoff[" + fmt_i64(probes[i]) + "]",
                        exact[i].then_newcomer_wins_next, ph,
                        binom_stderr(ph, cfg.replications), ""});
  }

  auto occ = finalize_occurrence(std::move(reps), cfg.windows.size());
  for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
    const double phat = occ.window_hit_fraction[w];
    res.rows.push_back({cfg.scenario, window_key(cfg.windows[w]), std::nullopt,
                        phat, binom_stderr(phat, cfg.replications), ""});
  }
  res.occurrence = std::move(occ);
  return res;
}

Copula copula_from(const ConcomitantParams& p) {
  if (p.copula == "independence") return independence_copula();
  if (p.copula == "fgm") return fgm_copula(p.lambda);
  if (p.copula == "comonotone") return comonotone_copula();
  throw ConfigError("unknown copula: " + p.copula);
}

RunResult run_concomitant(const ExperimentConfig& cfg) {
  RunResult res;
  res.config = cfg;
  const auto& p = cfg.concomitant;
  if (p.n < 1) throw ConfigError("concomitant n must be >= 1");
  if (!(p.y > 0.0 && p.y < 1.0))
    throw ConfigError("y must lie in (0, 1) for uniform margins");
  BivariateModel model{copula_from(p), uniform_01(), uniform_01()};

  const double exact_leq = prob_concomitant_leq(model, p.n, p.y);
  const auto beta = beta_limit(model, p.y);
  const auto fit = concomitant_criterion_integral(model, p.y);
  const auto as = as_convergence_verdict(model, {p.y});

  const std::int64_t stream_len = std::max(cfg.horizon, p.n);
  const auto windows = cfg.windows;
  auto one = [&](std::int64_t r) {
    EventTally tally(windows, 1);
    concomitant_stream(model, stream_len, mix_seed(cfg.master_seed, r),
                       [&](const ConcomitantStep& st) {
                         const bool ev = st.y_at_max <= p.y;
                         if (st.n <= cfg.horizon && ev) tally.event(st.n);
                         if (st.n == p.n)
                           tally.out.probe_hits[0] = ev ? 1 : 0;
                       });
    return std::move(tally.out);
  };
  auto reps = run_parallel(cfg.replications, cfg.threads, one);

  std::int64_t hits = 0;
  for (const auto& rp : reps) hits += rp.probe_hits[0];
  const double phat =
      static_cast<double>(hits) / static_cast<double>(cfg.replications);
  res.rows.push_back({cfg.scenario, "prob_leq[" + fmt_i64(p.n) + "]",
                      exact_leq, phat, binom_stderr(phat, cfg.replications),
                      ""});
  res.rows.push_back({cfg.scenario, "beta", beta.value, std::nullopt,
                      std::nullopt, beta.converged ? "" : "Indeterminate"});
  res.rows.push_back({cfg.scenario, "criterion_slope", fit.slope, std::nullopt,
                      std::nullopt, ""});
  res.rows.push_back({cfg.scenario, "criterion_partial", fit.partial_value,
                      std::nullopt, std::nullopt, ""});
  res.rows.push_back({cfg.scenario, "as_verdict", std::nullopt, std::nullopt,
                      std::nullopt, to_string(as.overall)});

  auto occ = finalize_occurrence(std::move(reps), cfg.windows.size());
  for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
    const double f = occ.window_hit_fraction[w];
    res.rows.push_back({cfg.scenario, window_key(cfg.windows[w]), std::nullopt,
                        f, binom_stderr(f, cfg.replications), ""});
  }
  res.occurrence = std::move(occ);
  return res;
}

RunResult run_series(const ExperimentConfig& cfg) {
  RunResult res;
  res.config = cfg;
  const TermSequence seq = builtin_series(cfg.series.family, cfg.series.param);
  const auto v = classify(seq, harness_budget(cfg.horizon));
  for (const auto& [n, s] : v.partial_sums)
    res.rows.push_back({cfg.scenario, fmt_i64(n), s, std::nullopt,
                        std::nullopt, ""});
  res.rows.push_back({cfg.scenario, "classification", std::nullopt,
                      std::nullopt, std::nullopt, to_string(v.verdict)});
  return res;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string opt_json(const std::optional<double>& v) {
  return v ? fmt17(*v) : std::string("null");
}

// ---- config parsing ----

using nlohmann::json;

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key in " + where + ": " + it.key());
}

double get_num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError(std::string(key) + " must be a number");
  return j.at(key).get<double>();
}

std::int64_t get_int(const json& j, const char* key, std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    throw ConfigError(std::string(key) + " must be an integer");
  return j.at(key).get<std::int64_t>();
}

std::string get_str(const json& j, const char* key,
                    const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string())
    throw ConfigError(std::string(key) + " must be a string");
  return j.at(key).get<std::string>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");
  require_keys(j,
               {"scenario", "horizon", "replications", "master_seed", "format",
                "threads", "windows", "params"},
               "config");
  ExperimentConfig cfg;
  cfg.scenario = get_str(j, "scenario", cfg.scenario);
  cfg.horizon = get_int(j, "horizon", cfg.horizon);
  cfg.replications = get_int(j, "replications", cfg.replications);
  if (j.contains("master_seed")) {
    if (!j.at("master_seed").is_number_integer() &&
        !j.at("master_seed").is_number_unsigned())
      throw ConfigError("master_seed must be an integer");
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  }
  const std::string fmt = get_str(j, "format", "csv");
  if (fmt == "csv")
    cfg.format = OutputFormat::Csv;
  else if (fmt == "json")
    cfg.format = OutputFormat::Json;
  else
    throw ConfigError("format must be csv or json");
  cfg.threads = static_cast<int>(get_int(j, "threads", cfg.threads));
  if (j.contains("windows")) {
    if (!j.at("windows").is_array())
      throw ConfigError("windows must be an array of [lo, hi] pairs");
    for (const auto& w : j.at("windows")) {
      if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() ||
          !w[1].is_number_integer())
        throw ConfigError("each window must be a [lo, hi] integer pair");
      cfg.windows.push_back(
          {w[0].get<std::int64_t>(), w[1].get<std::int64_t>()});
    }
  }
  const json params = j.contains("params") ? j.at("params") : json::object();
  if (!params.is_object()) throw ConfigError("params must be an object");
  if (cfg.scenario == "markov_chain") {
    require_keys(params, {"family", "stay", "enter", "first_prob", "criterion"},
                 "params");
    cfg.markov.family = get_str(params, "family", cfg.markov.family);
    cfg.markov.stay = get_num(params, "stay", cfg.markov.stay);
    cfg.markov.enter = get_num(params, "enter", cfg.markov.enter);
    cfg.markov.first_prob =
        get_num(params, "first_prob", cfg.markov.first_prob);
    cfg.markov.criterion = get_str(params, "criterion", cfg.markov.criterion);
  } else if (cfg.scenario == "falpha_maxima") {
    require_keys(params, {"gamma"}, "params");
    cfg.maxima.gamma = get_num(params, "gamma", cfg.maxima.gamma);
  } else if (cfg.scenario == "falpha_newcomer") {
    require_keys(params, {"alpha_family", "param", "study", "hypothesis"},
                 "params");
    cfg.newcomer.alpha_family =
        get_str(params, "alpha_family", cfg.newcomer.alpha_family);
    cfg.newcomer.param = get_num(params, "param", cfg.newcomer.param);
    cfg.newcomer.study = get_str(params, "study", cfg.newcomer.study);
    cfg.newcomer.hypothesis =
        get_str(params, "hypothesis", cfg.newcomer.hypothesis);
  } else if (cfg.scenario == "concomitant") {
    require_keys(params, {"copula", "lambda", "y", "n"}, "params");
    cfg.concomitant.copula =
        get_str(params, "copula", cfg.concomitant.copula);
    cfg.concomitant.lambda = get_num(params, "lambda", cfg.concomitant.lambda);
    cfg.concomitant.y = get_num(params, "y", cfg.concomitant.y);
    cfg.concomitant.n = get_int(params, "n", cfg.concomitant.n);
  } else if (cfg.scenario == "series") {
    require_keys(params, {"family", "param"}, "params");
    cfg.series.family = get_str(params, "family", cfg.series.family);
    cfg.series.param = get_num(params, "param", cfg.series.param);
  }
  validate(cfg);
  return cfg;
}

TermSequence builtin_series(const std::string& family, double param) {
  TermSequence seq;
  if (family == "p_series") {
    const double p = param;
    seq.first_index = 1;
    seq.term_at = [p](std::int64_t n) {
      return std::pow(static_cast<double>(n), -p);
    };
    seq.log_term_at = [p](std::int64_t n) {
      return -p * std::log(static_cast<double>(n));
    };
    seq.exact_class = DeclaredClass{
        p > 1.0 ? SeriesClass::Convergent : SeriesClass::Divergent,
        "power-law terms"};
    return seq;
  }
  if (family == "geometric") {
    if (!(param > 0.0 && param < 1.0))
      throw ConfigError("geometric ratio must lie in (0, 1)");
    const double lr = std::log(param);
    const double r = param;
    seq.first_index = 1;
    seq.term_at = [r](std::int64_t n) {
      return std::pow(r, static_cast<double>(n));
    };
    seq.log_term_at = [lr](std::int64_t n) {
      return static_cast<double>(n) * lr;
    };
    seq.exact_class = DeclaredClass{SeriesClass::Convergent, "geometric"};
    return seq;
  }
  if (family == "one_over_n_log") {
    seq.first_index = 2;
    seq.term_at = [](std::int64_t n) {
      const double d = static_cast<double>(n);
      return 1.0 / (d * std::log(d));
    };
    seq.log_term_at = [](std::int64_t n) {
      const double d = static_cast<double>(n);
      return -std::log(d) - std::log(std::log(d));
    };
    seq.exact_class =
        DeclaredClass{SeriesClass::Divergent, "integral-test boundary"};
    return seq;
  }
  if (family == "one_over_n_log_sq") {
    seq.first_index = 2;
    seq.term_at = [](std::int64_t n) {
      const double d = static_cast<double>(n);
      const double l = std::log(d);
      return 1.0 / (d * l * l);
    };
    seq.log_term_at = [](std::int64_t n) {
      const double d = static_cast<double>(n);
      return -std::log(d) - 2.0 * std::log(std::log(d));
    };
    seq.exact_class = DeclaredClass{SeriesClass::Convergent, "integral test"};
    return seq;
  }
  if (family == "loglog_over_n_log_sq") {
    seq.first_index = 3;
    seq.term_at = [](std::int64_t n) {
      const double d = static_cast<double>(n);
      const double l = std::log(d);
      return std::log(l) / (d * l * l);
    };
    seq.log_term_at = [](std::int64_t n) {
      const double d = static_cast<double>(n);
      const double l = std::log(d);
      return std::log(std::log(l)) - std::log(d) - 2.0 * std::log(l);
    };
    seq.exact_class = DeclaredClass{SeriesClass::Convergent, "integral test"};
    return seq;
  }
  if (family == "loglog_escape") {
    const double g = param;
    if (!(g > 0.0)) throw ConfigError("loglog_escape exponent must be > 0");
    seq.first_index = 3;
    seq.term_at = [g](std::int64_t n) {
      const double d = static_cast<double>(n);
      const double l = std::log(d);
      return std::log(l) / (d * std::pow(l, g));
    };
    seq.log_term_at = [g](std::int64_t n) {
      const double d = static_cast<double>(n);
      const double l = std::log(d);
      return std::log(std::log(l)) - std::log(d) - g * std::log(l);
    };
    seq.exact_class = DeclaredClass{
        g > 1.0 ? SeriesClass::Convergent : SeriesClass::Divergent,
        "integral test with log exponent"};
    return seq;
  }
  throw ConfigError("unknown series family: " + family);
}

RunResult run_replications(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.scenario == "markov_chain") return run_markov(cfg);
  if (cfg.scenario == "falpha_maxima") return run_maxima(cfg);
  if (cfg.scenario == "falpha_newcomer") return run_newcomer(cfg);
  if (cfg.scenario == "concomitant") return run_concomitant(cfg);
  return run_series(cfg);
}

std::string to_csv(const RunResult& result) {
  std::string out =
      "scenario,n_or_window,exact_value,mc_estimate,mc_stderr,verdict\n";
  for (const auto& row : result.rows) {
    out += row.scenario;
    out += ',';
    out += row.key;
    out += ',';
    if (row.exact) out += fmt17(*row.exact);
    out += ',';
    if (row.mc) out += fmt17(*row.mc);
    out += ',';
    if (row.mc_stderr) out += fmt17(*row.mc_stderr);
    out += ',';
    out += row.verdict;
    out += '\n';
  }
  return out;
}

std::string to_json(const RunResult& result) {
  std::string out = "{\n";
  out += "  \"scenario\": \"" + json_escape(result.config.scenario) + "\",\n";
  out += "  \"horizon\": " + fmt_i64(result.config.horizon) + ",\n";
  out += "  \"replications\": " + fmt_i64(result.config.replications) + ",\n";
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%llu",
                  static_cast<unsigned long long>(result.config.master_seed));
    out += std::string("  \"master_seed\": ") + buf + ",\n";
  }
  out += "  \"rows\": [";
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    out += i ? ",\n    " : "\n    ";
    out += "{\"key\": \"" + json_escape(r.key) + "\", ";
    out += "\"exact_value\": " + opt_json(r.exact) + ", ";
    out += "\"mc_estimate\": " + opt_json(r.mc) + ", ";
    out += "\"mc_stderr\": " + opt_json(r.mc_stderr) + ", ";
    out += "\"verdict\": \"" + json_escape(r.verdict) + "\"}";
  }
  out += result.rows.empty() ? "],\n" : "\n  ],\n";
  out += "  \"occurrence\": ";
  if (result.occurrence) {
    const auto& occ = *result.occurrence;
    out += "{\n";
    out += "    \"mean_count\": " + fmt17(occ.mean_count) + ",\n";
    out += "    \"mean_last_index\": " + fmt17(occ.mean_last) + ",\n";
    out += "    \"count_quantiles\": [";
    for (std::size_t i = 0; i < occ.count_quantiles.size(); ++i) {
      if (i) out += ", ";
      out += fmt17(occ.count_quantiles[i]);
    }
    out += "],\n    \"windows\": [";
    for (std::size_t w = 0; w < occ.window_hit_fraction.size(); ++w) {
      if (w) out += ", ";
      out += "{\"lo\": " + fmt_i64(result.config.windows[w].lo) +
             ", \"hi\": " + fmt_i64(result.config.windows[w].hi) +
             ", \"hit_fraction\": " + fmt17(occ.window_hit_fraction[w]) + "}";
    }
    out += "]\n  }\n";
  } else {
    out += "null\n";
  }
  out += "}\n";
  return out;
}

void emit(const RunResult& result, OutputFormat format,
          const std::string& path) {
  const std::string body =
      format == OutputFormat::Csv ? to_csv(result) : to_json(result);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw std::runtime_error("short write to output file: " + path);
}

}  // namespace bcmc
