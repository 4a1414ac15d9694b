#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcmc/copula.hpp"
#include "bcmc/falpha.hpp"
#include "bcmc/markov.hpp"
#include "bcmc/series.hpp"

namespace bcmc {

enum class OutputFormat { Csv, Json };

struct IndexWindow {
  std::int64_t lo = 1;
  std::int64_t hi = 1;
};

// Order-1 chain families buildable from text config.
//   inverse_square: enter probability 1/(n+1)^2, stay probability `stay`
//   inverse:        enter probability 1/(n+1),   stay probability `stay`
//   constant:       enter probability `enter`,   stay probability `stay`
struct MarkovParams {
  std::string family = "inverse_square";
  double stay = 0.0;
  double enter = 0.5;
  double first_prob = 0.0;
  std::string criterion = "hit_after_clear";
};

struct MaximaParams {
  double gamma = 0.5;  // factor in the exponents g(1 + 1/n)
};

struct NewcomerParams {
  std::string alpha_family = "superexp";  // constant | power | superexp | one_plus_inverse
  double param = 1.0;
  std::string study = "prior_max";  // prior_max | newcomer_max
  std::string hypothesis = "enforce";  // enforce | skip
};

struct ConcomitantParams {
  std::string copula = "independence";  // independence | fgm | comonotone
  double lambda = 0.0;
  double y = 0.5;
  std::int64_t n = 5;
};

struct SeriesParams {
  std::string family = "p_series";
  double param = 2.0;
};

struct ExperimentConfig {
  std::string scenario = "markov_chain";
  std::int64_t horizon = 1000;
  std::int64_t replications = 100;
  std::uint64_t master_seed = 1;
  OutputFormat format = OutputFormat::Csv;
  int threads = 1;
  std::vector<IndexWindow> windows;
  MarkovParams markov;
  MaximaParams maxima;
  NewcomerParams newcomer;
  ConcomitantParams concomitant;
  SeriesParams series;
};

// Parses the JSON config document. Unknown keys anywhere are errors.
ExperimentConfig parse_config(const std::string& text);

// Named term-sequence families with analytically declared classes:
//   p_series(p)            1/n^p
//   geometric(r)           r^n, r in (0,1)
//   one_over_n_log         1/(n log n)
//   one_over_n_log_sq      1/(n log^2 n)
//   loglog_over_n_log_sq   log(log n)/(n log^2 n)
//   loglog_escape(g)       log(log n)/(n (log n)^g)
TermSequence builtin_series(const std::string& family, double param);

struct ResultRow {
  std::string scenario;
  std::string key;  // index, "lo..hi" window, or quantity label
  std::optional<double> exact;
  std::optional<double> mc;
  std::optional<double> mc_stderr;
  std::string verdict;
};

struct OccurrenceStats {
  std::vector<std::int64_t> counts;      // event occurrences per replication
  std::vector<std::int64_t> last_index;  // 0 when the event never occurred
  std::vector<std::vector<std::int64_t>> window_counts;  // [window][replication]
  double mean_count = 0.0;
  double mean_last = 0.0;
  std::vector<double> count_quantiles;      // 10%, 50%, 90% (nearest rank)
  std::vector<double> window_hit_fraction;  // replications with >= 1 occurrence
};

struct RunResult {
  ExperimentConfig config;
  std::vector<ResultRow> rows;
  std::optional<OccurrenceStats> occurrence;
};

// Exact quantities first, then `replications` seeded runs distributed over
// `threads` workers; replication r always draws from mix_seed(master_seed, r),
// so the result is a pure function of (config, master_seed) and never of the
// scheduling.
RunResult run_replications(const ExperimentConfig& config);

// Fixed layouts, 17 significant digits; equal results serialize to equal
// bytes. The CSV column order is
// scenario,n_or_window,exact_value,mc_estimate,mc_stderr,verdict.
std::string to_csv(const RunResult& result);
std::string to_json(const RunResult& result);
void emit(const RunResult& result, OutputFormat format, const std::string& path);

}  // namespace bcmc
