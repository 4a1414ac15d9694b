// Command-line front end: builds an ExperimentConfig from a JSON config file
// and/or subcommand flags, runs it, and writes one CSV or JSON result file.
// Exit codes: 0 success, 1 runtime failure, 2 usage or config error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bcmc/errors.hpp"
#include "bcmc/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<bcmc::IndexWindow> parse_windows(
    const std::vector<std::string>& specs) {
  std::vector<bcmc::IndexWindow> out;
  for (const auto& s : specs) {
    const auto pos = s.find("..");
    std::size_t used_lo = 0, used_hi = 0;
    if (pos != std::string::npos) {
      try {
        const auto lo = std::stoll(s.substr(0, pos), &used_lo);
        const auto hi = std::stoll(s.substr(pos + 2), &used_hi);
        if (used_lo == pos && used_hi == s.size() - pos - 2) {
          out.push_back({lo, hi});
          continue;
        }
      } catch (const std::exception&) {
      }
    }
    throw bcmc::ConfigError("window must look like lo..hi, got: " + s);
  }
  return out;
}

void write_output(const bcmc::RunResult& res, bcmc::OutputFormat fmt,
                  const std::string& out) {
  if (out.empty() || out == "-") {
    const std::string body =
        fmt == bcmc::OutputFormat::Csv ? bcmc::to_csv(res) : bcmc::to_json(res);
    std::fwrite(body.data(), 1, body.size(), stdout);
    return;
  }
  bcmc::emit(res, fmt, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occurrence experiments for Markov event sequences, "
               "power-transformed maxima schemes, and concomitants of maxima"};
  app.require_subcommand(1);

  std::string config_path, out_path, format_s;
  std::uint64_t seed = 0;
  int threads = 1;
  auto* og_config =
      app.add_option("--config", config_path, "JSON experiment config file");
  auto* og_out = app.add_option("--out", out_path, "output path, - for stdout");
  auto* og_format = app.add_option("--format", format_s, "csv | json")
                        ->check(CLI::IsMember({"csv", "json"}));
  auto* og_seed = app.add_option("--seed", seed, "master seed");
  auto* og_threads = app.add_option("--threads", threads, "worker threads");

  // fallthrough() lets the global options above appear after a subcommand
  // name, e.g. `bcmc_cli markov-tail --horizon 100 --seed 7 --out r.csv`.
  auto* cs = app.add_subcommand("classify-series",
                                "classify a named nonnegative term family");
  cs->fallthrough();
  std::string cs_family = "p_series";
  double cs_param = 2.0;
  std::int64_t cs_horizon = 0;
  auto* cs_family_o = cs->add_option(
      "--family", cs_family,
      "p_series | geometric | one_over_n_log | one_over_n_log_sq | "
      "loglog_over_n_log_sq | loglog_escape");
  auto* cs_param_o = cs->add_option("--param", cs_param, "family parameter");
  auto* cs_horizon_o = cs->add_option(
      "--horizon", cs_horizon,
      "partial-sum checkpoint horizon (classification samples further)");

  auto* mk = app.add_subcommand(
      "markov-tail", "occurrence dichotomy and window unions for an order-1 "
                     "indicator chain");
  mk->fallthrough();
  std::string mk_family = "inverse_square", mk_criterion = "hit_after_clear";
  double mk_stay = 0.0, mk_enter = 0.5, mk_first = 0.0;
  std::int64_t mk_horizon = 0, mk_reps = 0;
  std::vector<std::string> mk_windows;
  auto* mk_family_o = mk->add_option("--family", mk_family,
                                     "inverse_square | inverse | constant");
  auto* mk_stay_o = mk->add_option("--stay", mk_stay, "stay probability");
  auto* mk_enter_o =
      mk->add_option("--enter", mk_enter, "enter probability (constant family)");
  auto* mk_first_o = mk->add_option("--first-prob", mk_first,
                                    "probability of a hit at index 1");
  auto* mk_criterion_o = mk->add_option(
      "--criterion", mk_criterion,
      "hit_after_clear | clear_then_hit | hit_then_clear | zero_run_then_hit "
      "| hit_after_zero_run");
  auto* mk_horizon_o = mk->add_option("--horizon", mk_horizon, "chain length");
  auto* mk_reps_o = mk->add_option("--reps", mk_reps, "replications");
  auto* mk_window_o = mk->add_option("--window", mk_windows,
                                     "index window lo..hi (repeatable)");

  auto* fm = app.add_subcommand(
      "falpha-maxima",
      "running-max threshold events under exponents g(1+1/n) with "
      "thresholds 1 - log(log n)/n");
  fm->fallthrough();
  double fm_gamma = 0.5;
  std::int64_t fm_horizon = 0, fm_reps = 0;
  std::vector<std::string> fm_windows;
  auto* fm_gamma_o = fm->add_option("--gamma", fm_gamma, "exponent factor g");
  auto* fm_horizon_o = fm->add_option("--horizon", fm_horizon, "scheme length");
  auto* fm_reps_o = fm->add_option("--reps", fm_reps, "replications");
  auto* fm_window_o = fm->add_option("--window", fm_windows,
                                     "index window lo..hi (repeatable)");

  auto* fn = app.add_subcommand(
      "falpha-newcomer",
      "prior-max vs newcomer events in the power-transformed draw scheme");
  fn->fallthrough();
  std::string fn_family = "superexp", fn_study = "prior_max",
              fn_hypothesis = "enforce";
  double fn_param = 1.0;
  std::int64_t fn_horizon = 0, fn_reps = 0;
  std::vector<std::string> fn_windows;
  auto* fn_family_o = fn->add_option(
      "--alpha-family", fn_family,
      "constant | power | superexp | one_plus_inverse");
  auto* fn_param_o = fn->add_option("--param", fn_param, "family parameter");
  auto* fn_study_o =
      fn->add_option("--study", fn_study, "prior_max | newcomer_max");
  auto* fn_hypothesis_o =
      fn->add_option("--hypothesis", fn_hypothesis, "enforce | skip");
  auto* fn_horizon_o = fn->add_option("--horizon", fn_horizon, "scheme length");
  auto* fn_reps_o = fn->add_option("--reps", fn_reps, "replications");
  auto* fn_window_o = fn->add_option("--window", fn_windows,
                                     "index window lo..hi (repeatable)");

  auto* cc = app.add_subcommand(
      "concomitant",
      "paired value of the running maximum under a bivariate copula");
  cc->fallthrough();
  std::string cc_copula = "independence";
  double cc_lambda = 0.0, cc_y = 0.5;
  std::int64_t cc_n = 5, cc_horizon = 0, cc_reps = 0;
  std::vector<std::string> cc_windows;
  auto* cc_copula_o = cc->add_option("--copula", cc_copula,
                                     "independence | fgm | comonotone");
  auto* cc_lambda_o =
      cc->add_option("--lambda", cc_lambda, "fgm dependence in [-1, 1]");
  auto* cc_y_o = cc->add_option("--y", cc_y, "level on the second margin");
  auto* cc_n_o = cc->add_option("--n", cc_n, "sample size probe");
  auto* cc_horizon_o = cc->add_option("--horizon", cc_horizon, "stream length");
  auto* cc_reps_o = cc->add_option("--reps", cc_reps, "replications");
  auto* cc_window_o = cc->add_option("--window", cc_windows,
                                     "index window lo..hi (repeatable)");

  auto* sim = app.add_subcommand(
      "simulate", "run the experiment described by --config verbatim");
  sim->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    bcmc::ExperimentConfig cfg;
    if (og_config->count()) cfg = bcmc::parse_config(read_file(config_path));

    if (cs->parsed()) {
      cfg.scenario = "series";
      if (cs_family_o->count()) cfg.series.family = cs_family;
      if (cs_param_o->count()) cfg.series.param = cs_param;
      if (cs_horizon_o->count()) cfg.horizon = cs_horizon;
    } else if (mk->parsed()) {
      cfg.scenario = "markov_chain";
      if (mk_family_o->count()) cfg.markov.family = mk_family;
      if (mk_stay_o->count()) cfg.markov.stay = mk_stay;
      if (mk_enter_o->count()) cfg.markov.enter = mk_enter;
      if (mk_first_o->count()) cfg.markov.first_prob = mk_first;
      if (mk_criterion_o->count()) cfg.markov.criterion = mk_criterion;
      if (mk_horizon_o->count()) cfg.horizon = mk_horizon;
      if (mk_reps_o->count()) cfg.replications = mk_reps;
      if (mk_window_o->count()) cfg.windows = parse_windows(mk_windows);
    } else if (fm->parsed()) {
      cfg.scenario = "falpha_maxima";
      if (fm_gamma_o->count()) cfg.maxima.gamma = fm_gamma;
      if (fm_horizon_o->count()) cfg.horizon = fm_horizon;
      if (fm_reps_o->count()) cfg.replications = fm_reps;
      if (fm_window_o->count()) cfg.windows = parse_windows(fm_windows);
    } else if (fn->parsed()) {
      cfg.scenario = "falpha_newcomer";
      if (fn_family_o->count()) cfg.newcomer.alpha_family = fn_family;
      if (fn_param_o->count()) cfg.newcomer.param = fn_param;
      if (fn_study_o->count()) cfg.newcomer.study = fn_study;
      if (fn_hypothesis_o->count()) cfg.newcomer.hypothesis = fn_hypothesis;
      if (fn_horizon_o->count()) cfg.horizon = fn_horizon;
      if (fn_reps_o->count()) cfg.replications = fn_reps;
      if (fn_window_o->count()) cfg.windows = parse_windows(fn_windows);
    } else if (cc->parsed()) {
      cfg.scenario = "concomitant";
      if (cc_copula_o->count()) cfg.concomitant.copula = cc_copula;
      if (cc_lambda_o->count()) cfg.concomitant.lambda = cc_lambda;
      if (cc_y_o->count()) cfg.concomitant.y = cc_y;
      if (cc_n_o->count()) cfg.concomitant.n = cc_n;
      if (cc_horizon_o->count()) cfg.horizon = cc_horizon;
      if (cc_reps_o->count()) cfg.replications = cc_reps;
      if (cc_window_o->count()) cfg.windows = parse_windows(cc_windows);
    } else if (sim->parsed()) {
      if (!og_config->count())
        throw bcmc::ConfigError("simulate requires --config");
    }

    if (og_seed->count()) cfg.master_seed = seed;
    if (og_threads->count()) cfg.threads = threads;
    if (og_format->count())
      cfg.format = format_s == "json" ? bcmc::OutputFormat::Json
                                      : bcmc::OutputFormat::Csv;

    const auto result = bcmc::run_replications(cfg);
    write_output(result, cfg.format, og_out->count() ? out_path : "-");
    return 0;
  } catch (const bcmc::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
