// Copyright 2026 The Skeptic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skeptic/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "skeptic/features.hpp"
#include "skeptic/game.hpp"
#include "skeptic/hindsight.hpp"
#include "skeptic/ingest.hpp"
#include "skeptic/mixture.hpp"
#include "skeptic/sim.hpp"

namespace skeptic {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_vector(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(v[i]);
  }
  return out + "]";
}

PriorSpec::Interval parse_interval(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw CLI::ValidationError("interval must look like lo:hi, got '" + text + "'");
  }
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("cannot parse interval '" + text + "'");
  }
}

std::vector<PriorSpec::Interval> parse_box(const std::string& text) {
  std::vector<PriorSpec::Interval> box;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto len = comma == std::string::npos ? std::string::npos : comma - start;
    box.push_back(parse_interval(text.substr(start, len)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return box;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) out.push_back(std::stod(token));
  return out;
}

// Flags shared by the subcommands that play a game.
struct StrategyFlags {
  std::string strategy;
  std::string features_text;
  std::string prior_text;
  std::string beta_prior_text;
  int nodes = 0;

  void attach(CLI::App* cmd, const std::string& default_strategy) {
    strategy = default_strategy;
    cmd->add_option("--strategy", strategy, "strategy preset (strategy-1|strategy-2|strategy-3)");
    cmd->add_option("--features", features_text,
                    "explicit feature list, e.g. const,logit,lag:1,exo:NAME");
    cmd->add_option("--prior", prior_text, "prior box on raw coefficients, lo:hi[,lo:hi...]");
    cmd->add_option("--beta-prior", beta_prior_text,
                    "prior interval for beta on the forecast-logit coordinate, lo:hi");
    cmd->add_option("--nodes", nodes, "quadrature nodes per dimension");
  }

  FeatureSpec resolve_features() const {
    if (!features_text.empty()) return parse_feature_spec(features_text);
    return strategy_preset(strategy);
  }

  PriorSpec resolve_prior(const FeatureSpec& spec, PriorSpec::Interval default_beta) const {
    if (!prior_text.empty()) {
      auto box = parse_box(prior_text);
      if (static_cast<int>(box.size()) != spec.dimension()) {
        throw CLI::ValidationError("--prior has " + std::to_string(box.size()) +
                                   " intervals for " + std::to_string(spec.dimension()) +
                                   " features");
      }
      return uniform_prior(std::move(box), nodes);
    }
    PriorSpec::Interval beta = default_beta;
    if (!beta_prior_text.empty()) {
      if (!spec.logit_coordinate()) {
        throw CLI::ValidationError("--beta-prior needs a forecast-logit feature");
      }
      beta = parse_interval(beta_prior_text);
    }
    return strategy_prior(spec, {0.0, 1.0}, beta, nodes);
  }
};

struct SeriesInput {
  std::vector<Observation> obs;
  std::vector<ExogenousRow> extras;  // empty, or one row per observation
};

SeriesInput series_from_records(const std::vector<Record>& records) {
  SeriesInput in;
  in.obs.reserve(records.size());
  bool any_extras = false;
  for (const Record& r : records) any_extras |= !r.extras.empty();
  for (const Record& r : records) {
    in.obs.push_back({r.p, r.x});
    if (any_extras) in.extras.push_back(r.extras);
  }
  return in;
}

struct TraceRow {
  long n = 0;
  double p = 0.0;
  int x = 0;
  double nu = 0.0;
  double log_k_pi = 0.0;
  std::optional<double> log_k_mle;
  std::optional<double> svs_half;
  std::optional<double> logdet_v;
  std::optional<double> ratio;
};

struct GameRun {
  std::vector<TraceRow> rows;
  std::vector<Round> rounds;
  GameState state;
  std::optional<Mixture> mixture;
  std::optional<MleResult> final_mle;
};

// Plays one full game with the Bayesian strategy.  The per-round trace
// always carries capital and bet; the diagnostics columns are filled
// every `trace_every` rounds (and on the last round) since each one
// costs an MLE solve.
GameRun run_game(const SeriesInput& input, const FeatureSpec& spec, const PriorSpec& prior,
                 long trace_every, bool with_mle) {
  const int d = spec.dimension();
  GameRun run;
  run.state = init_state(d);
  run.mixture.emplace(prior, d);
  run.rounds.reserve(input.obs.size());
  run.rows.reserve(input.obs.size());

  Theta warm = Theta::Zero(d);
  const long last = static_cast<long>(input.obs.size());
  for (long i = 0; i < last; ++i) {
    const Observation& obs = input.obs[static_cast<std::size_t>(i)];
    const ExogenousRow* exo =
        input.extras.empty() ? nullptr : &input.extras[static_cast<std::size_t>(i)];
    const Eigen::VectorXd c = build_features(spec, run.rounds, obs.p, exo);
    const double nu = run.mixture->bet_ratio(obs.p, c);
    const Round round{obs.p, c, obs.x};
    play_round(run.state, round, nu);
    run.mixture->update(round);
    run.rounds.push_back(round);

    TraceRow row;
    row.n = i + 1;
    row.p = obs.p;
    row.x = obs.x;
    row.nu = nu;
    row.log_k_pi = run.mixture->log_capital();
    if (with_mle && (row.n % trace_every == 0 || row.n == last)) {
      const Diagnostics diag = diagnostics(run.state);
      if (!diag.degenerate) {
        row.svs_half = 0.5 * diag.svs;
        row.logdet_v = diag.logdet_v;
        row.ratio = diag.ratio;
        const MleResult result = mle(run.rounds, warm);
        if (result.converged) {
          row.log_k_mle = result.log_capital;
          warm = result.theta_star;
        }
        if (row.n == last) run.final_mle = result;
      }
    }
    run.rows.push_back(row);
  }
  return run;
}

void write_trace(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << "n,p,x,nu,logK_pi,logK_mle,svs_half,logdetV,ratio\n";
  const auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string{}; };
  for (const TraceRow& r : rows) {
    os << r.n << ',' << fmt(r.p) << ',' << r.x << ',' << fmt(r.nu) << ',' << fmt(r.log_k_pi)
       << ',' << opt(r.log_k_mle) << ',' << opt(r.svs_half) << ',' << opt(r.logdet_v) << ','
       << opt(r.ratio) << '\n';
  }
}

void write_summary(std::ostream& os, const GameRun& run, const FeatureSpec& spec,
                   const PriorSpec& prior) {
  const TraceRow& tail = run.rows.back();
  os << "summary:\n";
  os << "  rounds: " << tail.n << '\n';
  os << "  final_logK_pi: " << fmt(tail.log_k_pi) << '\n';
  os << "  svs_half: " << (tail.svs_half ? fmt(*tail.svs_half) : "undefined") << '\n';
  os << "  logdetV: " << (tail.logdet_v ? fmt(*tail.logdet_v) : "undefined") << '\n';
  os << "  theorem2_ratio: " << (tail.ratio ? fmt(*tail.ratio) : "undefined") << '\n';
  os << "  logK_mle: " << (tail.log_k_mle ? fmt(*tail.log_k_mle) : "undefined") << '\n';
  if (run.final_mle) {
    const MleResult& m = *run.final_mle;
    os << "  theta_star: " << fmt_vector(m.theta_star) << '\n';
    if (const auto j = spec.logit_coordinate()) {
      os << "  hindsight_beta: " << fmt(m.theta_star[*j] + 1.0) << '\n';
    }
    if (m.converged) {
      os << "  mle_converged: yes (" << m.iterations << " iterations)\n";
      const LaplaceResult lap = laplace_log_capital(m, prior);
      os << "  laplace_logK: " << fmt(lap.value)
         << (lap.in_support ? "" : " (theta_star outside prior support)") << '\n';
      os << "  laplace_discrepancy: " << fmt(std::abs(lap.value - tail.log_k_pi)) << '\n';
    } else if (m.recession) {
      os << "  mle_converged: no (separation, recession direction " << fmt_vector(*m.recession)
         << ")\n";
    } else {
      os << "  mle_converged: no\n";
    }
  }
  if (!prior.supports_origin()) {
    os << "  note: prior does not cover a neighborhood of the origin;"
          " weak-forcing guarantees do not apply\n";
  }
}

int cmd_simulate(const std::string& case_name, long n, std::uint64_t seed, long replications,
                 const StrategyFlags& flags, double q, double p11, double p10,
                 const std::string& forecasts, const std::string& out_path, long trace_every,
                 std::ostream& out, std::ostream& err) {
  Scenario scenario = scenario_preset(case_name);
  scenario.n = n;
  scenario.seed = seed;
  if (q >= 0.0) {
    if (!std::holds_alternative<Bernoulli>(scenario.reality)) {
      throw CLI::ValidationError("--q only applies to a Bernoulli reality");
    }
    scenario.reality = Bernoulli{q};
  }
  if (p11 >= 0.0 || p10 >= 0.0) {
    auto* mc = std::get_if<MarkovChain>(&scenario.reality);
    if (mc == nullptr) throw CLI::ValidationError("--p11/--p10 only apply to case-3");
    if (p11 >= 0.0) mc->p11 = p11;
    if (p10 >= 0.0) mc->p10 = p10;
  }
  if (!forecasts.empty()) scenario.forecaster = Alternating{parse_double_list(forecasts)};

  const FeatureSpec spec = flags.resolve_features();
  const PriorSpec prior = flags.resolve_prior(spec, {0.0, 1.0});

  std::ofstream file;
  const bool to_file = !out_path.empty();
  if (to_file) {
    file.open(out_path);
    if (!file) throw IngestError("cannot open '" + out_path + "' for writing");
  }
  std::ostream& trace_os = to_file ? static_cast<std::ostream&>(file) : out;
  std::ostream& summary_os = to_file ? out : err;

  if (replications <= 1) {
    SeriesInput input{generate(scenario), {}};
    const GameRun run = run_game(input, spec, prior, trace_every, true);
    write_trace(trace_os, run.rows);
    write_summary(summary_os, run, spec, prior);
    return 0;
  }

  // Multi-seed sweep: independent games fan out across worker threads and
  // are merged in seed order.
  struct SweepRow {
    std::uint64_t seed;
    double final_log_k;
    double max_log_k;
    std::optional<double> log_k_mle;
    std::optional<double> ratio;
  };
  std::vector<std::future<SweepRow>> futures;
  futures.reserve(static_cast<std::size_t>(replications));
  for (long r = 0; r < replications; ++r) {
    Scenario s = scenario;
    s.seed = seed + static_cast<std::uint64_t>(r);
    futures.push_back(std::async(std::launch::async, [s, spec, prior]() {
      SeriesInput input{generate(s), {}};
      GameRun run = run_game(input, spec, prior, s.n, true);  // diagnostics on final round only
      SweepRow row{s.seed, run.rows.back().log_k_pi, 0.0, run.rows.back().log_k_mle,
                   run.rows.back().ratio};
      for (const TraceRow& t : run.rows) row.max_log_k = std::max(row.max_log_k, t.log_k_pi);
      return row;
    }));
  }
  trace_os << "seed,final_logK_pi,max_logK_pi,logK_mle,ratio\n";
  for (auto& f : futures) {
    const SweepRow row = f.get();
    trace_os << row.seed << ',' << fmt(row.final_log_k) << ',' << fmt(row.max_log_k) << ','
             << (row.log_k_mle ? fmt(*row.log_k_mle) : std::string{}) << ','
             << (row.ratio ? fmt(*row.ratio) : std::string{}) << '\n';
  }
  return 0;
}

int cmd_audit(const std::string& data_path, double clamp_eps, const StrategyFlags& flags,
              const std::string& out_path, long trace_every, std::ostream& out,
              std::ostream& err) {
  const std::vector<Record> records = load_csv(data_path, clamp_eps);
  const SeriesInput input = series_from_records(records);
  const FeatureSpec spec = flags.resolve_features();
  // Audits default to the distrust-aware beta prior U[0, 2].
  const PriorSpec prior = flags.resolve_prior(spec, {0.0, 2.0});

  std::ofstream file;
  const bool to_file = !out_path.empty();
  if (to_file) {
    file.open(out_path);
    if (!file) throw IngestError("cannot open '" + out_path + "' for writing");
  }
  const GameRun run = run_game(input, spec, prior, trace_every, true);
  write_trace(to_file ? static_cast<std::ostream&>(file) : out, run.rows);
  write_summary(to_file ? out : err, run, spec, prior);
  return 0;
}

int cmd_mle(const std::string& data_path, const std::string& case_name, long n,
            std::uint64_t seed, double clamp_eps, const StrategyFlags& flags, std::ostream& out) {
  SeriesInput input;
  if (!data_path.empty()) {
    input = series_from_records(load_csv(data_path, clamp_eps));
  } else {
    Scenario scenario = scenario_preset(case_name);
    if (n < 1) throw CLI::ValidationError("--n is required with --case");
    scenario.n = n;
    scenario.seed = seed;
    input.obs = generate(scenario);
  }
  const FeatureSpec spec = flags.resolve_features();
  const PriorSpec prior = flags.resolve_prior(spec, {0.0, 2.0});

  std::vector<Round> rounds;
  GameState state = init_state(spec.dimension());
  for (std::size_t i = 0; i < input.obs.size(); ++i) {
    const ExogenousRow* exo = input.extras.empty() ? nullptr : &input.extras[i];
    const Eigen::VectorXd c = build_features(spec, rounds, input.obs[i].p, exo);
    const Round round{input.obs[i].p, c, input.obs[i].x};
    play_round(state, round, 0.0);
    rounds.push_back(round);
  }

  const Diagnostics diag = diagnostics(state);
  out << "mle report:\n  rounds: " << state.n << '\n';
  if (diag.degenerate) {
    out << "  V_n is singular; the maximum-likelihood parameter is not identified\n";
    return 3;
  }
  const MleResult result = mle(rounds);
  out << "  theta_star: " << fmt_vector(result.theta_star) << '\n';
  if (const auto j = spec.logit_coordinate()) {
    out << "  hindsight_beta: " << fmt(result.theta_star[*j] + 1.0) << '\n';
  }
  out << "  logK_mle: " << fmt(result.log_capital) << '\n';
  out << "  grad_norm: " << fmt(result.grad_norm) << '\n';
  if (result.converged) {
    out << "  converged: yes (" << result.iterations << " iterations)\n";
  } else if (result.recession) {
    out << "  converged: no (separation, recession direction " << fmt_vector(*result.recession)
        << ")\n";
    return 0;
  } else {
    out << "  converged: no\n";
    return 3;
  }
  out << "  lambda_min: " << fmt(diag.lambda_min) << "\n  lambda_max: " << fmt(diag.lambda_max)
      << '\n';
  out << "  svs_half: " << fmt(0.5 * diag.svs) << '\n';
  out << "  theorem2_ratio: " << (diag.ratio ? fmt(*diag.ratio) : "undefined") << '\n';
  const BoundReport bound = small_mle_bound(rounds, state, result);
  out << "  vinv_s_norm: " << fmt(bound.vinv_s_norm) << '\n';
  out << "  lemma1_premise: " << (bound.premise_holds ? "holds" : "does not hold") << '\n';
  out << "  mle_norm: " << fmt(bound.mle_norm) << "  bound: " << fmt(bound.bound) << '\n';
  if (bound.sandwich_holds) {
    out << "  capital_ratio: " << fmt(bound.capital_ratio) << " in [" << fmt(bound.sandwich_lo)
        << ", " << fmt(bound.sandwich_hi) << "]: " << (*bound.sandwich_holds ? "yes" : "NO")
        << '\n';
  }
  const LaplaceResult lap = laplace_log_capital(result, prior);
  out << "  laplace_logK: " << fmt(lap.value)
      << (lap.in_support ? "" : " (theta_star outside prior support)") << '\n';
  return 0;
}

int cmd_calib(const std::string& data_path, double clamp_eps, const std::string& out_path,
              std::ostream& out, std::ostream& err) {
  const std::vector<Record> records = load_csv(data_path, clamp_eps);
  const CalibrationTable table = calibration_table(records);
  if (table.binned_from_decimal) {
    err << "warning: decimal probabilities binned to the nearest decile\n";
  }
  char buf[80];
  out << " p(%)    x=1    x=0   ratio(%)\n";
  for (const auto& [percent, bin] : table.bins) {
    std::snprintf(buf, sizeof(buf), "%5d  %5ld  %5ld  %9.1f\n", percent, bin.n1, bin.n0,
                  ratio_percent_1dp(bin.n1, bin.n1 + bin.n0));
    out << buf;
  }
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) throw IngestError("cannot open '" + out_path + "' for writing");
    file << "p,n1,n0,ratio\n";
    for (const auto& [percent, bin] : table.bins) {
      std::snprintf(buf, sizeof(buf), "%d,%ld,%ld,%.1f\n", percent, bin.n1, bin.n0,
                    ratio_percent_1dp(bin.n1, bin.n1 + bin.n0));
      file << buf;
    }
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"betting-based audit of binary probability forecasts"};
  app.require_subcommand(1);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "play a strategy against a scenario");
  std::string case_name;
  long n = 0;
  std::uint64_t seed = 1;
  long replications = 1;
  long trace_every = 10;
  std::string out_path;
  double q = -1.0, p11 = -1.0, p10 = -1.0;
  std::string forecasts;
  StrategyFlags sim_flags;
  sim_cmd->add_option("--case", case_name, "scenario preset (case-1|case-2|case-3|honest)")
      ->required();
  sim_cmd->add_option("--n", n, "number of rounds")->required();
  sim_cmd->add_option("--seed", seed, "PRNG seed");
  sim_cmd->add_option("--replications", replications, "seeds seed..seed+R-1, one summary row each");
  sim_cmd->add_option("--out", out_path, "trace output path (default: stdout)");
  sim_cmd->add_option("--trace-every", trace_every, "diagnostics cadence in rounds");
  sim_cmd->add_option("--q", q, "Bernoulli success probability override");
  sim_cmd->add_option("--p11", p11, "Markov P(1|1) override (case-3)");
  sim_cmd->add_option("--p10", p10, "Markov P(1|0) override (case-3)");
  sim_cmd->add_option("--forecasts", forecasts, "alternating forecast list, e.g. 0.4,0.6");
  sim_flags.attach(sim_cmd, "strategy-1");

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "bet against a recorded forecast series");
  std::string audit_data;
  double clamp_eps = 0.01;
  std::string audit_out;
  long audit_trace_every = 10;
  StrategyFlags audit_flags;
  audit_cmd->add_option("--data", audit_data, "input CSV (date,p,x[,extra...])")->required();
  audit_cmd->add_option("--clamp-eps", clamp_eps, "boundary forecast substitution");
  audit_cmd->add_option("--out", audit_out, "trace output path (default: stdout)");
  audit_cmd->add_option("--trace-every", audit_trace_every, "diagnostics cadence in rounds");
  audit_flags.attach(audit_cmd, "strategy-3");

  // mle
  auto* mle_cmd = app.add_subcommand("mle", "hindsight analysis of a series");
  std::string mle_data, mle_case;
  long mle_n = 0;
  std::uint64_t mle_seed = 1;
  double mle_clamp = 0.01;
  StrategyFlags mle_flags;
  mle_cmd->add_option("--data", mle_data, "input CSV");
  mle_cmd->add_option("--case", mle_case, "scenario preset instead of --data");
  mle_cmd->add_option("--n", mle_n, "rounds (with --case)");
  mle_cmd->add_option("--seed", mle_seed, "PRNG seed (with --case)");
  mle_cmd->add_option("--clamp-eps", mle_clamp, "boundary forecast substitution");
  mle_flags.attach(mle_cmd, "strategy-3");

  // calib
  auto* calib_cmd = app.add_subcommand("calib", "print the calibration table");
  std::string calib_data, calib_out;
  double calib_clamp = 0.01;
  calib_cmd->add_option("--data", calib_data, "input CSV")->required();
  calib_cmd->add_option("--out", calib_out, "also write the table as CSV");
  calib_cmd->add_option("--clamp-eps", calib_clamp, "boundary forecast substitution");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 1;
  }

  try {
    if (sim_cmd->parsed()) {
      return cmd_simulate(case_name, n, seed, replications, sim_flags, q, p11, p10, forecasts,
                          out_path, trace_every, out, err);
    }
    if (audit_cmd->parsed()) {
      return cmd_audit(audit_data, clamp_eps, audit_flags, audit_out, audit_trace_every, out,
                       err);
    }
    if (mle_cmd->parsed()) {
      if (mle_data.empty() == mle_case.empty()) {
        err << "mle: exactly one of --data or --case is required\n";
        return 1;
      }
      return cmd_mle(mle_data, mle_case, mle_n, mle_seed, mle_clamp, mle_flags, out);
    }
    return cmd_calib(calib_data, calib_clamp, calib_out, out, err);
  } catch (const CLI::ValidationError& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const IngestError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 3;
  }
}

}  // namespace skeptic
