// izosga command-line front end.
//
//   izosga run|baseline|sweep|schedule|varactor [--config F] [--scale S] [--seed N]
//          [--reps R] [--jobs J] [--set section.key=value]... [--out DIR] [--plot]
//   izosga diagnose --theta F [--trace F] [--rep I] [--lambda L]... [--out F]
//   izosga aggregate CSV... [--window W] [--out F]
//   izosga replay MANIFEST --out DIR
//   izosga selftest [--full]
//
// Exit status: 0 ok, 1 usage or configuration error, 2 run failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "izosga/diagnostics.hpp"
#include "izosga/harness/aggregate.hpp"
#include "izosga/harness/config_file.hpp"
#include "izosga/harness/experiment.hpp"
#include "izosga/harness/properties.hpp"
#include "izosga/harness/trace_io.hpp"

namespace {

using namespace izosga;
using namespace izosga::harness;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<std::string> scale;
  std::optional<int> jobs;
  std::vector<std::string> overrides;
  std::string out = "out";
  bool plot = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_out) {
  cmd->add_option("--config", o.config_path, "INI config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed (fallback: IZOSGA_SEED)");
  cmd->add_option("--reps", o.reps, "replications")->check(CLI::PositiveNumber);
  cmd->add_option("--scale", o.scale, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--jobs", o.jobs, "concurrent replications")->check(CLI::PositiveNumber);
  cmd->add_option("--set", o.overrides, "config override section.key=value (repeatable)");
  if (with_out) {
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_flag("--plot", o.plot, "also write an SVG chart");
  }
}

// Precedence: command-line flag, config file, IZOSGA_SEED, built-in default.
ResolvedConfig load_config(const CommonOptions& o) {
  KeyValues kv;
  if (!o.config_path.empty()) kv = read_config_file(o.config_path);
  for (const std::string& item : o.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || item.find('.') > eq)
      throw ConfigError("--set expects section.key=value, got '" + item + "'");
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  if (o.scale) kv["experiment.scale"] = *o.scale;
  if (o.reps) kv["experiment.replications"] = std::to_string(*o.reps);
  if (o.jobs) kv["experiment.jobs"] = std::to_string(*o.jobs);
  if (o.seed) {
    kv["experiment.seed"] = std::to_string(*o.seed);
  } else if (!kv.count("experiment.seed")) {
    if (const char* env = std::getenv("IZOSGA_SEED")) kv["experiment.seed"] = env;
  }
  return resolve(kv);
}

int run_preset(const std::string& preset, const CommonOptions& o) {
  const ResolvedConfig config = load_config(o);
  const ExperimentPlan plan = build_plan(preset, config);
  const ExperimentOutput out = execute(plan, config, o.out, o.plot);
  for (const CurveOutput& c : out.curves) {
    const SummaryRow& last = c.summary.back();
    std::printf("%-24s final moving-average sumrate %.4f +- %.4f (R=%d)\n", c.name.c_str(),
                last.mean, last.stderr_, last.replications);
  }
  std::printf("manifest: %s\n", out.manifest_path.c_str());
  return 0;
}

struct DiagnoseOptions {
  std::string theta;
  std::string trace;
  int rep = 0;
  std::vector<double> lambdas;
  std::string out;
};

int diagnose(const CommonOptions& o, const DiagnoseOptions& d) {
  const ResolvedConfig config = load_config(o);
  const IrsModel irs = config.irs();
  const RVec theta = read_theta(d.theta);
  if (theta.size() != irs.dimension())
    throw ConfigError("theta file has " + std::to_string(theta.size()) + " entries, expected " +
                      std::to_string(irs.dimension()));
  if (!irs.box().contains(theta)) throw ConfigError("theta lies outside the parameter box");

  const SeedBundle seeds = SeedBundle::derive(config.experiment.seed, static_cast<std::uint64_t>(d.rep));
  const ChannelModel model(config.network, resolve_user_positions(config.network, seeds.geometry));
  const std::uint64_t sample_seed = mix_seed(seeds.gap, 0x6d6f7265ULL);

  nlohmann::json report;
  report["theta_file"] = d.theta;
  report["replication"] = d.rep;
  report["seeds"] = {{"master", config.experiment.seed}, {"geometry", seeds.geometry},
                     {"moreau_samples", sample_seed}};
  report["budgets"] = config.optimizer.schedule.to_string();
  if (!d.trace.empty()) {
    ErrorLedger ledger(config.optimizer.gap_cadence);
    for (const TraceRow& row : read_trace_csv(d.trace)) {
      if (std::isnan(row.gap_estimate)) ledger.mark_skipped(row.t);
      else ledger.track(row.t, row.gap_estimate);
    }
    report["epsilon_bar"] = ledger.count() > 0 ? nlohmann::json(ledger.mean()) : nlohmann::json();
    report["epsilon_bar_count"] = ledger.count();
    report["epsilon_bar_skipped"] = ledger.skipped();
  }

  std::vector<double> lambdas = d.lambdas;
  if (lambdas.empty()) lambdas.push_back(config.moreau.lambda);
  nlohmann::json estimates = nlohmann::json::array();
  for (double lambda : lambdas) {
    MoreauConfig cfg = config.moreau;
    cfg.lambda = lambda;
    const MoreauEstimate est = moreau_grad_norm(model, irs, theta, cfg, sample_seed);
    estimates.push_back({{"lambda", lambda}, {"moreau_estimate", est.value},
                         {"prox_iterations", est.iterations}, {"mapping_norm", est.mapping_norm},
                         {"samples", est.samples}, {"reference_budget", cfg.reference_budget}});
  }
  report["moreau_estimate"] = estimates.front()["moreau_estimate"];
  report["lambda"] = lambdas.front();
  if (lambdas.size() > 1) report["lambda_sweep"] = estimates;
  else report.update(estimates.front());

  const std::string text = report.dump(2) + "\n";
  if (d.out.empty()) std::cout << text;
  else write_text(d.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeroth-order IRS optimization with an inexact WMMSE oracle"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string current;
  for (const char* name : {"run", "baseline", "sweep", "schedule", "varactor"}) {
    static const std::map<std::string, std::string> help = {
        {"run", "single iZoSGA experiment from the config"},
        {"baseline", "WMMSE with a random fixed IRS configuration"},
        {"sweep", "one curve per WMMSE budget, with matched baselines"},
        {"schedule", "the two decreasing budget schedules"},
        {"varactor", "budget sweep with the varactor reflection model"}};
    CLI::App* cmd = app.add_subcommand(name, help.at(name));
    add_common(cmd, common, true);
    cmd->callback([&current, name] { current = name; });
  }

  DiagnoseOptions diag;
  CLI::App* dcmd = app.add_subcommand("diagnose", "Moreau stationarity and oracle-error report");
  add_common(dcmd, common, false);
  dcmd->add_option("--theta", diag.theta, "saved parameter vector")->required()->check(CLI::ExistingFile);
  dcmd->add_option("--trace", diag.trace, "trace CSV to read gap estimates from")->check(CLI::ExistingFile);
  dcmd->add_option("--rep", diag.rep, "replication index the theta belongs to")->check(CLI::NonNegativeNumber);
  dcmd->add_option("--lambda", diag.lambdas, "envelope parameter; repeat for a sensitivity sweep")
      ->check(CLI::PositiveNumber);
  dcmd->add_option("--out", diag.out, "write the JSON report here instead of stdout");
  dcmd->callback([&current] { current = "diagnose"; });

  std::vector<std::string> csvs;
  int window = 200;
  std::string agg_out;
  CLI::App* acmd = app.add_subcommand("aggregate", "mean and standard error across trace CSVs");
  acmd->add_option("csv", csvs, "trace files")->required()->check(CLI::ExistingFile);
  acmd->add_option("--window", window, "moving-average window")->check(CLI::PositiveNumber);
  acmd->add_option("--out", agg_out, "output CSV (stdout when absent)");
  acmd->callback([&current] { current = "aggregate"; });

  std::string manifest, replay_out;
  CLI::App* rcmd = app.add_subcommand("replay", "re-run an experiment from its manifest");
  rcmd->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
  rcmd->add_option("--out", replay_out, "output directory")->required();
  rcmd->callback([&current] { current = "replay"; });

  bool full = false;
  CLI::App* scmd = app.add_subcommand("selftest", "run the built-in property suites");
  scmd->add_flag("--full", full, "use the full acceptance sample sizes");
  scmd->callback([&current] { current = "selftest"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (current == "diagnose") return diagnose(common, diag);
    if (current == "aggregate") {
      const std::string text = summary_csv(aggregate_files(csvs, window));
      if (agg_out.empty()) std::cout << text;
      else write_text(agg_out, text);
      return 0;
    }
    if (current == "replay") {
      const ExperimentOutput out = replay(manifest, replay_out);
      std::printf("manifest: %s\n", out.manifest_path.c_str());
      return 0;
    }
    if (current == "selftest") {
      bool ok = true;
      for (const PropertyResult& r : property_suite(!full)) {
        std::printf("%s  %-34s %s (%.1fs)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str(), r.seconds);
        ok = ok && r.passed;
      }
      return ok ? 0 : 2;
    }
    return run_preset(current, common);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "izosga: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "izosga: run failed: %s\n", e.what());
    return 2;
  }
}
