#include "izosga/harness/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <limits>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "izosga/harness/trace_io.hpp"

namespace izosga::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Curve baseline_curve(std::string name, Parametrization kind, IzosgaConfig opt) {
  opt.learn = false;
  opt.theta_init = ThetaInit::Random;
  return {std::move(name), kind, std::move(opt)};
}

std::string padded(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", i);
  return buf;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json seeds_json(const SeedBundle& s) {
  return {{"omega", s.omega}, {"probe", s.probe}, {"selection", s.selection},
          {"geometry", s.geometry}, {"init", s.init}, {"gap", s.gap}};
}

}  // namespace

ExperimentPlan build_plan(const std::string& preset, const ResolvedConfig& config) {
  const ExperimentSettings& ex = config.experiment;
  const IzosgaConfig& base = config.optimizer;
  const Parametrization kind = config.parametrization;
  ExperimentPlan plan{preset, {}};

  auto with_schedule = [&](IzosgaConfig opt, BudgetSchedule s) {
    opt.schedule = std::move(s);
    return opt;
  };

  if (preset == "run") {
    plan.curves.push_back({"izosga", kind, base});
  } else if (preset == "baseline") {
    plan.curves.push_back(baseline_curve("baseline", kind, base));
  } else if (preset == "sweep") {
    for (int b : ex.budgets) {
      const auto opt = with_schedule(base, BudgetSchedule::constant(b));
      plan.curves.push_back({"izosga_b" + std::to_string(b), kind, opt});
      plan.curves.push_back(baseline_curve("baseline_b" + std::to_string(b), kind, opt));
    }
  } else if (preset == "schedule") {
    const auto a = with_schedule(base, BudgetSchedule::piecewise(ex.schedule_period, ex.schedule_a));
    const auto b = with_schedule(base, BudgetSchedule::piecewise(ex.schedule_period, ex.schedule_b));
    plan.curves.push_back({"schedule_a", kind, a});
    plan.curves.push_back({"schedule_b", kind, b});
    plan.curves.push_back(baseline_curve("baseline_a", kind, a));
    plan.curves.push_back(baseline_curve("baseline_b", kind, b));
  } else if (preset == "varactor") {
    for (int b : ex.budgets) {
      auto opt = with_schedule(base, BudgetSchedule::constant(b));
      opt.step_size = ex.varactor_step_size;
      plan.curves.push_back({"varactor_b" + std::to_string(b), Parametrization::Varactor, opt});
      plan.curves.push_back(
          baseline_curve("varactor_baseline_b" + std::to_string(b), Parametrization::Varactor, opt));
    }
  } else {
    throw ConfigError("unknown preset '" + preset + "'");
  }
  for (const Curve& c : plan.curves) c.optimizer.validate();
  return plan;
}

std::vector<SeedBundle> replication_seeds(std::uint64_t master, int replications) {
  if (replications < 1) throw ConfigError("replication count must be >= 1");
  std::vector<SeedBundle> out;
  for (int r = 0; r < replications; ++r)
    out.push_back(SeedBundle::derive(master, static_cast<std::uint64_t>(r)));
  return out;
}

std::vector<RunResult> run_replications(const NetworkConfig& network, const IrsModel& irs,
                                        const IzosgaConfig& optimizer,
                                        const std::vector<SeedBundle>& seeds, int jobs) {
  std::vector<RunResult> results(seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        results[i] = run(network, irs, optimizer, seeds[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = seeds.size();
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, jobs));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < std::min(n, seeds.size()); ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

void write_plot(const std::string& path, const std::string& title,
                const std::vector<CurveOutput>& curves) {
  std::vector<PlotSeries> series;
  for (const CurveOutput& c : curves) {
    PlotSeries s{c.name, {}, {}};
    for (const SummaryRow& r : c.summary) {
      s.x.push_back(static_cast<double>(r.t));
      s.y.push_back(r.mean);
    }
    series.push_back(std::move(s));
  }
  write_text(path, line_chart_svg(title, "moving-average sumrate (bps/Hz)", series));
}

ExperimentOutput execute(const ExperimentPlan& plan, const ResolvedConfig& config,
                         const std::string& out_dir, bool plot) {
  config.network.validate();
  const auto& ex = config.experiment;
  const auto seeds = replication_seeds(ex.seed, ex.replications);
  fs::create_directories(out_dir);

  json manifest;
  manifest["artifact_version"] = kArtifactVersion;
  manifest["preset"] = plan.preset;
  manifest["created_utc"] = utc_now();
  manifest["config"] = to_key_values(config);
  manifest["master_seed"] = ex.seed;
  manifest["replications"] = ex.replications;
  manifest["moving_average_window"] = config.optimizer.ma_window;
  manifest["seeds"] = json::array();
  for (const SeedBundle& s : seeds) manifest["seeds"].push_back(seeds_json(s));
  manifest["curves"] = json::array();

  ExperimentOutput output;
  for (const Curve& curve : plan.curves) {
    const IrsModel irs(curve.parametrization, config.network.num_irs_elements, config.circuit);
    const auto results = run_replications(config.network, irs, curve.optimizer, seeds, ex.jobs);
    fs::create_directories(fs::path(out_dir) / curve.name);

    CurveOutput co;
    co.name = curve.name;
    std::vector<std::vector<TraceRow>> rows;
    for (std::size_t r = 0; r < results.size(); ++r) {
      const std::string rel = curve.name + "/rep_" + padded(static_cast<int>(r)) + ".csv";
      write_trace_csv((fs::path(out_dir) / rel).string(), results[r].trace);
      write_theta((fs::path(out_dir) / curve.name / ("theta_" + padded(static_cast<int>(r)) + ".txt")).string(),
                  results[r].theta_out);
      co.trace_files.push_back(rel);
      co.final_ma.push_back(results[r].trace.back().sumrate_ma);
      co.epsilon_bar.push_back(results[r].ledger.count() > 0 ? results[r].ledger.mean()
                                                             : std::numeric_limits<double>::quiet_NaN());
      std::vector<TraceRow> tr;
      for (const IterateRecord& rec : results[r].trace)
        tr.push_back({rec.t, rec.sumrate, rec.sumrate_ma, rec.wmmse_iters,
                      rec.gap_estimate.value_or(std::numeric_limits<double>::quiet_NaN()),
                      static_cast<long>(rec.clamp_events), rec.theta_norm});
      rows.push_back(std::move(tr));
    }
    co.summary = aggregate(rows, config.optimizer.ma_window);
    write_text((fs::path(out_dir) / curve.name / "summary.csv").string(), summary_csv(co.summary));

    manifest["curves"].push_back({{"name", curve.name},
                                  {"parametrization", std::string(to_string(curve.parametrization))},
                                  {"schedule", curve.optimizer.schedule.to_string()},
                                  {"learn", curve.optimizer.learn},
                                  {"step_size", curve.optimizer.step_size},
                                  {"traces", co.trace_files},
                                  {"summary", curve.name + "/summary.csv"}});
    output.curves.push_back(std::move(co));
  }

  if (plot) {
    write_plot((fs::path(out_dir) / "sumrate.svg").string(), plan.preset, output.curves);
    manifest["plot"] = "sumrate.svg";
  }
  output.manifest_path = (fs::path(out_dir) / "manifest.json").string();
  write_text(output.manifest_path, manifest.dump(2) + "\n");
  return output;
}

ExperimentOutput replay(const std::string& manifest_path, const std::string& out_dir) {
  json manifest;
  try {
    manifest = json::parse(read_text(manifest_path));
  } catch (const json::exception& e) {
    throw ConfigError("malformed manifest '" + manifest_path + "': " + e.what());
  }
  if (manifest.value("artifact_version", "") != kArtifactVersion)
    throw ConfigError("manifest '" + manifest_path + "' has an unsupported artifact version");
  const KeyValues values = manifest.at("config").get<KeyValues>();
  const ResolvedConfig config = resolve(values);
  const ExperimentPlan plan = build_plan(manifest.at("preset").get<std::string>(), config);
  return execute(plan, config, out_dir, manifest.contains("plot"));
}

}  // namespace izosga::harness
