#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "izosga/harness/aggregate.hpp"
#include "izosga/harness/config_file.hpp"

namespace izosga::harness {

inline constexpr const char* kArtifactVersion = "izosga-artifact/1";

/// One plotted series: an optimizer configuration run over R replications.
struct Curve {
  std::string name;
  Parametrization parametrization = Parametrization::IdealPhase;
  IzosgaConfig optimizer;
};

/// Presets: "run", "baseline", "sweep", "schedule", "varactor".
struct ExperimentPlan {
  std::string preset;
  std::vector<Curve> curves;
};

ExperimentPlan build_plan(const std::string& preset, const ResolvedConfig& config);

/// Replication r of every curve uses SeedBundle::derive(master, r), so curves
/// of one plan share user drops and channel draws.
std::vector<SeedBundle> replication_seeds(std::uint64_t master, int replications);

/// Runs one curve over the given seed bundles with up to `jobs` worker
/// threads. The result order follows `seeds`, independent of scheduling.
std::vector<RunResult> run_replications(const NetworkConfig& network, const IrsModel& irs,
                                        const IzosgaConfig& optimizer,
                                        const std::vector<SeedBundle>& seeds, int jobs);

struct CurveOutput {
  std::string name;
  std::vector<std::string> trace_files;  // relative to the output directory
  std::vector<SummaryRow> summary;
  std::vector<double> final_ma;          // per replication, last sumrate_ma
  std::vector<double> epsilon_bar;       // per replication ledger mean (NaN if unmeasured)
};

struct ExperimentOutput {
  std::vector<CurveOutput> curves;
  std::string manifest_path;
};

/// Runs every curve of the plan and writes, under `out_dir`:
///   <curve>/rep_NNN.csv, <curve>/theta_NNN.txt, <curve>/summary.csv,
///   manifest.json and, with `plot`, sumrate.svg.
ExperimentOutput execute(const ExperimentPlan& plan, const ResolvedConfig& config,
                         const std::string& out_dir, bool plot);

/// Re-runs the experiment recorded in a manifest into `out_dir`.
ExperimentOutput replay(const std::string& manifest_path, const std::string& out_dir);

/// Writes an SVG of the per-curve summaries (presentation only).
void write_plot(const std::string& path, const std::string& title,
                const std::vector<CurveOutput>& curves);

}  // namespace izosga::harness
