#pragma once

#include <string>
#include <vector>

#include "izosga/harness/trace_io.hpp"

namespace izosga::harness {

struct SummaryRow {
  long t = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  int replications = 0;
};

/// Trailing moving average of `values` with the given window (shorter at the start).
std::vector<double> moving_average(const std::vector<double>& values, int window);

/// Per-iteration mean and standard error across replications of the windowed
/// moving-average sumrate. Throws ConfigError on mismatched trace lengths.
std::vector<SummaryRow> aggregate(const std::vector<std::vector<TraceRow>>& traces, int window);
std::vector<SummaryRow> aggregate_files(const std::vector<std::string>& paths, int window);

std::string summary_csv(const std::vector<SummaryRow>& rows);

/// Static line chart; one polyline per series.
struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};
std::string line_chart_svg(const std::string& title, const std::string& y_label,
                           const std::vector<PlotSeries>& series);

}  // namespace izosga::harness
