#pragma once

#include <string>
#include <vector>

#include "izosga/optimizer.hpp"

namespace izosga::harness {

/// Column order of the per-replication trace file.
inline constexpr const char* kTraceHeader =
    "t,sumrate,sumrate_ma,wmmse_iters,gap_estimate,clamp_events,theta_norm";

/// 17 significant digits; round-trips every double.
std::string format_double(double v);

std::string trace_csv(const std::vector<IterateRecord>& trace);
void write_trace_csv(const std::string& path, const std::vector<IterateRecord>& trace);

/// Parsed trace row; gap is NaN when the column is empty.
struct TraceRow {
  long t = 0;
  double sumrate = 0.0;
  double sumrate_ma = 0.0;
  int wmmse_iters = 0;
  double gap_estimate = 0.0;
  long clamp_events = 0;
  double theta_norm = 0.0;
};

std::vector<TraceRow> read_trace_csv(const std::string& path);

void write_theta(const std::string& path, const RVec& theta);
RVec read_theta(const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace izosga::harness
