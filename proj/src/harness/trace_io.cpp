#include "izosga/harness/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/algorithm/string.hpp>

namespace izosga::harness {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trace_csv(const std::vector<IterateRecord>& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const IterateRecord& r : trace) {
    out += std::to_string(r.t);
    out += ',' + format_double(r.sumrate);
    out += ',' + format_double(r.sumrate_ma);
    out += ',' + std::to_string(r.wmmse_iters);
    out += ',';
    if (r.gap_estimate) out += format_double(*r.gap_estimate);
    out += ',' + std::to_string(r.clamp_events);
    out += ',' + format_double(r.theta_norm);
    out += '\n';
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  os << text;
  if (!os) throw ConfigError("write failed for '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_trace_csv(const std::string& path, const std::vector<IterateRecord>& trace) {
  write_text(path, trace_csv(trace));
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::istringstream is(read_text(path));
  std::string line;
  if (!std::getline(is, line) || line != kTraceHeader)
    throw ConfigError("'" + path + "' is not a trace file (unexpected header)");
  std::vector<TraceRow> rows;
  std::vector<std::string> cols;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    boost::algorithm::split(cols, line, boost::algorithm::is_any_of(","));
    if (cols.size() != 7) throw ConfigError("malformed trace row in '" + path + "'");
    TraceRow r;
    try {
      r.t = std::stol(cols[0]);
      r.sumrate = std::stod(cols[1]);
      r.sumrate_ma = std::stod(cols[2]);
      r.wmmse_iters = std::stoi(cols[3]);
      r.gap_estimate = cols[4].empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(cols[4]);
      r.clamp_events = std::stol(cols[5]);
      r.theta_norm = std::stod(cols[6]);
    } catch (const std::exception&) {
      throw ConfigError("malformed trace row in '" + path + "'");
    }
    rows.push_back(r);
  }
  return rows;
}

void write_theta(const std::string& path, const RVec& theta) {
  std::string out;
  for (Index i = 0; i < theta.size(); ++i) out += format_double(theta[i]) + '\n';
  write_text(path, out);
}

RVec read_theta(const std::string& path) {
  std::istringstream is(read_text(path));
  std::vector<double> values;
  std::string line;
  while (std::getline(is, line)) {
    boost::algorithm::trim(line);
    if (line.empty()) continue;
    try {
      values.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw ConfigError("malformed theta file '" + path + "'");
    }
  }
  return Eigen::Map<const RVec>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace izosga::harness
