#include "izosga/harness/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "izosga/harness/stats.hpp"

namespace izosga::harness {

std::vector<double> moving_average(const std::vector<double>& values, int window) {
  if (window < 1) throw ConfigError("moving-average window must be >= 1");
  std::vector<double> out(values.size());
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t n = 1; n <= values.size(); ++n) {
    const std::size_t len = std::min(n, w);
    double sum = 0.0;
    for (std::size_t i = n - len; i < n; ++i) sum += values[i];
    out[n - 1] = sum / static_cast<double>(len);
  }
  return out;
}

std::vector<SummaryRow> aggregate(const std::vector<std::vector<TraceRow>>& traces, int window) {
  if (traces.empty()) throw ConfigError("aggregate needs at least one replication");
  const std::size_t len = traces.front().size();
  std::vector<std::vector<double>> smoothed;
  for (const auto& trace : traces) {
    if (trace.size() != len) throw ConfigError("aggregate: replication traces differ in length");
    std::vector<double> raw;
    raw.reserve(len);
    for (const TraceRow& r : trace) raw.push_back(r.sumrate);
    smoothed.push_back(moving_average(raw, window));
  }
  std::vector<SummaryRow> rows(len);
  std::vector<double> column(traces.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t r = 0; r < traces.size(); ++r) column[r] = smoothed[r][i];
    rows[i].t = traces.front()[i].t;
    rows[i].mean = mean(column);
    rows[i].stderr_ = standard_error(column);
    rows[i].replications = static_cast<int>(traces.size());
  }
  return rows;
}

std::vector<SummaryRow> aggregate_files(const std::vector<std::string>& paths, int window) {
  std::vector<std::vector<TraceRow>> traces;
  for (const auto& p : paths) traces.push_back(read_trace_csv(p));
  return aggregate(traces, window);
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "t,mean_sumrate_ma,stderr,replications\n";
  for (const SummaryRow& r : rows)
    out += std::to_string(r.t) + ',' + format_double(r.mean) + ',' + format_double(r.stderr_) + ',' +
           std::to_string(r.replications) + '\n';
  return out;
}

std::string line_chart_svg(const std::string& title, const std::string& y_label,
                           const std::vector<PlotSeries>& series) {
  constexpr double kW = 800, kH = 500, kLeft = 70, kRight = 190, kTop = 40, kBottom = 50;
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, s.x[i]); x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]); y1 = std::max(y1, s.y[i]);
    }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad; y1 += pad;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); };
  auto py = [&](double y) { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); };
  char buf[256];
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
                    "font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"24\" font-size=\"15\">%s</text>\n", kLeft, title.c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
                kLeft, kTop, kW - kLeft - kRight, kH - kTop - kBottom);
  svg += buf;
  for (int i = 0; i <= 4; ++i) {
    const double yv = y0 + (y1 - y0) * i / 4.0, xv = x0 + (x1 - x0) * i / 4.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.2f</text>\n",
                  kLeft - 6, py(yv) + 4, yv);
    svg += buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%.0f</text>\n",
                  px(xv), kH - kBottom + 18, xv);
    svg += buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">outer iteration</text>\n",
                kLeft + (kW - kLeft - kRight) / 2, kH - 10);
  svg += buf;
  std::snprintf(buf, sizeof buf,
                "<text transform=\"translate(16,%g) rotate(-90)\" text-anchor=\"middle\">%s</text>\n",
                kTop + (kH - kTop - kBottom) / 2, y_label.c_str());
  svg += buf;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % 10];
    svg += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" + std::string(color) + "\" points=\"";
    const std::size_t stride = std::max<std::size_t>(1, series[s].x.size() / 800);
    for (std::size_t i = 0; i < series[s].x.size(); i += stride) {
      std::snprintf(buf, sizeof buf, "%.1f,%.1f ", px(series[s].x[i]), py(series[s].y[i]));
      svg += buf;
    }
    svg += "\"/>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(s);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" stroke-width=\"2\"/>"
                  "<text x=\"%g\" y=\"%g\">%s</text>\n",
                  kW - kRight + 10, ly, kW - kRight + 30, ly, color, kW - kRight + 35, ly + 4,
                  series[s].name.c_str());
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace izosga::harness
