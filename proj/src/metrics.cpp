#include "lyihdp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lyihdp {

std::vector<Window> default_windows() {
  return {{0.0, 10.0}, {5.0, 8.0},   {5.0, 10.0}, {15.0, 16.0},
          {20.0, 40.0}, {25.0, 26.0}, {30.0, 40.0}};
}

std::vector<WindowMetrics> compute_metrics(const std::vector<StepLog>& log,
                                           const std::vector<Window>& windows) {
  if (log.empty()) throw std::invalid_argument("compute_metrics: empty log");
  std::vector<WindowMetrics> out;
  out.reserve(windows.size());
  for (const Window& w : windows) {
    if (!(w.end > w.start)) {
      throw std::invalid_argument("compute_metrics: window end must exceed start");
    }
    WindowMetrics m;
    m.window = w;
    double sum_ea2 = 0.0, sum_eq2 = 0.0, sum_dv1 = 0.0, sum_dv2 = 0.0;
    long n = 0, n_dv1_nonpos = 0, n_dv2_nonpos = 0;
    for (const StepLog& row : log) {
      if (row.t < w.start || row.t >= w.end) continue;
      ++n;
      sum_ea2 += row.e_alpha * row.e_alpha;
      sum_eq2 += row.e_q * row.e_q;
      sum_dv1 += row.dv1;
      sum_dv2 += row.dv2;
      if (row.dv1 <= 0.0) ++n_dv1_nonpos;
      if (row.dv2 <= 0.0) ++n_dv2_nonpos;
      m.peak_delta = std::max(m.peak_delta, std::abs(row.delta));
    }
    if (n == 0) {
      throw std::invalid_argument("compute_metrics: window contains no samples");
    }
    const double dn = static_cast<double>(n);
    m.rms_e_alpha = std::sqrt(sum_ea2 / dn);
    m.rms_e_q = std::sqrt(sum_eq2 / dn);
    m.mean_dv1 = sum_dv1 / dn;
    m.mean_dv2 = sum_dv2 / dn;
    m.frac_dv1_nonpos = static_cast<double>(n_dv1_nonpos) / dn;
    m.frac_dv2_nonpos = static_cast<double>(n_dv2_nonpos) / dn;
    out.push_back(m);
  }
  return out;
}

std::string metrics_csv_text(const std::vector<WindowMetrics>& metrics) {
  std::string out =
      "window_start,window_end,rms_e_alpha,rms_e_q,mean_dv1,mean_dv2,"
      "frac_dv1_nonpos,frac_dv2_nonpos,peak_delta\n";
  char buf[256];
  for (const WindowMetrics& m : metrics) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  m.window.start, m.window.end, m.rms_e_alpha, m.rms_e_q,
                  m.mean_dv1, m.mean_dv2, m.frac_dv1_nonpos, m.frac_dv2_nonpos,
                  m.peak_delta);
    out += buf;
  }
  return out;
}

void emit_metrics_csv(const std::vector<WindowMetrics>& metrics,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_metrics_csv: cannot open " + path);
  out << metrics_csv_text(metrics);
  if (!out) throw std::runtime_error("emit_metrics_csv: write failed " + path);
}

} // namespace lyihdp
