#pragma once

#include <string>
#include <vector>

#include "lyihdp/cascade.hpp"

namespace lyihdp {

struct Window {
  double start = 0.0; // s, inclusive
  double end = 0.0;   // s, exclusive
};

struct WindowMetrics {
  Window window;
  double rms_e_alpha = 0.0;    // deg
  double rms_e_q = 0.0;        // deg/s
  double mean_dv1 = 0.0;
  double mean_dv2 = 0.0;
  double frac_dv1_nonpos = 0.0;
  double frac_dv2_nonpos = 0.0;
  double peak_delta = 0.0;     // deg, max |delta|
};

// Windows discussed by the comparison workflow, including the learning-phase
// and settled-phase slices used by the acceptance checks.
std::vector<Window> default_windows();

// Per-window RMS errors, Lyapunov-increment statistics, and peak deflection.
// Throws std::invalid_argument for an empty log or a window containing no
// rows.
std::vector<WindowMetrics> compute_metrics(const std::vector<StepLog>& log,
                                           const std::vector<Window>& windows);

// metrics.csv rendering (one row per window).
std::string metrics_csv_text(const std::vector<WindowMetrics>& metrics);
void emit_metrics_csv(const std::vector<WindowMetrics>& metrics,
                      const std::string& path);

} // namespace lyihdp
