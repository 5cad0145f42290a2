#include "lyihdp/lyapunov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace lyihdp {

void LyapunovBounds::validate() const {
  if (!(l_v >= 0.0 && l_f >= 0.0 && l_pi >= 0.0 && model_err >= 0.0)) {
    throw std::invalid_argument("Lyapunov constants must be >= 0");
  }
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
}

double l_delta_v(const LyapunovBounds& b) {
  if (b.l_v < 0.0 || b.l_f < 0.0 || b.l_pi < 0.0) {
    throw std::invalid_argument("l_delta_v: negative Lipschitz constant");
  }
  return b.l_v * b.l_f * (b.l_pi + 1.0) + b.l_v;
}

std::vector<double> discretize_state(const std::vector<double>& x, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("discretize_state: tau must be > 0");
  if (x.empty()) return {};
  const double spacing = 2.0 * tau / static_cast<double>(x.size());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = spacing * std::round(x[i] / spacing);
  }
  return out;
}

namespace {

// Copies the grid into the report up front so the compute loop below stays
// allocation-free (heap traffic inside the parallel region would serialize
// the threads).
DecreaseReport prepare_report(const std::vector<std::vector<double>>& grid,
                              const LyapunovBounds& b) {
  if (grid.empty()) throw std::invalid_argument("decrease check: empty grid");
  b.validate();
  DecreaseReport report;
  report.points.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) report.points[i].state = grid[i];
  return report;
}

// Value evaluations for one prepared point; returns false on non-finite.
bool evaluate_point(DecreasePoint& p, const ScalarField& v,
                    const ScalarField& next_value_bound,
                    const LyapunovBounds& b, double margin_term) {
  p.v = v(p.state);
  p.u_n = next_value_bound(p.state);
  if (!std::isfinite(p.v) || !std::isfinite(p.u_n)) return false;
  p.margin = p.v - margin_term - p.u_n - b.l_v * b.model_err;
  p.satisfied = p.margin > 0.0;
  return true;
}

void finish_report(DecreaseReport& report, bool bad_value) {
  if (bad_value) {
    throw std::invalid_argument("decrease check: non-finite value at grid point");
  }
  for (const DecreasePoint& p : report.points) {
    if (p.satisfied) ++report.satisfied_count;
  }
}

} // namespace

DecreaseReport practical_decrease_check_serial(
    const std::vector<std::vector<double>>& grid, const ScalarField& v,
    const ScalarField& next_value_bound, const LyapunovBounds& b) {
  DecreaseReport report = prepare_report(grid, b);
  const double margin_term = l_delta_v(b) * b.tau;
  bool bad_value = false;
  for (DecreasePoint& p : report.points) {
    if (!evaluate_point(p, v, next_value_bound, b, margin_term)) {
      bad_value = true;
    }
  }
  finish_report(report, bad_value);
  return report;
}

DecreaseReport practical_decrease_check(
    const std::vector<std::vector<double>>& grid, const ScalarField& v,
    const ScalarField& next_value_bound, const LyapunovBounds& b) {
  DecreaseReport report = prepare_report(grid, b);
  const double margin_term = l_delta_v(b) * b.tau;
  bool bad_value = false;
  const auto n = static_cast<long long>(report.points.size());
#pragma omp parallel for schedule(static) reduction(|| : bad_value)
  for (long long i = 0; i < n; ++i) {
    if (!evaluate_point(report.points[i], v, next_value_bound, b, margin_term)) {
      bad_value = true;
    }
  }
  finish_report(report, bad_value);
  return report;
}

std::vector<std::vector<double>> make_grid_1d(double lo, double hi, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("make_grid_1d: tau must be > 0");
  if (!(hi >= lo)) throw std::invalid_argument("make_grid_1d: hi < lo");
  const double spacing = 2.0 * tau;
  std::vector<std::vector<double>> grid;
  const long first = std::lround(std::ceil(lo / spacing - 1e-9));
  const long last = std::lround(std::floor(hi / spacing + 1e-9));
  grid.reserve(static_cast<std::size_t>(std::max(0L, last - first + 1)));
  for (long k = first; k <= last; ++k) {
    grid.push_back({spacing * static_cast<double>(k)});
  }
  return grid;
}

double lyapunov_increment(double v_t, double v_next) { return v_next - v_t; }

double equilibrium_residual(double alpha_ref, double alpha_ref_dot, double q,
                            double delta, const PhysicalParams& params) {
  const double alpha_rad = alpha_ref / params.rad_to_deg;
  return params.alpha_gain() * std::cos(alpha_rad) *
             (aero_phi_z(alpha_ref) + params.b_z * delta) +
         q - alpha_ref_dot;
}

double estimate_plant_lipschitz(const PhysicalParams& params, double dt,
                                std::mt19937& rng, int samples) {
  std::uniform_real_distribution<double> ua(-20.0, 20.0);
  std::uniform_real_distribution<double> uq(-60.0, 60.0);
  std::uniform_real_distribution<double> ud(-20.0, 20.0);
  const double h = 1e-4;
  double l_max = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double a = ua(rng), q = uq(rng), d = ud(rng);
    // One Euler step of (alpha, q) as a map of (alpha, q, delta).
    const auto step = [&](double aa, double qq, double dd) {
      const PlantRates r = plant_derivatives({aa, qq, 0.0}, dd, params);
      return std::array<double, 2>{aa + r.alpha_dot * dt, qq + r.q_dot * dt};
    };
    // 1-norm operator bound: max column sum of |Jacobian|.
    double col_sum_max = 0.0;
    const std::array<std::array<double, 3>, 3> probes{{{h, 0, 0}, {0, h, 0}, {0, 0, h}}};
    for (const auto& pr : probes) {
      const auto fp = step(a + pr[0], q + pr[1], d + pr[2]);
      const auto fm = step(a - pr[0], q - pr[1], d - pr[2]);
      const double col =
          (std::abs(fp[0] - fm[0]) + std::abs(fp[1] - fm[1])) / (2.0 * h);
      col_sum_max = std::max(col_sum_max, col);
    }
    l_max = std::max(l_max, col_sum_max);
  }
  return l_max;
}

double estimate_field_lipschitz(const ScalarField& f, double lo, double hi,
                                std::mt19937& rng, int samples) {
  std::uniform_real_distribution<double> ux(lo, hi);
  const double h = 1e-5 * std::max(1.0, std::abs(hi - lo));
  double l_max = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double x = ux(rng);
    const double fp = f({x + h});
    const double fm = f({x - h});
    l_max = std::max(l_max, std::abs(fp - fm) / (2.0 * h));
  }
  return l_max;
}

} // namespace lyihdp
