#pragma once

#include <functional>
#include <random>
#include <vector>

#include "lyihdp/plant.hpp"

namespace lyihdp {

// Constants appearing in the discretization-aware decrease condition. The
// margin that converts grid resolution into value-function units is
// l_delta_v(b) * tau; model_err is a deterministic bound on the one-step
// state prediction error of the identified model.
struct LyapunovBounds {
  double l_v = 0.0;       // Lipschitz constant of the value function
  double l_f = 0.0;       // Lipschitz constant of the one-step map (1-norm)
  double l_pi = 0.0;      // Lipschitz constant of the policy
  double tau = 1e-3;      // state-space discretization resolution (1-norm)
  double model_err = 0.0; // worst-case one-step prediction error bound

  void validate() const;
};

// L_v * L_f * (L_pi + 1) + L_v.
double l_delta_v(const LyapunovBounds& b);

// Nearest point of the uniform grid whose 1-norm rounding error is at most
// tau: per-axis spacing 2*tau/n with nearest-multiple rounding.
std::vector<double> discretize_state(const std::vector<double>& x, double tau);

using ScalarField = std::function<double(const std::vector<double>&)>;

struct DecreasePoint {
  std::vector<double> state;
  double v = 0.0;       // value at the grid point
  double u_n = 0.0;     // upper bound on the value at the predicted next state
  double margin = 0.0;  // v - l_delta_v*tau - u_n - l_v*model_err
  bool satisfied = false;
};

struct DecreaseReport {
  std::vector<DecreasePoint> points;
  std::size_t satisfied_count = 0;
  double satisfied_fraction() const {
    return points.empty() ? 0.0
                          : static_cast<double>(satisfied_count) /
                                static_cast<double>(points.size());
  }
};

// Checks, at every grid point, whether the practical decrease condition
//   u_n(x) + l_v * model_err < v(x) - l_delta_v * tau
// holds. The serial kernel is the reference; the parallel kernel splits the
// grid across OpenMP threads and produces identical results.
DecreaseReport practical_decrease_check_serial(
    const std::vector<std::vector<double>>& grid, const ScalarField& v,
    const ScalarField& next_value_bound, const LyapunovBounds& b);

DecreaseReport practical_decrease_check(
    const std::vector<std::vector<double>>& grid, const ScalarField& v,
    const ScalarField& next_value_bound, const LyapunovBounds& b);

// Uniform 1-D grid over [lo, hi] with the spacing implied by tau.
std::vector<std::vector<double>> make_grid_1d(double lo, double hi, double tau);

// Difference of consecutive Lyapunov candidate values.
double lyapunov_increment(double v_t, double v_next);

// Rate of the angle-of-attack tracking error evaluated at zero error. A
// nonzero value certifies that zero tracking error is not an equilibrium of
// the closed loop at that instant.
double equilibrium_residual(double alpha_ref, double alpha_ref_dot, double q,
                            double delta, const PhysicalParams& params);

// Sampled estimate of the 1-norm Lipschitz constant of the one-Euler-step
// plant map (alpha, q, delta) -> (alpha', q') over the stated operating box.
double estimate_plant_lipschitz(const PhysicalParams& params, double dt,
                                std::mt19937& rng, int samples = 2000);

// Sampled estimate of max |d out/d in|_1 of a scalar field over [lo, hi],
// by central finite differences.
double estimate_field_lipschitz(const ScalarField& f, double lo, double hi,
                                std::mt19937& rng, int samples = 2000);

} // namespace lyihdp
