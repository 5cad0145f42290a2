#pragma once

#include <array>

namespace lyihdp {

// Online local model of one control loop, identified from state and input
// increments by recursive least squares with exponential forgetting:
//
//   x[t+1] - x[t]  ~=  f_hat * (x[t] - x[t-1]) + g_hat * (u[t] - u[t-1])
//
// Scalar state, scalar input. The 2x2 covariance is kept symmetric positive
// definite; a floor reset guards against blow-up under poor excitation.
struct IncrementalModel {
  double f_hat = 0.0; // sensitivity to the previous state increment
  double g_hat = 0.0; // sensitivity to the previous input increment
  std::array<double, 4> cov{100.0, 0.0, 0.0, 100.0}; // row-major 2x2
  double forgetting = 0.99;  // in (0, 1]
  double init_cov = 100.0;   // diagonal used at construction and on reset
  double last_x = 0.0;       // most recent state seen by im_update
  double last_u = 0.0;       // most recent input seen by im_update
  int cov_resets = 0;

  double min_cov_eigenvalue() const;
};

IncrementalModel make_incremental_model(double forgetting, double init_cov,
                                        double g_init);

// One-step-ahead prediction from the increment form.
double im_predict(const IncrementalModel& m, double x_t, double x_prev,
                  double u_t, double u_prev);

// One RLS step on the regressor [x_t - x_prev, u_t - u_prev] with target
// x_next_observed - x_t. Throws std::runtime_error with diagnostic state if
// the covariance goes non-finite.
IncrementalModel im_update(IncrementalModel m, double x_next_observed,
                           double x_t, double x_prev, double u_t,
                           double u_prev);

} // namespace lyihdp
