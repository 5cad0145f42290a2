#pragma once

#include <random>
#include <string>
#include <vector>

#include "lyihdp/increment_model.hpp"
#include "lyihdp/network.hpp"
#include "lyihdp/plant.hpp"

namespace lyihdp {

// Independent cross-checks used by the test suite and the `selftest`
// subcommand. Each oracle avoids the code path it is checking: the RK4
// integrator never calls integrate_step, the gradient check uses only
// forward evaluations, and the RLS driver generates its data from a known
// closed-form system.

// Classical fixed-step RK4 on the airframe ODE at constant deflection.
PlantState rk4_rollout(PlantState state, double delta,
                       const PhysicalParams& params, double dt, int steps);

// Fin-trim state for a constant deflection: q_dot = 0 solved by bisection on
// the moment polynomial, then q chosen to zero alpha_dot.
PlantState trim_state(double delta, const PhysicalParams& params);

// Maximum relative error between analytic gradients and central finite
// differences over every parameter and input of a randomly seeded network.
// For the abs head, draws are redone while the pre-head value sits on the
// kink (|y| < 1e-3) where the subgradient is not comparable.
double max_gradient_rel_error(int input_dim, int hidden_dim,
                              OutputActivation activation, std::mt19937& rng,
                              double fd_step = 1e-6);

// Drives an RLS model with data from x[t+1]-x[t] = f_true*(x[t]-x[t-1]) +
// g_true*(u[t]-u[t-1]) under a two-tone persistently exciting input.
// Returns the model after `steps` updates.
IncrementalModel run_synthetic_rls(IncrementalModel m, double f_true,
                                   double g_true, int steps);

// One selftest line: name, pass flag, and a short detail string.
struct SelftestCase {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCase> cases;
  double wall_seconds = 0.0;
  bool all_pass() const {
    for (const auto& c : cases)
      if (!c.pass) return false;
    return true;
  }
};

// Runs the full oracle battery: gradient checks for every head in use, the
// Euler-vs-RK4 rollout comparison, RLS recovery on the synthetic system, and
// the closed-form decrease-margin constant.
SelftestReport run_selftest();

} // namespace lyihdp
