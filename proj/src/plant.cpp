#include "lyihdp/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lyihdp {

void PhysicalParams::validate() const {
  const bool positive = gravity > 0.0 && weight > 0.0 && speed > 0.0 &&
                        pitch_inertia > 0.0 && dyn_pressure > 0.0 &&
                        ref_area > 0.0 && ref_diameter > 0.0;
  if (!positive) {
    throw std::invalid_argument("physical parameters must be strictly positive");
  }
  if (rad_to_deg != 180.0 / std::numbers::pi) {
    throw std::invalid_argument("rad_to_deg must equal 180/pi");
  }
}

double aero_phi_z(double alpha) {
  if (std::isnan(alpha)) throw std::invalid_argument("aero_phi_z: NaN input");
  return 0.000103 * alpha * alpha * alpha - 0.00945 * alpha * std::abs(alpha) -
         0.170 * alpha;
}

double aero_phi_m(double alpha) {
  if (std::isnan(alpha)) throw std::invalid_argument("aero_phi_m: NaN input");
  return 0.000215 * alpha * alpha * alpha - 0.0195 * alpha * std::abs(alpha) -
         0.051 * alpha;
}

PlantRates plant_derivatives(const PlantState& state, double delta,
                             const PhysicalParams& params) {
  if (!std::isfinite(state.alpha) || !std::isfinite(state.q) ||
      !std::isfinite(delta)) {
    throw std::invalid_argument("plant_derivatives: non-finite input");
  }
  const double alpha_rad = state.alpha / params.rad_to_deg;
  PlantRates rates;
  rates.alpha_dot = params.alpha_gain() * std::cos(alpha_rad) *
                        (aero_phi_z(state.alpha) + params.b_z * delta) +
                    state.q;
  rates.q_dot = params.q_gain() * (aero_phi_m(state.alpha) + params.b_m * delta);
  return rates;
}

ActuatorState actuator_step(ActuatorState act, double command, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("actuator_step: dt must be > 0");
  if (!std::isfinite(command)) {
    throw std::invalid_argument("actuator_step: non-finite command");
  }
  const double target = std::clamp(command, -act.position_limit, act.position_limit);
  double rate = (target - act.delta) / act.time_constant;
  rate = std::clamp(rate, -act.rate_limit, act.rate_limit);
  act.delta = std::clamp(act.delta + rate * dt, -act.position_limit, act.position_limit);
  return act;
}

std::pair<PlantState, ActuatorState> integrate_step(const PlantState& state,
                                                    const ActuatorState& act,
                                                    double command, double dt,
                                                    const PhysicalParams& params) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_step: dt must be > 0");
  ActuatorState next_act = actuator_step(act, command, dt);
  const PlantRates rates = plant_derivatives(state, next_act.delta, params);
  PlantState next = state;
  next.alpha += rates.alpha_dot * dt;
  next.q += rates.q_dot * dt;
  next.t += dt;
  return {next, next_act};
}

} // namespace lyihdp
