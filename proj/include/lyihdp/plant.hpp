#pragma once

#include <numbers>
#include <utility>

namespace lyihdp {

// Longitudinal rigid-body model. States are angle of attack (deg) and pitch
// rate (deg/s); the control is a fin deflection (deg). The aerodynamic
// polynomial fits are valid for |alpha| <= 20 deg.
struct PhysicalParams {
  double gravity = 9.815;          // m/s^2
  double weight = 204.3;           // kg
  double speed = 947.715;          // m/s
  double pitch_inertia = 247.438;  // kg*m^2
  double rad_to_deg = 180.0 / std::numbers::pi;
  double dyn_pressure = 29969.861; // kg/m^2
  double ref_area = 0.041;         // m^2
  double ref_diameter = 0.229;     // m
  double b_z = -0.034;             // normal-force effectiveness, per deg of deflection
  double b_m = -0.206;             // pitch-moment effectiveness, per deg of deflection

  // Lumped gain multiplying the normal-force bracket in alpha_dot.
  double alpha_gain() const {
    return rad_to_deg * gravity * dyn_pressure * ref_area / (weight * speed);
  }
  // Lumped gain multiplying the pitch-moment bracket in q_dot.
  double q_gain() const {
    return rad_to_deg * dyn_pressure * ref_area * ref_diameter / pitch_inertia;
  }

  // Throws std::invalid_argument on non-physical values.
  void validate() const;
};

inline constexpr double kAeroFitRangeDeg = 20.0;

struct PlantState {
  double alpha = 0.0; // deg
  double q = 0.0;     // deg/s
  double t = 0.0;     // s

  // True when alpha is outside the polynomial fit range. Logged, never fatal.
  bool out_of_fit_range() const {
    return alpha > kAeroFitRangeDeg || alpha < -kAeroFitRangeDeg;
  }
};

// First-order fin servo with rate and position limits.
struct ActuatorState {
  double delta = 0.0;           // deg, actual deflection
  double time_constant = 0.005; // s
  double rate_limit = 600.0;    // deg/s
  double position_limit = 20.0; // deg
};

// Normal-force coefficient polynomial, alpha in degrees.
double aero_phi_z(double alpha);
// Pitch-moment coefficient polynomial, alpha in degrees.
double aero_phi_m(double alpha);

struct PlantRates {
  double alpha_dot = 0.0; // deg/s
  double q_dot = 0.0;     // deg/s^2
};

// Continuous-time state derivatives at the given deflection. The cosine term
// takes alpha converted to radians; everything else stays in degrees.
PlantRates plant_derivatives(const PlantState& state, double delta,
                             const PhysicalParams& params);

// Advances the servo one Euler step: position-clamp the command, rate-limit
// the tracking rate, then position-clamp the result.
ActuatorState actuator_step(ActuatorState act, double command, double dt);

// One fixed-step update of the whole airframe: servo first, then the plant
// integrates with the fresh deflection. Time advances by dt.
std::pair<PlantState, ActuatorState> integrate_step(const PlantState& state,
                                                    const ActuatorState& act,
                                                    double command, double dt,
                                                    const PhysicalParams& params);

} // namespace lyihdp
