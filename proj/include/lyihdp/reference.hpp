#pragma once

namespace lyihdp {

struct ReferencePoint {
  double alpha_ref = 0.0;     // deg
  double alpha_ref_dot = 0.0; // deg/s, analytic derivative
};

// Sinusoidal angle-of-attack reference A*sin(2*pi*t/T) and its analytic
// time derivative.
ReferencePoint alpha_reference(double t, double amplitude, double period);

// Discrete first-order lag used to smooth the pitch-rate command.
struct LowPassState {
  double y = 0.0;              // current output
  double time_constant = 0.05; // s
};

LowPassState lowpass_step(LowPassState f, double input, double dt);

} // namespace lyihdp
