#include "lyihdp/reference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lyihdp {

ReferencePoint alpha_reference(double t, double amplitude, double period) {
  if (!(period > 0.0)) {
    throw std::invalid_argument("alpha_reference: period must be > 0");
  }
  const double omega = 2.0 * std::numbers::pi / period;
  return {amplitude * std::sin(omega * t), amplitude * omega * std::cos(omega * t)};
}

LowPassState lowpass_step(LowPassState f, double input, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("lowpass_step: dt must be > 0");
  if (!(f.time_constant > 0.0)) {
    throw std::invalid_argument("lowpass_step: time constant must be > 0");
  }
  f.y += (dt / f.time_constant) * (input - f.y);
  return f;
}

} // namespace lyihdp
