#pragma once

#include <string>

#include "lyihdp/cascade.hpp"

namespace lyihdp {

// Everything the decrease-condition checker needs about one trained loop.
struct LoopSnapshot {
  Mlp critic;
  Mlp actor;
  double action_limit = 0.0;
  double model_f = 0.0;
  double model_g = 0.0;
  double model_err = 0.0; // trailing-window worst-case prediction error
};

struct WeightsSnapshot {
  double dt = 1e-3;
  LoopSnapshot higher;
  LoopSnapshot lower;
};

WeightsSnapshot snapshot_from_result(const EpisodeResult& result, double dt);

// JSON round-trip; doubles are preserved exactly.
void save_weights(const WeightsSnapshot& w, const std::string& path);
WeightsSnapshot load_weights(const std::string& path);

} // namespace lyihdp
