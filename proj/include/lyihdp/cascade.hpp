#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lyihdp/agent.hpp"
#include "lyihdp/plant.hpp"
#include "lyihdp/reference.hpp"

namespace lyihdp {

// One control step of the episode, in CSV column order.
struct StepLog {
  double t = 0.0;
  double alpha_ref = 0.0;
  double alpha = 0.0;
  double e_alpha = 0.0;
  double q_ref_raw = 0.0;
  double q_ref_filtered = 0.0;
  double q = 0.0;
  double e_q = 0.0;
  double delta_cmd = 0.0;
  double delta = 0.0;
  double v1 = 0.0;
  double dv1 = 0.0;
  double v2 = 0.0;
  double dv2 = 0.0;
  double critic_loss1 = 0.0;
  double actor_loss1 = 0.0;
  double actor_cost1 = 0.0;
  double actor_gamma_v1 = 0.0;
  double actor_lambda_v1 = 0.0;
  double actor_smooth1 = 0.0;
  double critic_loss2 = 0.0;
  double actor_loss2 = 0.0;
  double actor_cost2 = 0.0;
  double actor_gamma_v2 = 0.0;
  double actor_lambda_v2 = 0.0;
  double actor_smooth2 = 0.0;
  double model_f1 = 0.0;
  double model_g1 = 0.0;
  double model_err1 = 0.0;
  double model_f2 = 0.0;
  double model_g2 = 0.0;
  double model_err2 = 0.0;
};

struct ReferenceSettings {
  double amplitude = 10.0; // deg
  double period = 10.0;    // s
};

struct EpisodeConfig {
  double duration = 40.0; // s
  double dt = 1e-3;       // s, shared sampling and control period
  unsigned seed = 1;
  PhysicalParams plant;
  ActuatorState actuator; // limits and time constant; delta starts at 0
  ReferenceSettings reference;
  double filter_time_constant = 0.05; // s
  // Angle-of-attack loop, emits the raw pitch-rate command.
  AgentConfig higher = AgentConfig::higher_defaults();
  // Pitch-rate loop, emits the fin command.
  AgentConfig lower = AgentConfig::lower_defaults();

  int step_count() const;
  void validate() const; // throws std::invalid_argument
  // Fills derived per-agent fields (dt, signed model input-sensitivity init).
  void finalize();
};

inline constexpr double kAlphaGuardDeg = 60.0;

struct EpisodeResult {
  std::vector<StepLog> log;
  bool diverged = false;
  std::string failure_reason;
  long out_of_fit_range_steps = 0;
  double wall_seconds = 0.0;
  // Final learner state, for the weights dump and the decrease-check CLI.
  std::optional<Agent> higher;
  std::optional<Agent> lower;
  bool completed() const { return !diverged; }
};

// Runs one full online-learning episode. Never throws on divergence; the
// guard converts blow-ups into a partial log plus a failure reason.
EpisodeResult run_episode(const EpisodeConfig& cfg);

// Runs independent episodes, optionally across OpenMP threads. Results come
// back in input order regardless of scheduling.
std::vector<EpisodeResult> run_batch(const std::vector<EpisodeConfig>& configs,
                                     bool parallel);

struct ComparisonVariant {
  std::string name;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

struct ComparisonEntry {
  ComparisonVariant variant;
  EpisodeResult result;
};

// Same seed and reference for every variant; only the Lyapunov-loss weights
// differ. Variant failures are recorded, not thrown.
std::vector<ComparisonEntry> run_comparison(
    const EpisodeConfig& base, const std::vector<ComparisonVariant>& variants,
    bool parallel = true);

} // namespace lyihdp
