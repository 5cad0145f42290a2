#pragma once

#include <deque>
#include <random>
#include <stdexcept>
#include <utility>

#include "lyihdp/increment_model.hpp"
#include "lyihdp/network.hpp"

namespace lyihdp {

// Everything that parameterizes one learning loop. The in-struct defaults
// are the outer (angle-of-attack) loop values; lower_defaults() carries the
// inner (pitch-rate) loop values.
struct AgentConfig {
  double critic_lr = 0.1;
  double actor_lr = 5e-7;
  double gamma = 0.6;
  double forgetting = 0.99;
  int policy_iterations = 3;
  int hidden = 7;
  double error_weight = 1.0;
  double action_weight = 5e-6;
  double smoothness_weight = 9.3e-3;
  double lyapunov_weight = 0.0; // weight on the critic value at the predicted next error
  double critic_loss_threshold = 5e-5;
  int max_update_steps = 50;
  double action_limit = 60.0;   // physical bound on the emitted action
  double init_range = 0.1;      // network weight init half-range
  double rls_init_cov = 100.0;
  double model_g_init = 0.0;    // signed initial input sensitivity of the model
  double model_err_window = 10.0; // s, trailing window for the worst-case prediction error
  double eps_model = 0.01;      // acceptable one-step prediction-error bound
  double dt = 1e-3;             // control period, used to size the window

  static AgentConfig higher_defaults() { return {}; }
  static AgentConfig lower_defaults();

  void validate() const; // throws std::invalid_argument with a message naming the field
};

struct ActorLossParts {
  double cost = 0.0;     // predicted one-step cost c(e_next_pred, u)
  double gamma_v = 0.0;  // gamma * V(e_next_pred)
  double lambda_v = 0.0; // lambda * V(e_next_pred)
  double smooth = 0.0;   // rho * (u - u_prev)^2
  double total() const { return cost + gamma_v + lambda_v + smooth; }
};

// What the loop feeds the agent each control step. The agent's own command
// stream is the input channel of its incremental model; downstream dynamics
// (actuator, command filter, the other loop) are part of the plant it
// identifies.
struct AgentObservation {
  double x = 0.0;        // tracked physical state (alpha or q)
  double e = 0.0;        // tracking error at the current step
  double ref_next = 0.0; // reference value used for the next-error prediction
};

struct AgentStepResult {
  double action = 0.0;      // clamped to +/- action_limit
  double critic_loss = 0.0; // last critic pass loss
  ActorLossParts actor;     // loss parts evaluated at the executed action
  double value = 0.0;       // critic output at the current tracking error
  double model_f = 0.0;
  double model_g = 0.0;
  double model_pred_err = 0.0; // realized |prediction - observation| this step
  int critic_adam_steps = 0;   // bookkeeping for the per-step compute bound
  int actor_adam_steps = 0;
  int skipped_actor_steps = 0; // non-finite-gradient skips
};

// Thrown when a critic update goes non-finite; the episode driver converts
// this into a diagnosed abort.
struct AgentDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One online actor-critic loop: scalar tracking error in, scalar action out.
// The critic (abs output head) doubles as the Lyapunov function candidate;
// the actor (tanh head scaled by action_limit) is improved through the
// identified incremental model.
class Agent {
 public:
  Agent(const AgentConfig& cfg, std::mt19937& rng);

  // Full per-step cycle: identify the model on the realized transition,
  // alternate critic/actor improvement passes, then act.
  AgentStepResult step(const AgentObservation& obs);

  // Predicted one-step cost for this loop.
  double one_step_cost(double e_next_pred, double action) const;

  // One critic improvement pass on a realized transition. Returns the last
  // evaluated loss; `adam_steps`, when given, receives the step count.
  double critic_update(double e_t, double cost_t, double e_next,
                       int* adam_steps = nullptr);

  // Loss parts at a candidate action for the current observation context.
  ActorLossParts actor_loss(const AgentObservation& obs, double action) const;

  // Gradient of the composed actor loss (through the incremental model and
  // the frozen critic) with respect to every actor parameter, evaluated at
  // the current actor output for `obs`.
  std::vector<double> actor_loss_gradient(const AgentObservation& obs) const;

  // Alternating critic/actor improvement followed by action selection,
  // exactly what step() runs after the model identification.
  AgentStepResult actor_update(const AgentObservation& obs);

  double critic_value(double e) const;
  double policy(double e, double x) const; // clamped actor output

  const Mlp& critic() const { return critic_; }
  const Mlp& actor() const { return actor_; }
  Mlp& critic() { return critic_; }
  Mlp& actor() { return actor_; }
  const IncrementalModel& model() const { return model_; }
  IncrementalModel& model() { return model_; }
  const AgentConfig& config() const { return cfg_; }
  double worst_pred_err() const; // max realized prediction error in the window
  double prev_action() const { return u_prev_; }
  long steps_seen() const { return steps_seen_; }

 private:
  struct Prediction {
    double e_next = 0.0; // predicted next tracking error
    double de_du = 0.0;  // derivative of e_next wrt the action
  };
  Prediction predict_next_error(const AgentObservation& obs, double action) const;
  // Fills `grads` (actor parameter gradients) without allocating.
  void actor_gradient_into(const AgentObservation& obs, Mlp::Backward& grads) const;
  void actor_pass(const AgentObservation& obs, AgentStepResult& info);

  AgentConfig cfg_;
  Mlp critic_;
  Mlp actor_;
  AdamState critic_opt_;
  AdamState actor_opt_;
  IncrementalModel model_;

  long steps_seen_ = 0;
  double x_prev_ = 0.0;
  double x_prev2_ = 0.0;
  double u_prev_ = 0.0;  // action at t-1 (model input and smoothness anchor)
  double u_prev2_ = 0.0; // action at t-2
  double e_prev_ = 0.0;
  double cost_prev_ = 0.0;
  double pred_next_ = 0.0;
  bool have_pred_ = false;

  // Trailing-window maximum of realized prediction errors (monotonic deque).
  std::deque<std::pair<long, double>> err_window_;
  long err_index_ = 0;

  mutable Mlp::Backward scratch_;
};

} // namespace lyihdp
