#include "lyihdp/agent.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace lyihdp {

AgentConfig AgentConfig::lower_defaults() {
  AgentConfig cfg;
  cfg.actor_lr = 1e-7;
  cfg.action_weight = 1e-5;
  cfg.smoothness_weight = 1e-5;
  cfg.critic_loss_threshold = 1e-4;
  cfg.action_limit = 20.0;
  return cfg;
}

void AgentConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gamma out of range (0,1)");
  }
  if (!(critic_lr > 0.0)) throw std::invalid_argument("critic_lr must be > 0");
  if (!(actor_lr > 0.0)) throw std::invalid_argument("actor_lr must be > 0");
  if (!(forgetting > 0.0 && forgetting <= 1.0)) {
    throw std::invalid_argument("forgetting out of range (0,1]");
  }
  if (policy_iterations < 1) {
    throw std::invalid_argument("policy_iterations must be >= 1");
  }
  if (max_update_steps < 1) {
    throw std::invalid_argument("max_update_steps must be >= 1");
  }
  if (hidden < 1) throw std::invalid_argument("hidden must be >= 1");
  if (!(error_weight >= 0.0 && action_weight >= 0.0 &&
        smoothness_weight >= 0.0 && lyapunov_weight >= 0.0)) {
    throw std::invalid_argument("loss weights must be >= 0");
  }
  if (!(critic_loss_threshold > 0.0)) {
    throw std::invalid_argument("critic_loss_threshold must be > 0");
  }
  if (!(action_limit > 0.0)) throw std::invalid_argument("action_limit must be > 0");
  if (!(init_range > 0.0)) throw std::invalid_argument("init_range must be > 0");
  if (!(rls_init_cov > 0.0)) throw std::invalid_argument("rls_init_cov must be > 0");
  if (!(model_err_window > 0.0)) {
    throw std::invalid_argument("model_err_window must be > 0");
  }
  if (!(eps_model > 0.0)) throw std::invalid_argument("eps_model must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
}

Agent::Agent(const AgentConfig& cfg, std::mt19937& rng) : cfg_(cfg) {
  cfg_.validate();
  critic_ = make_mlp(1, cfg_.hidden, OutputActivation::Abs, rng, cfg_.init_range);
  actor_ = make_mlp(2, cfg_.hidden, OutputActivation::Tanh, rng, cfg_.init_range);
  critic_opt_ = make_adam_state(critic_.param_count());
  actor_opt_ = make_adam_state(actor_.param_count());
  model_ = make_incremental_model(cfg_.forgetting, cfg_.rls_init_cov,
                                  cfg_.model_g_init);
}

double Agent::one_step_cost(double e_next_pred, double action) const {
  if (!std::isfinite(e_next_pred) || !std::isfinite(action)) {
    throw std::invalid_argument("one_step_cost: non-finite input");
  }
  return cfg_.error_weight * e_next_pred * e_next_pred +
         cfg_.action_weight * action * action;
}

double Agent::critic_value(double e) const {
  const std::array<double, 1> in{e};
  return critic_.forward(in);
}

double Agent::policy(double e, double x) const {
  const std::array<double, 2> in{e, x};
  const double raw = actor_.forward(in) * cfg_.action_limit;
  return std::clamp(raw, -cfg_.action_limit, cfg_.action_limit);
}

Agent::Prediction Agent::predict_next_error(const AgentObservation& obs,
                                            double action) const {
  Prediction p;
  const double dx = (steps_seen_ > 0) ? (obs.x - x_prev_) : 0.0;
  const double x_next =
      obs.x + model_.f_hat * dx + model_.g_hat * (action - u_prev_);
  p.e_next = x_next - obs.ref_next;
  p.de_du = model_.g_hat;
  return p;
}

double Agent::critic_update(double e_t, double cost_t, double e_next,
                            int* adam_steps) {
  const double target = cost_t + cfg_.gamma * critic_value(e_next);
  const std::array<double, 1> in{e_t};
  double loss = 0.0;
  int taken = 0;
  for (int k = 0; k < cfg_.max_update_steps; ++k) {
    const double v = critic_.forward(in);
    const double residual = v - target;
    loss = 0.5 * residual * residual;
    if (!std::isfinite(loss)) {
      throw AgentDivergence("critic loss went non-finite");
    }
    if (loss < cfg_.critic_loss_threshold) break;
    critic_.backward_into(in, residual, scratch_);
    adam_step(critic_.params, scratch_.param_grads, critic_opt_, cfg_.critic_lr);
    ++taken;
  }
  if (adam_steps) *adam_steps += taken;
  return loss;
}

ActorLossParts Agent::actor_loss(const AgentObservation& obs,
                                 double action) const {
  const Prediction p = predict_next_error(obs, action);
  if (!std::isfinite(p.e_next)) {
    throw std::invalid_argument("actor_loss: non-finite predicted error");
  }
  ActorLossParts parts;
  parts.cost = one_step_cost(p.e_next, action);
  const double v = critic_value(p.e_next);
  parts.gamma_v = cfg_.gamma * v;
  parts.lambda_v = cfg_.lyapunov_weight * v;
  parts.smooth =
      cfg_.smoothness_weight * (action - u_prev_) * (action - u_prev_);
  return parts;
}

void Agent::actor_gradient_into(const AgentObservation& obs,
                                Mlp::Backward& grads) const {
  const std::array<double, 2> in{obs.e, obs.x};
  const double a = actor_.forward(in); // tanh head, in (-1, 1)
  const double u = a * cfg_.action_limit;
  const Prediction p = predict_next_error(obs, u);

  const std::array<double, 1> critic_in{p.e_next};
  critic_.backward_into(critic_in, 1.0, grads);
  const double dv_de = grads.input_grad[0];

  const double dloss_du =
      2.0 * cfg_.error_weight * p.e_next * p.de_du +
      2.0 * cfg_.action_weight * u +
      (cfg_.gamma + cfg_.lyapunov_weight) * dv_de * p.de_du +
      2.0 * cfg_.smoothness_weight * (u - u_prev_);

  actor_.backward_into(in, dloss_du * cfg_.action_limit, grads);
}

std::vector<double> Agent::actor_loss_gradient(const AgentObservation& obs) const {
  Mlp::Backward grads;
  actor_gradient_into(obs, grads);
  return grads.param_grads;
}

void Agent::actor_pass(const AgentObservation& obs, AgentStepResult& info) {
  for (int k = 0; k < cfg_.max_update_steps; ++k) {
    actor_gradient_into(obs, scratch_);
    bool finite = true;
    for (double g : scratch_.param_grads) {
      if (!std::isfinite(g)) { finite = false; break; }
    }
    if (!finite) {
      // Skip and stop: a repeat evaluation would produce the same gradient.
      ++info.skipped_actor_steps;
      break;
    }
    adam_step(actor_.params, scratch_.param_grads, actor_opt_, cfg_.actor_lr);
    ++info.actor_adam_steps;
  }
}

AgentStepResult Agent::actor_update(const AgentObservation& obs) {
  AgentStepResult info;
  if (steps_seen_ >= 1) {
    for (int it = 0; it < cfg_.policy_iterations; ++it) {
      info.critic_loss =
          critic_update(e_prev_, cost_prev_, obs.e, &info.critic_adam_steps);
      actor_pass(obs, info);
    }
  }
  info.action = policy(obs.e, obs.x);
  info.actor = actor_loss(obs, info.action);
  info.value = critic_value(obs.e);
  info.model_f = model_.f_hat;
  info.model_g = model_.g_hat;
  return info;
}

double Agent::worst_pred_err() const {
  return err_window_.empty() ? 0.0 : err_window_.front().second;
}

AgentStepResult Agent::step(const AgentObservation& obs) {
  if (steps_seen_ == 0) {
    // Rest-start convention: the system is assumed at equilibrium with zero
    // command history before the first step.
    x_prev_ = x_prev2_ = obs.x;
    u_prev_ = u_prev2_ = 0.0;
  } else {
    model_ = im_update(model_, obs.x, x_prev_, x_prev2_, u_prev_, u_prev2_);
  }

  double pred_err = 0.0;
  if (have_pred_) {
    pred_err = std::abs(pred_next_ - obs.x);
    const long window = std::max<long>(1, std::lround(cfg_.model_err_window / cfg_.dt));
    while (!err_window_.empty() && err_window_.back().second <= pred_err) {
      err_window_.pop_back();
    }
    err_window_.emplace_back(err_index_, pred_err);
    while (!err_window_.empty() && err_window_.front().first <= err_index_ - window) {
      err_window_.pop_front();
    }
    ++err_index_;
  }

  AgentStepResult info = actor_update(obs);
  info.model_pred_err = pred_err;

  // Bookkeeping for the next realized transition.
  const Prediction p = predict_next_error(obs, info.action);
  cost_prev_ = one_step_cost(p.e_next, info.action);
  pred_next_ = p.e_next + obs.ref_next; // predicted next physical state
  have_pred_ = true;

  x_prev2_ = x_prev_;
  x_prev_ = obs.x;
  u_prev2_ = u_prev_;
  u_prev_ = info.action;
  e_prev_ = obs.e;
  ++steps_seen_;
  return info;
}

} // namespace lyihdp
