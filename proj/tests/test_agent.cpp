#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "lyihdp/agent.hpp"

using namespace lyihdp;

namespace {

AgentConfig lower_defaults() { return AgentConfig::lower_defaults(); }

// Sets the critic to a constant function: every parameter zero except the
// output bias, so the abs head returns |bias| everywhere.
void make_constant_critic(Agent& agent, double bias) {
  Mlp& critic = agent.critic();
  std::fill(critic.params.begin(), critic.params.end(), 0.0);
  critic.params[static_cast<std::size_t>(critic.b2_offset())] = bias;
}

// Drives a few steps of a synthetic scalar system so the agent accumulates
// history (model, previous transition, previous action).
void warm_up(Agent& agent, int steps) {
  double x = 0.3;
  for (int k = 0; k < steps; ++k) {
    AgentObservation obs;
    obs.x = x;
    obs.e = x - 0.1;
    obs.ref_next = 0.1;
    const AgentStepResult r = agent.step(obs);
    x = 0.9 * x + 0.01 * r.action + 0.05 * std::sin(0.7 * k);
  }
}

} // namespace

TEST_CASE("one-step cost at reference points") {
  std::mt19937 rng(1);
  AgentConfig cfg; // higher-loop defaults: error weight 1, action weight 5e-6
  Agent agent(cfg, rng);
  CHECK(agent.one_step_cost(0.0, 0.0) == 0.0);
  CHECK(agent.one_step_cost(1.0, 0.0) == 1.0);
  CHECK(agent.one_step_cost(2.0, 100.0) == doctest::Approx(4.05).epsilon(1e-12));
}

TEST_CASE("config validation") {
  std::mt19937 rng(2);
  AgentConfig cfg;
  cfg.gamma = 1.5;
  CHECK_THROWS_WITH(Agent(cfg, rng), "gamma out of range (0,1)");
  cfg = AgentConfig{};
  cfg.policy_iterations = 0;
  CHECK_THROWS_AS(Agent(cfg, rng), std::invalid_argument);
}

TEST_CASE("critic update forms the discounted target") {
  std::mt19937 rng(3);
  AgentConfig cfg;
  cfg.critic_loss_threshold = 0.1; // above the expected loss: no step taken
  Agent agent(cfg, rng);
  make_constant_critic(agent, 2.0);

  // target = 1 + 0.6 * 2 = 2.2, V(e_t) = 2, loss = 0.5 * 0.2^2 = 0.02.
  const std::vector<double> before = agent.critic().params;
  int steps = 0;
  const double loss = agent.critic_update(1.0, 1.0, 0.0, &steps);
  CHECK(loss == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(steps == 0);
  CHECK(agent.critic().params == before);
}

TEST_CASE("perfect critic takes no update step") {
  std::mt19937 rng(4);
  AgentConfig cfg; // default threshold 5e-5
  Agent agent(cfg, rng);
  make_constant_critic(agent, 2.0);
  // target = 0.8 + 0.6 * 2 = 2.0 = V(e_t): zero loss, no parameter change.
  const std::vector<double> before = agent.critic().params;
  const double loss = agent.critic_update(1.0, 0.8, 0.0);
  CHECK(loss == 0.0);
  CHECK(agent.critic().params == before);
}

TEST_CASE("critic converges on a fixed transition within the step budget") {
  std::mt19937 rng(5);
  AgentConfig cfg;
  Agent agent(cfg, rng);
  int steps = 0;
  const double loss = agent.critic_update(1.5, 2.25, 0.9, &steps);
  CHECK(loss < cfg.critic_loss_threshold);
  CHECK(steps <= cfg.max_update_steps);
}

TEST_CASE("actor loss parts") {
  AgentObservation obs;
  obs.x = 2.0;
  obs.e = 1.2;
  obs.ref_next = 0.8;

  SUBCASE("lambda and smoothness zero reduce to cost + discounted value") {
    std::mt19937 rng(6);
    AgentConfig cfg = lower_defaults();
    cfg.lyapunov_weight = 0.0;
    cfg.smoothness_weight = 0.0;
    Agent agent(cfg, rng);
    const ActorLossParts parts = agent.actor_loss(obs, 0.5);
    CHECK(parts.lambda_v == 0.0);
    CHECK(parts.smooth == 0.0);
    CHECK(parts.total() == parts.cost + parts.gamma_v);
  }

  SUBCASE("loss is linear in the Lyapunov weight") {
    AgentConfig base = lower_defaults();
    AgentConfig weighted = base;
    weighted.lyapunov_weight = 500.0;
    std::mt19937 rng_a(7), rng_b(7);
    Agent a(base, rng_a), b(weighted, rng_b);
    const ActorLossParts pa = a.actor_loss(obs, 0.5);
    const ActorLossParts pb = b.actor_loss(obs, 0.5);
    // Identical seeds give identical networks, so the only difference is
    // lambda * V(e_next) where gamma_v / gamma recovers V.
    const double v = pa.gamma_v / base.gamma;
    CHECK(pb.total() - pa.total() == doctest::Approx(500.0 * v).epsilon(1e-12));
    CHECK(pb.lambda_v == doctest::Approx(500.0 * v).epsilon(1e-12));
  }
}

TEST_CASE("dead model leaves only direct action gradients") {
  std::mt19937 rng(8);
  AgentConfig cfg = lower_defaults();
  Agent agent(cfg, rng);
  warm_up(agent, 5);
  agent.model().f_hat = 0.0;
  agent.model().g_hat = 0.0;

  AgentObservation obs;
  obs.x = 1.0;
  obs.e = 0.5;
  obs.ref_next = 0.5;
  const std::vector<double> grads = agent.actor_loss_gradient(obs);

  // Expected: chain rule with de/du = 0 leaves 2*b*u + 2*rho*(u - u_prev).
  const std::array<double, 2> in{obs.e, obs.x};
  const double u = agent.actor().forward(in) * cfg.action_limit;
  const double dloss_du = 2.0 * cfg.action_weight * u +
                          2.0 * cfg.smoothness_weight * (u - agent.prev_action());
  const Mlp::Backward expect =
      agent.actor().backward(in, dloss_du * cfg.action_limit);
  REQUIRE(grads.size() == expect.param_grads.size());
  for (std::size_t i = 0; i < grads.size(); ++i) {
    CHECK(grads[i] == doctest::Approx(expect.param_grads[i]).epsilon(1e-14));
  }
}

TEST_CASE("actor gradient matches finite differences through the composed path") {
  std::mt19937 rng(9);
  AgentConfig cfg = lower_defaults();
  cfg.lyapunov_weight = 0.1;
  Agent agent(cfg, rng);
  warm_up(agent, 10);

  AgentObservation obs;
  obs.x = 0.8;
  obs.e = 0.6;
  obs.ref_next = 0.2;

  const std::vector<double> analytic = agent.actor_loss_gradient(obs);
  const std::array<double, 2> in{obs.e, obs.x};
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double saved = agent.actor().params[i];
    agent.actor().params[i] = saved + h;
    const double up = agent.actor_loss(obs, agent.actor().forward(in) *
                                                cfg.action_limit).total();
    agent.actor().params[i] = saved - h;
    const double dn = agent.actor_loss(obs, agent.actor().forward(in) *
                                                cfg.action_limit).total();
    agent.actor().params[i] = saved;
    const double fd = (up - dn) / (2.0 * h);
    const double denom = std::max({std::abs(fd), std::abs(analytic[i]), 1e-6});
    worst = std::max(worst, std::abs(fd - analytic[i]) / denom);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("actor update moves the action to shrink a positive predicted error") {
  std::mt19937 rng(10);
  AgentConfig cfg = lower_defaults();
  cfg.actor_lr = 1e-3; // visible movement within one update call
  Agent agent(cfg, rng);
  warm_up(agent, 3);
  agent.model().f_hat = 0.0;
  agent.model().g_hat = -0.5;

  AgentObservation obs;
  obs.x = 5.0;
  obs.e = 5.0;
  obs.ref_next = 0.0;
  const double before = agent.policy(obs.e, obs.x);
  const AgentStepResult info = agent.actor_update(obs);
  CHECK(info.action > before); // with g < 0, a larger action lowers e_next
}

TEST_CASE("actions stay inside the limit and compute stays inside the budget") {
  std::mt19937 rng(11);
  AgentConfig cfg = lower_defaults();
  Agent agent(cfg, rng);
  double x = 0.0;
  for (int k = 0; k < 200; ++k) {
    AgentObservation obs;
    obs.x = x;
    obs.e = x - std::sin(0.05 * k);
    obs.ref_next = std::sin(0.05 * (k + 1));
    const AgentStepResult r = agent.step(obs);
    CHECK(std::abs(r.action) <= cfg.action_limit);
    CHECK(r.critic_adam_steps <= cfg.policy_iterations * cfg.max_update_steps);
    CHECK(r.actor_adam_steps <= cfg.policy_iterations * cfg.max_update_steps);
    x = 0.95 * x + 0.02 * r.action + 0.1 * std::cos(0.11 * k);
  }
}
