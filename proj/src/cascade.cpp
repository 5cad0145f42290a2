#include "lyihdp/cascade.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace lyihdp {

int EpisodeConfig::step_count() const {
  const double n = duration / dt;
  return static_cast<int>(std::lround(n));
}

void EpisodeConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (duration < 0.0) throw std::invalid_argument("duration must be >= 0");
  const double n = duration / dt;
  if (std::abs(n - std::lround(n)) > 1e-9) {
    throw std::invalid_argument("duration must be an integer number of steps");
  }
  if (!(filter_time_constant > 0.0)) {
    throw std::invalid_argument("filter.time_constant must be > 0");
  }
  if (!(reference.period > 0.0)) {
    throw std::invalid_argument("reference.period must be > 0");
  }
  plant.validate();
  higher.validate();
  lower.validate();
}

void EpisodeConfig::finalize() {
  higher.dt = dt;
  lower.dt = dt;
  // Signed initial input sensitivity: one tenth of the per-step control
  // effectiveness implied by the airframe coefficients, negative like the
  // fin effectiveness itself.
  higher.model_g_init = -0.1 * std::abs(plant.b_z) * plant.alpha_gain() * dt;
  lower.model_g_init = -0.1 * std::abs(plant.b_m) * plant.q_gain() * dt;
  validate();
}

namespace {

bool row_finite(const StepLog& r) {
  return std::isfinite(r.alpha) && std::isfinite(r.q) && std::isfinite(r.delta) &&
         std::isfinite(r.q_ref_raw) && std::isfinite(r.delta_cmd) &&
         std::isfinite(r.v1) && std::isfinite(r.v2);
}

void fill_increments(std::vector<StepLog>& log) {
  for (std::size_t i = 0; i < log.size(); ++i) {
    const bool last = i + 1 == log.size();
    log[i].dv1 = last ? 0.0 : log[i + 1].v1 - log[i].v1;
    log[i].dv2 = last ? 0.0 : log[i + 1].v2 - log[i].v2;
  }
}

} // namespace

EpisodeResult run_episode(const EpisodeConfig& cfg_in) {
  EpisodeConfig cfg = cfg_in;
  cfg.finalize();

  const auto t_start = std::chrono::steady_clock::now();
  EpisodeResult out;

  std::mt19937 rng(cfg.seed);
  out.higher.emplace(cfg.higher, rng);
  out.lower.emplace(cfg.lower, rng);
  Agent& higher = *out.higher;
  Agent& lower = *out.lower;

  PlantState plant;
  ActuatorState act = cfg.actuator;
  LowPassState filter{0.0, cfg.filter_time_constant};

  const int n = cfg.step_count();
  out.log.reserve(static_cast<std::size_t>(n));


  try {
    for (int k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * cfg.dt;
      const ReferencePoint ref =
          alpha_reference(t, cfg.reference.amplitude, cfg.reference.period);
      const ReferencePoint ref_next =
          alpha_reference(t + cfg.dt, cfg.reference.amplitude, cfg.reference.period);

      StepLog row;
      row.t = t;
      row.alpha_ref = ref.alpha_ref;
      row.alpha = plant.alpha;
      row.e_alpha = plant.alpha - ref.alpha_ref;

      // Outer loop: commands a raw pitch-rate reference; the filter and the
      // whole inner loop are the plant its model identifies.
      AgentObservation obs1;
      obs1.x = plant.alpha;
      obs1.e = row.e_alpha;
      obs1.ref_next = ref_next.alpha_ref;
      const AgentStepResult r1 = higher.step(obs1);
      row.q_ref_raw = r1.action;

      filter = lowpass_step(filter, r1.action, cfg.dt);
      row.q_ref_filtered = filter.y;
      row.q = plant.q;
      row.e_q = plant.q - filter.y;

      // Inner loop: commands the fin; the filtered reference is treated as
      // locally constant for the next-error prediction.
      AgentObservation obs2;
      obs2.x = plant.q;
      obs2.e = row.e_q;
      obs2.ref_next = filter.y;
      const AgentStepResult r2 = lower.step(obs2);
      row.delta_cmd = r2.action;

      std::tie(plant, act) = integrate_step(plant, act, r2.action, cfg.dt, cfg.plant);
      row.delta = act.delta;

      row.v1 = r1.value;
      row.v2 = r2.value;
      row.critic_loss1 = r1.critic_loss;
      row.actor_loss1 = r1.actor.total();
      row.actor_cost1 = r1.actor.cost;
      row.actor_gamma_v1 = r1.actor.gamma_v;
      row.actor_lambda_v1 = r1.actor.lambda_v;
      row.actor_smooth1 = r1.actor.smooth;
      row.critic_loss2 = r2.critic_loss;
      row.actor_loss2 = r2.actor.total();
      row.actor_cost2 = r2.actor.cost;
      row.actor_gamma_v2 = r2.actor.gamma_v;
      row.actor_lambda_v2 = r2.actor.lambda_v;
      row.actor_smooth2 = r2.actor.smooth;
      row.model_f1 = r1.model_f;
      row.model_g1 = r1.model_g;
      row.model_err1 = r1.model_pred_err;
      row.model_f2 = r2.model_f;
      row.model_g2 = r2.model_g;
      row.model_err2 = r2.model_pred_err;

      out.log.push_back(row);
      if (plant.out_of_fit_range()) ++out.out_of_fit_range_steps;

      if (!row_finite(row) || !std::isfinite(plant.alpha) ||
          !std::isfinite(plant.q)) {
        out.diverged = true;
        out.failure_reason = "non-finite state or log value";
        break;
      }
      if (std::abs(plant.alpha) > kAlphaGuardDeg) {
        std::ostringstream os;
        os << "alpha guard tripped: |alpha| = " << std::abs(plant.alpha)
           << " deg > " << kAlphaGuardDeg << " deg at t = " << plant.t << " s";
        out.diverged = true;
        out.failure_reason = os.str();
        break;
      }
    }
  } catch (const AgentDivergence& e) {
    out.diverged = true;
    out.failure_reason = std::string("agent divergence: ") + e.what();
  } catch (const std::runtime_error& e) {
    out.diverged = true;
    out.failure_reason = std::string("runtime error: ") + e.what();
  }

  fill_increments(out.log);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return out;
}

std::vector<EpisodeResult> run_batch(const std::vector<EpisodeConfig>& configs,
                                     bool parallel) {
  std::vector<EpisodeResult> results(configs.size());
  const auto n = static_cast<long long>(configs.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
      results[i] = run_episode(configs[i]);
    }
  } else {
    for (long long i = 0; i < n; ++i) {
      results[i] = run_episode(configs[i]);
    }
  }
  return results;
}

std::vector<ComparisonEntry> run_comparison(
    const EpisodeConfig& base, const std::vector<ComparisonVariant>& variants,
    bool parallel) {
  if (variants.size() < 2) {
    throw std::invalid_argument("run_comparison: need at least 2 variants");
  }
  std::vector<EpisodeConfig> configs;
  configs.reserve(variants.size());
  for (const ComparisonVariant& v : variants) {
    EpisodeConfig cfg = base;
    cfg.higher.lyapunov_weight = v.lambda1;
    cfg.lower.lyapunov_weight = v.lambda2;
    configs.push_back(cfg);
  }
  std::vector<EpisodeResult> results = run_batch(configs, parallel);
  std::vector<ComparisonEntry> entries;
  entries.reserve(variants.size());
  for (std::size_t i = 0; i < variants.size(); ++i) {
    entries.push_back({variants[i], std::move(results[i])});
  }
  return entries;
}

} // namespace lyihdp
