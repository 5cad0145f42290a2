// Command-line front end: run episodes, sweep the Lyapunov-loss weights,
// verify the decrease condition on saved networks, recompute metrics, and
// exercise the numeric selftest oracles.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lyihdp/cascade.hpp"
#include "lyihdp/config.hpp"
#include "lyihdp/csv_log.hpp"
#include "lyihdp/lyapunov.hpp"
#include "lyihdp/manifest.hpp"
#include "lyihdp/metrics.hpp"
#include "lyihdp/oracles.hpp"
#include "lyihdp/weights_io.hpp"

namespace fs = std::filesystem;
using namespace lyihdp;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<long> seed;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<double> duration;
  std::optional<double> dt;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "config file (flat key = value)");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--seed", o.seed, "network init seed");
  cmd->add_option("--lambda1", o.lambda1, "outer-loop Lyapunov loss weight");
  cmd->add_option("--lambda2", o.lambda2, "inner-loop Lyapunov loss weight");
  cmd->add_option("--duration", o.duration, "episode length, s");
  cmd->add_option("--dt", o.dt, "control period, s");
}

EpisodeConfig build_config(const CommonOpts& o) {
  EpisodeConfig cfg = o.config_path.empty() ? EpisodeConfig{}
                                            : parse_config_file(o.config_path);
  if (o.seed) cfg.seed = static_cast<unsigned>(*o.seed);
  if (o.lambda1) cfg.higher.lyapunov_weight = *o.lambda1;
  if (o.lambda2) cfg.lower.lyapunov_weight = *o.lambda2;
  if (o.duration) cfg.duration = *o.duration;
  if (o.dt) cfg.dt = *o.dt;
  cfg.finalize();
  return cfg;
}

// Runs one episode into `dir`, writing the manifest before any data file.
// Returns true when the episode completed without the divergence guard.
bool run_into_dir(const EpisodeConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  RunManifest manifest;
  manifest.seed = cfg.seed;
  manifest.config_snapshot = serialize_config(cfg);
  manifest.outputs = {"steps.csv", "metrics.csv", "weights.json"};
  write_manifest(manifest, (dir / "manifest.txt").string());

  EpisodeResult result = run_episode(cfg);
  emit_csv(result.log, (dir / "steps.csv").string());
  if (!result.log.empty()) {
    try {
      emit_metrics_csv(compute_metrics(result.log, default_windows()),
                       (dir / "metrics.csv").string());
    } catch (const std::invalid_argument&) {
      // Short or truncated runs may not cover the default windows.
    }
  }
  save_weights(snapshot_from_result(result, cfg.dt),
               (dir / "weights.json").string());

  manifest.status = result.completed() ? "completed" : "diverged";
  manifest.detail = result.failure_reason;
  manifest.wall_seconds = result.wall_seconds;
  manifest.out_of_fit_range_steps = result.out_of_fit_range_steps;
  write_manifest(manifest, (dir / "manifest.txt").string());

  std::cout << (result.completed() ? "completed" : "DIVERGED") << " in "
            << result.wall_seconds << " s (" << result.log.size() << " steps)";
  if (!result.completed()) std::cout << ": " << result.failure_reason;
  std::cout << "\n  outputs in " << dir.string() << std::endl;
  if (result.higher && result.higher->worst_pred_err() > cfg.higher.eps_model) {
    std::cout << "  note: outer-loop prediction error "
              << result.higher->worst_pred_err() << " exceeds eps_model\n";
  }
  if (result.lower && result.lower->worst_pred_err() > cfg.lower.eps_model) {
    std::cout << "  note: inner-loop prediction error "
              << result.lower->worst_pred_err() << " exceeds eps_model\n";
  }
  return result.completed();
}

int cmd_run(const CommonOpts& o) {
  const EpisodeConfig cfg = build_config(o);
  return run_into_dir(cfg, o.out_dir) ? 0 : 1;
}

int cmd_compare(const CommonOpts& o, std::vector<std::string>& variant_specs) {
  const EpisodeConfig base = build_config(o);
  std::vector<ComparisonVariant> variants;
  if (variant_specs.empty()) {
    variants = {{"ihdp", 0.0, 0.0},
                {"lyap_outer", 500.0, 0.0},
                {"lyap_both", 500.0, 0.1}};
  } else {
    for (const std::string& spec : variant_specs) {
      ComparisonVariant v;
      const auto c1 = spec.find(':');
      const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos) {
        std::cerr << "bad --variant spec '" << spec << "', want name:l1:l2\n";
        return 2;
      }
      v.name = spec.substr(0, c1);
      v.lambda1 = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
      v.lambda2 = std::stod(spec.substr(c2 + 1));
      variants.push_back(v);
    }
  }

  const fs::path out(o.out_dir);
  fs::create_directories(out);
  RunManifest top;
  top.seed = base.seed;
  top.config_snapshot = serialize_config(base);
  top.outputs = {"comparison.csv"};
  write_manifest(top, (out / "manifest.txt").string());

  const std::vector<ComparisonEntry> entries = run_comparison(base, variants);

  std::string table =
      "variant,lambda1,lambda2,status,window_start,window_end,rms_e_alpha,"
      "rms_e_q,mean_dv1,mean_dv2,frac_dv1_nonpos,frac_dv2_nonpos,peak_delta\n";
  bool all_ok = true;
  char buf[320];
  for (const ComparisonEntry& e : entries) {
    const fs::path vdir = out / e.variant.name;
    fs::create_directories(vdir);
    RunManifest vm;
    vm.seed = base.seed;
    vm.config_snapshot = serialize_config(base);
    vm.outputs = {"steps.csv"};
    vm.status = e.result.completed() ? "completed" : "diverged";
    vm.detail = e.result.failure_reason;
    vm.wall_seconds = e.result.wall_seconds;
    vm.out_of_fit_range_steps = e.result.out_of_fit_range_steps;
    write_manifest(vm, (vdir / "manifest.txt").string());
    emit_csv(e.result.log, (vdir / "steps.csv").string());

    all_ok = all_ok && e.result.completed();
    const char* status = e.result.completed() ? "completed" : "diverged";
    if (e.result.log.empty()) continue;
    try {
      for (const WindowMetrics& m :
           compute_metrics(e.result.log, default_windows())) {
        std::snprintf(buf, sizeof(buf),
                      "%s,%.17g,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                      "%.17g,%.17g,%.17g\n",
                      e.variant.name.c_str(), e.variant.lambda1,
                      e.variant.lambda2, status, m.window.start, m.window.end,
                      m.rms_e_alpha, m.rms_e_q, m.mean_dv1, m.mean_dv2,
                      m.frac_dv1_nonpos, m.frac_dv2_nonpos, m.peak_delta);
        table += buf;
      }
    } catch (const std::invalid_argument&) {
      // Truncated run without full window coverage; row omitted.
    }
    std::cout << e.variant.name << ": " << status << " ("
              << e.result.wall_seconds << " s)\n";
  }
  std::ofstream tf(out / "comparison.csv", std::ios::binary);
  tf << table;
  if (!tf) {
    std::cerr << "failed writing comparison.csv\n";
    return 1;
  }

  top.status = all_ok ? "completed" : "diverged";
  write_manifest(top, (out / "manifest.txt").string());
  std::cout << "comparison table: " << (out / "comparison.csv").string()
            << std::endl;
  return all_ok ? 0 : 1;
}

struct CheckOpts {
  std::string weights_path;
  std::string loop = "lower";
  std::string out_dir = "out";
  double tau = 1e-3;
  double grid_min = -10.0;
  double grid_max = 10.0;
  double ref_slice = 0.0;
  std::optional<double> model_err;
  std::optional<double> l_v, l_f, l_pi;
  int samples = 2000;
};

int cmd_check(const CheckOpts& o) {
  const WeightsSnapshot w = load_weights(o.weights_path);
  const LoopSnapshot& loop = (o.loop == "higher") ? w.higher : w.lower;

  // Policy and value on the tracking-error axis. The non-error actor input
  // is sliced at x = e + ref_slice; increments are taken from rest.
  const double limit = loop.action_limit;
  const Mlp& actor = loop.actor;
  const Mlp& critic = loop.critic;
  const double g_hat = loop.model_g;
  const ScalarField value = [&](const std::vector<double>& s) {
    const std::array<double, 1> in{s[0]};
    return critic.forward(in);
  };
  const auto policy = [&, ref = o.ref_slice](double e) {
    const std::array<double, 2> in{e, e + ref};
    return actor.forward(in) * limit;
  };
  const ScalarField next_value_bound = [&](const std::vector<double>& s) {
    const double e_next = s[0] + g_hat * policy(s[0]);
    const std::array<double, 1> in{e_next};
    return critic.forward(in);
  };

  std::mt19937 rng(2024);
  LyapunovBounds b;
  b.tau = o.tau;
  b.model_err = o.model_err.value_or(loop.model_err);
  b.l_v = o.l_v.value_or(
      estimate_field_lipschitz(value, o.grid_min, o.grid_max, rng, o.samples));
  const ScalarField next_map = [&](const std::vector<double>& s) {
    return s[0] + g_hat * policy(s[0]);
  };
  b.l_f = o.l_f.value_or(estimate_field_lipschitz(next_map, o.grid_min,
                                                  o.grid_max, rng, o.samples));
  const ScalarField policy_field = [&](const std::vector<double>& s) {
    return policy(s[0]);
  };
  b.l_pi = o.l_pi.value_or(estimate_field_lipschitz(
      policy_field, o.grid_min, o.grid_max, rng, o.samples));

  const auto grid = make_grid_1d(o.grid_min, o.grid_max, o.tau);
  const DecreaseReport report =
      practical_decrease_check(grid, value, next_value_bound, b);

  fs::create_directories(o.out_dir);
  const fs::path csv_path = fs::path(o.out_dir) / "check.csv";
  std::ofstream out(csv_path, std::ios::binary);
  out << "state,v,u_n,margin,satisfied\n";
  char buf[160];
  for (const DecreasePoint& p : report.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d\n", p.state[0],
                  p.v, p.u_n, p.margin, p.satisfied ? 1 : 0);
    out << buf;
  }
  if (!out) {
    std::cerr << "failed writing " << csv_path.string() << "\n";
    return 1;
  }

  std::printf("loop: %s\n", o.loop.c_str());
  std::printf("estimated constants: l_v = %.6g, l_f = %.6g, l_pi = %.6g\n",
              b.l_v, b.l_f, b.l_pi);
  std::printf("tau = %.6g, model_err = %.6g, margin l_delta_v*tau = %.6g\n",
              b.tau, b.model_err, l_delta_v(b) * b.tau);
  std::printf("grid points: %zu, satisfied: %zu (%.2f%%)\n",
              report.points.size(), report.satisfied_count,
              100.0 * report.satisfied_fraction());
  std::printf("report: %s\n", csv_path.string().c_str());
  return 0;
}

int cmd_metrics(const std::string& in_csv, const std::string& out_dir) {
  const std::vector<StepLog> log = read_csv(in_csv);
  const auto metrics = compute_metrics(log, default_windows());
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / "metrics.csv";
  emit_metrics_csv(metrics, path.string());
  std::cout << metrics_csv_text(metrics);
  std::cout << "written: " << path.string() << std::endl;
  return 0;
}

int cmd_selftest() {
  const SelftestReport report = run_selftest();
  for (const SelftestCase& c : report.cases) {
    std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.detail.c_str());
  }
  std::printf("selftest wall time: %.2f s\n", report.wall_seconds);
  return report.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"cascaded online-learning flight control workbench"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "run one learning episode");
  add_common(run_cmd, run_opts);

  CommonOpts cmp_opts;
  std::vector<std::string> variant_specs;
  CLI::App* cmp_cmd =
      app.add_subcommand("compare", "run a Lyapunov-weight sweep, same seed");
  add_common(cmp_cmd, cmp_opts);
  cmp_cmd->add_option("--variant", variant_specs,
                      "variant as name:lambda1:lambda2 (repeatable)");

  CheckOpts check_opts;
  CLI::App* check_cmd = app.add_subcommand(
      "check", "verify the practical decrease condition on saved networks");
  check_cmd->add_option("--weights", check_opts.weights_path, "weights.json path")
      ->required();
  check_cmd->add_option("--loop", check_opts.loop, "higher | lower")
      ->check(CLI::IsMember({"higher", "lower"}));
  check_cmd->add_option("--out", check_opts.out_dir, "output directory");
  check_cmd->add_option("--tau", check_opts.tau, "grid resolution (1-norm)");
  check_cmd->add_option("--grid-min", check_opts.grid_min, "grid lower bound");
  check_cmd->add_option("--grid-max", check_opts.grid_max, "grid upper bound");
  check_cmd->add_option("--ref", check_opts.ref_slice,
                        "reference value for the actor state slice");
  check_cmd->add_option("--model-err", check_opts.model_err,
                        "override the stored prediction-error bound");
  check_cmd->add_option("--l-v", check_opts.l_v, "override the value Lipschitz constant");
  check_cmd->add_option("--l-f", check_opts.l_f, "override the map Lipschitz constant");
  check_cmd->add_option("--l-pi", check_opts.l_pi, "override the policy Lipschitz constant");
  check_cmd->add_option("--samples", check_opts.samples,
                        "samples for the Lipschitz estimates");

  std::string metrics_in, metrics_out = "out";
  CLI::App* metrics_cmd =
      app.add_subcommand("metrics", "recompute window metrics from steps.csv");
  metrics_cmd->add_option("--in", metrics_in, "steps.csv path")->required();
  metrics_cmd->add_option("--out", metrics_out, "output directory");

  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "run the numeric oracle battery");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run_opts);
    if (cmp_cmd->parsed()) return cmd_compare(cmp_opts, variant_specs);
    if (check_cmd->parsed()) return cmd_check(check_opts);
    if (metrics_cmd->parsed()) return cmd_metrics(metrics_in, metrics_out);
    if (selftest_cmd->parsed()) return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 2;
}
