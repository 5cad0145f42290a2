// Times the OpenMP kernels against their serial reference implementations:
// the decrease-condition grid check and the independent-episode batch.

#include <array>
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lyihdp/cascade.hpp"
#include "lyihdp/lyapunov.hpp"
#include "lyihdp/network.hpp"

using namespace lyihdp;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void bench_decrease_check(int points) {
  std::mt19937 rng(7);
  const Mlp critic = make_mlp(1, 7, OutputActivation::Abs, rng, 0.5);
  const ScalarField value = [&](const std::vector<double>& s) {
    const std::array<double, 1> in{s[0]};
    return critic.forward(in);
  };
  const ScalarField next_bound = [&](const std::vector<double>& s) {
    const std::array<double, 1> in{0.5 * s[0]};
    return critic.forward(in);
  };
  LyapunovBounds b{2.0, 0.5, 0.0, 1e-3, 0.0};

  const double span = 1.0;
  const double tau = span / points; // spacing 2*tau covers [-span, span]
  b.tau = tau;
  const auto grid = make_grid_1d(-span, span, tau);

  auto t0 = std::chrono::steady_clock::now();
  const DecreaseReport serial =
      practical_decrease_check_serial(grid, value, next_bound, b);
  const double t_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const DecreaseReport parallel =
      practical_decrease_check(grid, value, next_bound, b);
  const double t_parallel = seconds_since(t0);

  std::printf("decrease check, %zu grid points\n", grid.size());
  std::printf("  serial   %8.3f ms  (satisfied %zu)\n", 1e3 * t_serial,
              serial.satisfied_count);
  std::printf("  openmp   %8.3f ms  (satisfied %zu)\n", 1e3 * t_parallel,
              parallel.satisfied_count);
  std::printf("  speedup  %8.2fx\n", t_serial / t_parallel);
}

void bench_episode_batch(int episodes, double duration) {
  std::vector<EpisodeConfig> configs;
  for (int i = 0; i < episodes; ++i) {
    EpisodeConfig cfg;
    cfg.duration = duration;
    cfg.seed = static_cast<unsigned>(i + 1);
    configs.push_back(cfg);
  }

  auto t0 = std::chrono::steady_clock::now();
  const auto serial = run_batch(configs, false);
  const double t_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const auto parallel = run_batch(configs, true);
  const double t_parallel = seconds_since(t0);

  long completed = 0;
  for (const auto& r : parallel) completed += r.completed() ? 1 : 0;
  (void)serial;

  std::printf("episode batch, %d episodes x %.1f s\n", episodes, duration);
  std::printf("  serial   %8.3f s\n", t_serial);
  std::printf("  openmp   %8.3f s  (%ld completed)\n", t_parallel, completed);
  std::printf("  speedup  %8.2fx\n", t_serial / t_parallel);
}

} // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without openmp; both kernels run serially\n");
#endif
  bench_decrease_check(1 << 19);
  bench_episode_batch(4, 2.0);
  return 0;
}
