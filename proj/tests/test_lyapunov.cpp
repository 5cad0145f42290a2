#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "lyihdp/lyapunov.hpp"

using namespace lyihdp;

namespace {
constexpr double kAlphaGain = 3.568908393311255; // frozen coefficient group
} // namespace

TEST_CASE("decrease-margin constant at reference points") {
  CHECK(l_delta_v({1.0, 1.0, 1.0, 1.0, 0.0}) == 3.0);
  CHECK(l_delta_v({2.0, 0.5, 1.0, 1.0, 0.0}) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(l_delta_v({0.0, 7.0, 3.0, 1.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(l_delta_v({-1.0, 1.0, 1.0, 1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("decrease-margin constant is monotone in each argument") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(0.0, 5.0);
  for (int i = 0; i < 500; ++i) {
    LyapunovBounds b{dist(rng), dist(rng), dist(rng), 1.0, 0.0};
    const double base = l_delta_v(b);
    for (int arg = 0; arg < 3; ++arg) {
      LyapunovBounds bumped = b;
      (arg == 0 ? bumped.l_v : arg == 1 ? bumped.l_f : bumped.l_pi) += dist(rng);
      CHECK(l_delta_v(bumped) >= base);
    }
  }
}

TEST_CASE("state discretization") {
  SUBCASE("grid points are fixed points") {
    // spacing 2*tau/2 = 0.25, exactly representable in binary.
    const std::vector<double> x{0.75, -1.5};
    CHECK(discretize_state(x, 0.25) == x);
  }
  SUBCASE("scalar nearest-multiple rounding") {
    // n = 1 gives spacing 2*tau; tau = 0.5 means spacing 1.
    CHECK(discretize_state({0.49}, 0.5)[0] == 0.0);
    CHECK(discretize_state({0.51}, 0.5)[0] == 1.0);
  }
  SUBCASE("1-norm rounding error is bounded by tau") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    std::uniform_real_distribution<double> taus(0.01, 2.0);
    for (int i = 0; i < 10000; ++i) {
      const std::size_t dim = 1 + static_cast<std::size_t>(i % 4);
      std::vector<double> x(dim);
      for (double& v : x) v = dist(rng);
      const double tau = taus(rng);
      const std::vector<double> g = discretize_state(x, tau);
      double norm1 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) norm1 += std::abs(x[k] - g[k]);
      CHECK(norm1 <= tau + 1e-12);
    }
  }
  SUBCASE("bad tau throws") {
    CHECK_THROWS_AS(discretize_state({1.0}, 0.0), std::invalid_argument);
  }
}

TEST_CASE("practical decrease check on analytic contraction and expansion") {
  // v(x) = x^2; the map is either the contraction 0.5x or the expansion 1.5x.
  const ScalarField v = [](const std::vector<double>& s) { return s[0] * s[0]; };

  auto run = [&](double map_gain, double l_f) {
    const ScalarField u_n = [map_gain](const std::vector<double>& s) {
      const double xn = map_gain * s[0];
      return xn * xn;
    };
    LyapunovBounds b{2.0, l_f, 0.0, 1e-3, 0.0};
    auto grid = make_grid_1d(0.1, 1.0, 1e-3);
    const auto negative = make_grid_1d(-1.0, -0.1, 1e-3);
    grid.insert(grid.end(), negative.begin(), negative.end());
    return practical_decrease_check_serial(grid, v, u_n, b);
  };

  SUBCASE("contraction satisfied away from the origin") {
    const DecreaseReport r = run(0.5, 0.5);
    CHECK(r.satisfied_fraction() == 1.0);
  }
  SUBCASE("expansion violated everywhere") {
    const DecreaseReport r = run(1.5, 1.5);
    CHECK(r.satisfied_count == 0);
  }
  SUBCASE("margin dominating tau violates everything") {
    const ScalarField u_n = [](const std::vector<double>& s) {
      return 0.25 * s[0] * s[0];
    };
    LyapunovBounds b{2.0, 0.5, 0.0, 10.0, 0.0}; // l_delta_v * tau = 30
    const auto grid = make_grid_1d(0.1, 1.0, 1e-3);
    const DecreaseReport r = practical_decrease_check_serial(grid, v, u_n, b);
    CHECK(r.satisfied_count == 0);
  }
}

TEST_CASE("parallel and serial decrease checks agree exactly") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const ScalarField v = [](const std::vector<double>& s) {
    return s[0] * s[0] + 0.3 * std::sin(3.0 * s[0]);
  };
  const ScalarField u_n = [](const std::vector<double>& s) {
    const double xn = 0.7 * s[0] + 0.01;
    return xn * xn;
  };
  std::vector<std::vector<double>> grid;
  for (int i = 0; i < 20000; ++i) grid.push_back({dist(rng)});
  LyapunovBounds b{2.3, 0.7, 0.4, 1e-3, 1e-4};

  const DecreaseReport serial = practical_decrease_check_serial(grid, v, u_n, b);
  const DecreaseReport parallel = practical_decrease_check(grid, v, u_n, b);
  REQUIRE(serial.points.size() == parallel.points.size());
  CHECK(serial.satisfied_count == parallel.satisfied_count);
  for (std::size_t i = 0; i < serial.points.size(); ++i) {
    CHECK(serial.points[i].v == parallel.points[i].v);
    CHECK(serial.points[i].u_n == parallel.points[i].u_n);
    CHECK(serial.points[i].margin == parallel.points[i].margin);
    CHECK(serial.points[i].satisfied == parallel.points[i].satisfied);
  }
}

TEST_CASE("tau to zero recovers the raw decrease condition") {
  const ScalarField v = [](const std::vector<double>& s) { return s[0] * s[0]; };
  const ScalarField u_n = [](const std::vector<double>& s) {
    const double xn = 0.9 * s[0];
    return xn * xn;
  };
  // Raw condition: v(0.9x) < v(x) strictly for x != 0. At coarse tau the
  // margin rejects small |x|; as tau shrinks the satisfied set approaches
  // the whole grid band.
  const LyapunovBounds coarse{2.0, 0.9, 0.0, 0.05, 0.0};
  const LyapunovBounds fine{2.0, 0.9, 0.0, 1e-6, 0.0};
  const auto grid = make_grid_1d(0.05, 1.0, 1e-3);
  const double frac_coarse =
      practical_decrease_check_serial(grid, v, u_n, coarse).satisfied_fraction();
  const double frac_fine =
      practical_decrease_check_serial(grid, v, u_n, fine).satisfied_fraction();
  CHECK(frac_fine == 1.0);
  CHECK(frac_coarse < frac_fine);
}

TEST_CASE("decrease check rejects bad input") {
  const ScalarField v = [](const std::vector<double>&) { return 1.0; };
  const ScalarField bad = [](const std::vector<double>&) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  const std::vector<std::vector<double>> grid{{0.0}};
  const LyapunovBounds b{1.0, 1.0, 1.0, 1e-3, 0.0};
  CHECK_THROWS_AS(practical_decrease_check_serial({}, v, v, b),
                  std::invalid_argument);
  CHECK_THROWS_AS(practical_decrease_check_serial(grid, bad, v, b),
                  std::invalid_argument);
  CHECK_THROWS_AS(practical_decrease_check(grid, bad, v, b),
                  std::invalid_argument);
}

TEST_CASE("Lyapunov increment") {
  CHECK(lyapunov_increment(3.0, 3.0) == 0.0);
  CHECK(lyapunov_increment(2.0, 1.0) == -1.0);

  std::mt19937 rng(6);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  std::vector<double> trace(500);
  for (double& v : trace) v = dist(rng);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    sum += lyapunov_increment(trace[i], trace[i + 1]);
  }
  CHECK(sum == doctest::Approx(trace.back() - trace.front()).epsilon(1e-9));
}

TEST_CASE("equilibrium residual at reference points") {
  const PhysicalParams p;
  CHECK(equilibrium_residual(0.0, 0.0, 0.0, 0.0, p) == 0.0);
  // Frozen from an independent calculator: alpha_gain * cos(10 deg) * phi_z(10).
  CHECK(equilibrium_residual(10.0, 0.0, 0.0, 0.0, p) ==
        doctest::Approx(-8.934338562340145).epsilon(1e-12));
  const double two_pi = 2.0 * std::numbers::pi;
  CHECK(equilibrium_residual(0.0, two_pi, 0.0, 0.0, p) ==
        doctest::Approx(-two_pi).epsilon(1e-15));
}

TEST_CASE("equilibrium residual vanishes exactly on the balance manifold") {
  // For each sampled reference, the pitch rate that balances the residual is
  // available in closed form; the residual there must be ~0, and the
  // residual is continuous in each argument around it.
  const PhysicalParams p;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> refs(-15.0, 15.0);
  std::uniform_real_distribution<double> dels(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double alpha_ref = refs(rng);
    const double delta = dels(rng);
    const double alpha_rad = alpha_ref / p.rad_to_deg;
    const double q_balance = -p.alpha_gain() * std::cos(alpha_rad) *
                             (aero_phi_z(alpha_ref) + p.b_z * delta);
    const double r0 = equilibrium_residual(alpha_ref, 0.0, q_balance, delta, p);
    CHECK(std::abs(r0) < 1e-12);
    // Continuity: small input perturbations move the residual proportionally.
    const double r1 = equilibrium_residual(alpha_ref, 0.0, q_balance + 1e-6, delta, p);
    CHECK(std::abs(r1 - 1e-6) < 1e-12);
  }
}

TEST_CASE("frozen coefficient group matches the plant") {
  const PhysicalParams p;
  CHECK(p.alpha_gain() == doctest::Approx(kAlphaGain).epsilon(1e-12));
}
