#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>

#include "lyihdp/reference.hpp"

using namespace lyihdp;

TEST_CASE("reference signal at characteristic times") {
  const double two_pi = 2.0 * std::numbers::pi;

  const ReferencePoint r0 = alpha_reference(0.0, 10.0, 10.0);
  CHECK(r0.alpha_ref == 0.0);
  CHECK(r0.alpha_ref_dot == doctest::Approx(two_pi).epsilon(1e-14));

  const ReferencePoint r_peak = alpha_reference(2.5, 10.0, 10.0);
  CHECK(r_peak.alpha_ref == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(r_peak.alpha_ref_dot == doctest::Approx(0.0).scale(two_pi));

  const ReferencePoint r_half = alpha_reference(5.0, 10.0, 10.0);
  CHECK(r_half.alpha_ref == doctest::Approx(0.0).scale(10.0));
  CHECK(r_half.alpha_ref_dot == doctest::Approx(-two_pi).epsilon(1e-12));
}

TEST_CASE("reference derivative matches central differences") {
  const double h = 1e-4;
  for (double t = 0.0; t < 12.0; t += 0.37) {
    const ReferencePoint c = alpha_reference(t, 10.0, 10.0);
    const ReferencePoint p = alpha_reference(t + h, 10.0, 10.0);
    const ReferencePoint m = alpha_reference(t - h, 10.0, 10.0);
    const double fd = (p.alpha_ref - m.alpha_ref) / (2.0 * h);
    CHECK(std::abs(c.alpha_ref_dot - fd) < 1e-6);
  }
}

TEST_CASE("reference rejects bad period") {
  CHECK_THROWS_AS(alpha_reference(0.0, 10.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_reference(0.0, 10.0, -1.0), std::invalid_argument);
}

TEST_CASE("low-pass filter at reference points") {
  LowPassState f{0.0, 0.05};
  f = lowpass_step(f, 0.0, 1e-3);
  CHECK(f.y == 0.0);
  f = lowpass_step(f, 1.0, 1e-3);
  CHECK(f.y == doctest::Approx(0.02).epsilon(1e-12));
  CHECK_THROWS_AS(lowpass_step(f, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("low-pass filter converges to a constant input") {
  LowPassState f{0.0, 0.05};
  const double dt = 1e-3;
  const double c = 3.7;
  const int settle = static_cast<int>(5.0 * f.time_constant / dt);
  for (int i = 0; i < settle; ++i) f = lowpass_step(f, c, dt);
  CHECK(std::abs(f.y - c) < 0.01 * std::abs(c));
}

TEST_CASE("low-pass filter is monotone and never overshoots") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  const double dt = 1e-3;

  SUBCASE("constant input, no overshoot, monotone") {
    for (int trial = 0; trial < 20; ++trial) {
      const double c = dist(rng);
      LowPassState f{dist(rng), 0.05};
      double prev_gap = std::abs(c - f.y);
      for (int i = 0; i < 500; ++i) {
        f = lowpass_step(f, c, dt);
        const double gap = std::abs(c - f.y);
        CHECK(gap <= prev_gap + 1e-15);
        prev_gap = gap;
      }
    }
  }

  SUBCASE("output bounded by the running input range") {
    for (int trial = 0; trial < 20; ++trial) {
      LowPassState f{0.0, 0.05};
      double lo = 0.0, hi = 0.0;
      for (int i = 0; i < 1000; ++i) {
        const double u = dist(rng);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        f = lowpass_step(f, u, dt);
        CHECK(f.y >= lo - 1e-12);
        CHECK(f.y <= hi + 1e-12);
      }
    }
  }
}
