#pragma once

#include <random>
#include <span>
#include <vector>

namespace lyihdp {

enum class OutputActivation { Identity, Tanh, Abs };

// One-hidden-layer scalar-output network with tanh hidden units. Parameters
// live in a single flat vector laid out as [W1 | b1 | W2 | b2] so the
// optimizer can treat them uniformly.
struct Mlp {
  int input_dim = 1;
  int hidden_dim = 7;
  OutputActivation output_activation = OutputActivation::Identity;
  std::vector<double> params;

  int param_count() const { return hidden_dim * (input_dim + 2) + 1; }
  int w1_offset() const { return 0; }
  int b1_offset() const { return hidden_dim * input_dim; }
  int w2_offset() const { return hidden_dim * (input_dim + 1); }
  int b2_offset() const { return hidden_dim * (input_dim + 2); }

  double forward(std::span<const double> input) const;

  struct Backward {
    std::vector<double> param_grads;
    std::vector<double> input_grad;
  };

  // Exact gradients of upstream * forward(input) with respect to every
  // parameter and to the input. The abs head uses subgradient 0 at 0.
  Backward backward(std::span<const double> input, double upstream) const;
  // Allocation-free variant for hot loops; resizes `out` as needed.
  void backward_into(std::span<const double> input, double upstream,
                     Backward& out) const;
};

// Fresh network with all parameters drawn uniformly from [-init_range, init_range].
Mlp make_mlp(int input_dim, int hidden_dim, OutputActivation activation,
             std::mt19937& rng, double init_range);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

AdamState make_adam_state(int param_count);

// Standard bias-corrected Adam update. Throws std::invalid_argument on shape
// mismatch or non-finite gradients; the caller decides whether to skip.
void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               AdamState& opt, double lr);

} // namespace lyihdp
