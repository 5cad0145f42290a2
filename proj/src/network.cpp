#include "lyihdp/network.hpp"

#include <cmath>
#include <stdexcept>

namespace lyihdp {

namespace {

double apply_head(OutputActivation act, double y) {
  switch (act) {
    case OutputActivation::Identity: return y;
    case OutputActivation::Tanh: return std::tanh(y);
    case OutputActivation::Abs: return std::abs(y);
  }
  return y;
}

double head_derivative(OutputActivation act, double y) {
  switch (act) {
    case OutputActivation::Identity: return 1.0;
    case OutputActivation::Tanh: {
      const double th = std::tanh(y);
      return 1.0 - th * th;
    }
    case OutputActivation::Abs:
      if (y > 0.0) return 1.0;
      if (y < 0.0) return -1.0;
      return 0.0; // subgradient choice at the kink
  }
  return 1.0;
}

} // namespace

double Mlp::forward(std::span<const double> input) const {
  if (static_cast<int>(input.size()) != input_dim) {
    throw std::invalid_argument("Mlp::forward: input dimension mismatch");
  }
  const double* w1 = params.data() + w1_offset();
  const double* b1 = params.data() + b1_offset();
  const double* w2 = params.data() + w2_offset();
  const double b2 = params[b2_offset()];

  double y = b2;
  for (int j = 0; j < hidden_dim; ++j) {
    double z = b1[j];
    for (int i = 0; i < input_dim; ++i) z += w1[j * input_dim + i] * input[i];
    y += w2[j] * std::tanh(z);
  }
  return apply_head(output_activation, y);
}

void Mlp::backward_into(std::span<const double> input, double upstream,
                        Backward& out) const {
  if (static_cast<int>(input.size()) != input_dim) {
    throw std::invalid_argument("Mlp::backward: input dimension mismatch");
  }
  out.param_grads.assign(param_count(), 0.0);
  out.input_grad.assign(input_dim, 0.0);

  const double* w1 = params.data() + w1_offset();
  const double* b1 = params.data() + b1_offset();
  const double* w2 = params.data() + w2_offset();
  const double b2 = params[b2_offset()];

  // Forward pass, keeping hidden activations on the stack-ish buffer.
  double y = b2;
  // hidden_dim is small (7 by default); a local vector is fine.
  thread_local std::vector<double> h;
  h.assign(hidden_dim, 0.0);
  for (int j = 0; j < hidden_dim; ++j) {
    double z = b1[j];
    for (int i = 0; i < input_dim; ++i) z += w1[j * input_dim + i] * input[i];
    h[j] = std::tanh(z);
    y += w2[j] * h[j];
  }

  const double gy = upstream * head_derivative(output_activation, y);

  double* gw1 = out.param_grads.data() + w1_offset();
  double* gb1 = out.param_grads.data() + b1_offset();
  double* gw2 = out.param_grads.data() + w2_offset();
  out.param_grads[b2_offset()] = gy;

  for (int j = 0; j < hidden_dim; ++j) {
    gw2[j] = gy * h[j];
    const double gz = gy * w2[j] * (1.0 - h[j] * h[j]);
    gb1[j] = gz;
    for (int i = 0; i < input_dim; ++i) {
      gw1[j * input_dim + i] = gz * input[i];
      out.input_grad[i] += gz * w1[j * input_dim + i];
    }
  }
}

Mlp::Backward Mlp::backward(std::span<const double> input, double upstream) const {
  Backward out;
  backward_into(input, upstream, out);
  return out;
}

Mlp make_mlp(int input_dim, int hidden_dim, OutputActivation activation,
             std::mt19937& rng, double init_range) {
  if (input_dim < 1 || hidden_dim < 1) {
    throw std::invalid_argument("make_mlp: dimensions must be >= 1");
  }
  Mlp net;
  net.input_dim = input_dim;
  net.hidden_dim = hidden_dim;
  net.output_activation = activation;
  net.params.resize(net.param_count());
  std::uniform_real_distribution<double> dist(-init_range, init_range);
  for (double& p : net.params) p = dist(rng);
  return net;
}

AdamState make_adam_state(int param_count) {
  AdamState s;
  s.m.assign(param_count, 0.0);
  s.v.assign(param_count, 0.0);
  return s;
}

void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               AdamState& opt, double lr) {
  if (params.size() != grads.size() || params.size() != opt.m.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  for (double g : grads) {
    if (!std::isfinite(g)) {
      throw std::invalid_argument("adam_step: non-finite gradient");
    }
  }
  ++opt.step_count;
  const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step_count));
  const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step_count));
  for (std::size_t i = 0; i < params.size(); ++i) {
    opt.m[i] = opt.beta1 * opt.m[i] + (1.0 - opt.beta1) * grads[i];
    opt.v[i] = opt.beta2 * opt.v[i] + (1.0 - opt.beta2) * grads[i] * grads[i];
    const double m_hat = opt.m[i] / bc1;
    const double v_hat = opt.v[i] / bc2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + opt.epsilon);
  }
}

} // namespace lyihdp
