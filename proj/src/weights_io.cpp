#include "lyihdp/weights_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace lyihdp {

namespace {

using nlohmann::json;

const char* head_name(OutputActivation a) {
  switch (a) {
    case OutputActivation::Identity: return "identity";
    case OutputActivation::Tanh: return "tanh";
    case OutputActivation::Abs: return "abs";
  }
  return "identity";
}

OutputActivation head_from_name(const std::string& s) {
  if (s == "identity") return OutputActivation::Identity;
  if (s == "tanh") return OutputActivation::Tanh;
  if (s == "abs") return OutputActivation::Abs;
  throw std::runtime_error("weights: unknown activation '" + s + "'");
}

json net_to_json(const Mlp& net) {
  return json{{"input_dim", net.input_dim},
              {"hidden_dim", net.hidden_dim},
              {"activation", head_name(net.output_activation)},
              {"params", net.params}};
}

Mlp net_from_json(const json& j) {
  Mlp net;
  net.input_dim = j.at("input_dim").get<int>();
  net.hidden_dim = j.at("hidden_dim").get<int>();
  net.output_activation = head_from_name(j.at("activation").get<std::string>());
  net.params = j.at("params").get<std::vector<double>>();
  if (static_cast<int>(net.params.size()) != net.param_count()) {
    throw std::runtime_error("weights: parameter count mismatch");
  }
  return net;
}

json loop_to_json(const LoopSnapshot& s) {
  return json{{"critic", net_to_json(s.critic)},
              {"actor", net_to_json(s.actor)},
              {"action_limit", s.action_limit},
              {"model_f", s.model_f},
              {"model_g", s.model_g},
              {"model_err", s.model_err}};
}

LoopSnapshot loop_from_json(const json& j) {
  LoopSnapshot s;
  s.critic = net_from_json(j.at("critic"));
  s.actor = net_from_json(j.at("actor"));
  s.action_limit = j.at("action_limit").get<double>();
  s.model_f = j.at("model_f").get<double>();
  s.model_g = j.at("model_g").get<double>();
  s.model_err = j.at("model_err").get<double>();
  return s;
}

LoopSnapshot snapshot_loop(const Agent& agent) {
  LoopSnapshot s;
  s.critic = agent.critic();
  s.actor = agent.actor();
  s.action_limit = agent.config().action_limit;
  s.model_f = agent.model().f_hat;
  s.model_g = agent.model().g_hat;
  s.model_err = agent.worst_pred_err();
  return s;
}

} // namespace

WeightsSnapshot snapshot_from_result(const EpisodeResult& result, double dt) {
  if (!result.higher || !result.lower) {
    throw std::runtime_error("snapshot_from_result: missing agent state");
  }
  WeightsSnapshot w;
  w.dt = dt;
  w.higher = snapshot_loop(*result.higher);
  w.lower = snapshot_loop(*result.lower);
  return w;
}

void save_weights(const WeightsSnapshot& w, const std::string& path) {
  json j{{"version", 1},
         {"dt", w.dt},
         {"higher", loop_to_json(w.higher)},
         {"lower", loop_to_json(w.lower)}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_weights: cannot open " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("save_weights: write failed " + path);
}

WeightsSnapshot load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_weights: cannot open " + path);
  json j = json::parse(in);
  WeightsSnapshot w;
  w.dt = j.at("dt").get<double>();
  w.higher = loop_from_json(j.at("higher"));
  w.lower = loop_from_json(j.at("lower"));
  return w;
}

} // namespace lyihdp
