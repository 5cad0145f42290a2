#include "lyihdp/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace lyihdp {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  std::ostringstream os;
  os << "config line " << line << ": " << msg;
  throw std::invalid_argument(os.str());
}

double to_double(const std::string& raw, int line) {
  const std::string s = trim(raw);
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end || s.empty()) {
    fail(line, "expected a number, got '" + s + "'");
  }
  return value;
}

long to_long(const std::string& raw, int line) {
  const std::string s = trim(raw);
  long value = 0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end || s.empty()) {
    fail(line, "expected an integer, got '" + s + "'");
  }
  return value;
}

using DoubleField = std::function<double&(EpisodeConfig&)>;
using IntField = std::function<int&(AgentConfig&)>;

struct DoubleKey {
  const char* name;
  DoubleField field;
};

struct AgentDoubleKey {
  const char* name;
  std::function<double&(AgentConfig&)> field;
};

struct AgentIntKey {
  const char* name;
  IntField field;
};

const std::vector<DoubleKey>& double_keys() {
  static const std::vector<DoubleKey> keys = {
      {"duration", [](EpisodeConfig& c) -> double& { return c.duration; }},
      {"dt", [](EpisodeConfig& c) -> double& { return c.dt; }},
      {"plant.g", [](EpisodeConfig& c) -> double& { return c.plant.gravity; }},
      {"plant.weight", [](EpisodeConfig& c) -> double& { return c.plant.weight; }},
      {"plant.speed", [](EpisodeConfig& c) -> double& { return c.plant.speed; }},
      {"plant.iyy", [](EpisodeConfig& c) -> double& { return c.plant.pitch_inertia; }},
      {"plant.dyn_pressure", [](EpisodeConfig& c) -> double& { return c.plant.dyn_pressure; }},
      {"plant.ref_area", [](EpisodeConfig& c) -> double& { return c.plant.ref_area; }},
      {"plant.ref_diameter", [](EpisodeConfig& c) -> double& { return c.plant.ref_diameter; }},
      {"plant.b_z", [](EpisodeConfig& c) -> double& { return c.plant.b_z; }},
      {"plant.b_m", [](EpisodeConfig& c) -> double& { return c.plant.b_m; }},
      {"actuator.time_constant", [](EpisodeConfig& c) -> double& { return c.actuator.time_constant; }},
      {"actuator.rate_limit", [](EpisodeConfig& c) -> double& { return c.actuator.rate_limit; }},
      {"actuator.position_limit", [](EpisodeConfig& c) -> double& { return c.actuator.position_limit; }},
      {"reference.amplitude", [](EpisodeConfig& c) -> double& { return c.reference.amplitude; }},
      {"reference.period", [](EpisodeConfig& c) -> double& { return c.reference.period; }},
      {"filter.time_constant", [](EpisodeConfig& c) -> double& { return c.filter_time_constant; }},
  };
  return keys;
}

const std::vector<AgentDoubleKey>& agent_double_keys() {
  static const std::vector<AgentDoubleKey> keys = {
      {"critic_lr", [](AgentConfig& a) -> double& { return a.critic_lr; }},
      {"actor_lr", [](AgentConfig& a) -> double& { return a.actor_lr; }},
      {"gamma", [](AgentConfig& a) -> double& { return a.gamma; }},
      {"forgetting", [](AgentConfig& a) -> double& { return a.forgetting; }},
      {"error_weight", [](AgentConfig& a) -> double& { return a.error_weight; }},
      {"action_weight", [](AgentConfig& a) -> double& { return a.action_weight; }},
      {"smoothness_weight", [](AgentConfig& a) -> double& { return a.smoothness_weight; }},
      {"lambda", [](AgentConfig& a) -> double& { return a.lyapunov_weight; }},
      {"critic_loss_threshold", [](AgentConfig& a) -> double& { return a.critic_loss_threshold; }},
      {"action_limit", [](AgentConfig& a) -> double& { return a.action_limit; }},
      {"init_range", [](AgentConfig& a) -> double& { return a.init_range; }},
      {"rls_init_cov", [](AgentConfig& a) -> double& { return a.rls_init_cov; }},
      {"model_err_window", [](AgentConfig& a) -> double& { return a.model_err_window; }},
      {"eps_model", [](AgentConfig& a) -> double& { return a.eps_model; }},
  };
  return keys;
}

const std::vector<AgentIntKey>& agent_int_keys() {
  static const std::vector<AgentIntKey> keys = {
      {"policy_iterations", [](AgentConfig& a) -> int& { return a.policy_iterations; }},
      {"hidden", [](AgentConfig& a) -> int& { return a.hidden; }},
      {"max_update_steps", [](AgentConfig& a) -> int& { return a.max_update_steps; }},
  };
  return keys;
}

// Applies one key=value pair; returns false if the key is unknown.
bool apply_key(EpisodeConfig& cfg, const std::string& key,
               const std::string& value, int line) {
  if (key == "seed") {
    const long v = to_long(value, line);
    if (v < 0) fail(line, "seed must be >= 0");
    cfg.seed = static_cast<unsigned>(v);
    return true;
  }
  for (const auto& k : double_keys()) {
    if (key == k.name) {
      k.field(cfg) = to_double(value, line);
      return true;
    }
  }

  std::string agent_key = key;
  AgentConfig* targets[2] = {nullptr, nullptr};
  if (key.rfind("higher.", 0) == 0) {
    agent_key = key.substr(7);
    targets[0] = &cfg.higher;
  } else if (key.rfind("lower.", 0) == 0) {
    agent_key = key.substr(6);
    targets[0] = &cfg.lower;
  } else {
    targets[0] = &cfg.higher;
    targets[1] = &cfg.lower;
  }

  for (const auto& k : agent_double_keys()) {
    if (agent_key == k.name) {
      const double v = to_double(value, line);
      for (AgentConfig* a : targets) {
        if (a) k.field(*a) = v;
      }
      return true;
    }
  }
  for (const auto& k : agent_int_keys()) {
    if (agent_key == k.name) {
      const long v = to_long(value, line);
      for (AgentConfig* a : targets) {
        if (a) k.field(*a) = static_cast<int>(v);
      }
      return true;
    }
  }
  return false;
}

} // namespace

EpisodeConfig parse_config(const std::string& text) {
  EpisodeConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      fail(line, "malformed line (expected 'key = value'): '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(line, "missing key before '='");
    if (value.empty()) fail(line, "missing value after '='");
    if (!apply_key(cfg, key, value, line)) {
      fail(line, "unknown key '" + key + "'");
    }
  }
  cfg.finalize(); // derives per-agent fields, then range-validates
  return cfg;
}

EpisodeConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const EpisodeConfig& cfg_in) {
  EpisodeConfig cfg = cfg_in;
  std::ostringstream os;
  os.precision(17);
  os << "seed = " << cfg.seed << "\n";
  for (const auto& k : double_keys()) {
    os << k.name << " = " << k.field(cfg) << "\n";
  }
  const char* prefixes[2] = {"higher.", "lower."};
  AgentConfig* agents[2] = {&cfg.higher, &cfg.lower};
  for (int i = 0; i < 2; ++i) {
    for (const auto& k : agent_double_keys()) {
      os << prefixes[i] << k.name << " = " << k.field(*agents[i]) << "\n";
    }
    for (const auto& k : agent_int_keys()) {
      os << prefixes[i] << k.name << " = " << k.field(*agents[i]) << "\n";
    }
  }
  return os.str();
}

} // namespace lyihdp
