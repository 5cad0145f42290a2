#include "lyihdp/csv_log.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lyihdp {

namespace {

struct Column {
  const char* name;
  double StepLog::* field;
};

const std::vector<Column>& columns() {
  static const std::vector<Column> cols = {
      {"t", &StepLog::t},
      {"alpha_ref", &StepLog::alpha_ref},
      {"alpha", &StepLog::alpha},
      {"e_alpha", &StepLog::e_alpha},
      {"q_ref_raw", &StepLog::q_ref_raw},
      {"q_ref_filtered", &StepLog::q_ref_filtered},
      {"q", &StepLog::q},
      {"e_q", &StepLog::e_q},
      {"delta_cmd", &StepLog::delta_cmd},
      {"delta", &StepLog::delta},
      {"v1", &StepLog::v1},
      {"dv1", &StepLog::dv1},
      {"v2", &StepLog::v2},
      {"dv2", &StepLog::dv2},
      {"critic_loss1", &StepLog::critic_loss1},
      {"actor_loss1", &StepLog::actor_loss1},
      {"actor_cost1", &StepLog::actor_cost1},
      {"actor_gamma_v1", &StepLog::actor_gamma_v1},
      {"actor_lambda_v1", &StepLog::actor_lambda_v1},
      {"actor_smooth1", &StepLog::actor_smooth1},
      {"critic_loss2", &StepLog::critic_loss2},
      {"actor_loss2", &StepLog::actor_loss2},
      {"actor_cost2", &StepLog::actor_cost2},
      {"actor_gamma_v2", &StepLog::actor_gamma_v2},
      {"actor_lambda_v2", &StepLog::actor_lambda_v2},
      {"actor_smooth2", &StepLog::actor_smooth2},
      {"model_f1", &StepLog::model_f1},
      {"model_g1", &StepLog::model_g1},
      {"model_err1", &StepLog::model_err1},
      {"model_f2", &StepLog::model_f2},
      {"model_g2", &StepLog::model_g2},
      {"model_err2", &StepLog::model_err2},
  };
  return cols;
}

} // namespace

const std::vector<std::string>& step_csv_columns() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const Column& c : columns()) n.emplace_back(c.name);
    return n;
  }();
  return names;
}

std::string steps_csv_text(const std::vector<StepLog>& log) {
  std::string out;
  out.reserve(64 + log.size() * 640);
  const auto& cols = columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out.push_back(',');
    out += cols[i].name;
  }
  out.push_back('\n');
  char buf[64];
  for (const StepLog& row : log) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out.push_back(',');
      std::snprintf(buf, sizeof(buf), "%.17g", row.*(cols[i].field));
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

void emit_csv(const std::vector<StepLog>& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  out << steps_csv_text(log);
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

std::vector<StepLog> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_csv: missing header in " + path);
  }
  {
    std::string expected;
    const auto& cols = columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) expected.push_back(',');
      expected += cols[i].name;
    }
    if (line != expected) {
      throw std::runtime_error("read_csv: header mismatch in " + path);
    }
  }
  std::vector<StepLog> log;
  const auto& cols = columns();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    StepLog row;
    const char* p = line.c_str();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(p, &end);
      if (end == p) {
        std::ostringstream os;
        os << "read_csv: bad value at line " << line_no << ", column "
           << cols[i].name;
        throw std::runtime_error(os.str());
      }
      row.*(cols[i].field) = v;
      p = end;
      if (i + 1 < cols.size()) {
        if (*p != ',') {
          std::ostringstream os;
          os << "read_csv: expected ',' at line " << line_no << ", column "
             << cols[i].name;
          throw std::runtime_error(os.str());
        }
        ++p;
      }
    }
    log.push_back(row);
  }
  return log;
}

} // namespace lyihdp
