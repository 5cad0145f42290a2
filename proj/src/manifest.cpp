#include "lyihdp/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lyihdp {

void write_manifest(const RunManifest& m, const std::string& path) {
  std::ostringstream os;
  os << "status: " << m.status << "\n";
  if (!m.detail.empty()) os << "detail: " << m.detail << "\n";
  os << "version: " << kVersion << "\n";
  os << "seed: " << m.seed << "\n";
  os << "wall_seconds: " << m.wall_seconds << "\n";
  os << "out_of_fit_range_steps: " << m.out_of_fit_range_steps << "\n";
  os << "outputs:";
  for (const std::string& o : m.outputs) os << " " << o;
  os << "\n";
  os << "config:\n";
  std::istringstream cfg(m.config_snapshot);
  std::string line;
  while (std::getline(cfg, line)) os << "  " << line << "\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
  out << os.str();
  if (!out) throw std::runtime_error("write_manifest: write failed " + path);
}

} // namespace lyihdp
