#pragma once

#include <string>

#include "lyihdp/cascade.hpp"

namespace lyihdp {

// Parses the flat `key = value` config format (# starts a comment). Unset
// keys keep their defaults; unknown keys, malformed lines, and type or range
// errors throw std::invalid_argument with the offending line number.
//
// Agent keys may be written bare (applies to both loops) or prefixed with
// `higher.` / `lower.`.
EpisodeConfig parse_config(const std::string& text);

EpisodeConfig parse_config_file(const std::string& path);

// Canonical `key = value` rendering of the full effective config; parsing it
// back reproduces the same config.
std::string serialize_config(const EpisodeConfig& cfg);

} // namespace lyihdp
