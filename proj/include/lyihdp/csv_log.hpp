#pragma once

#include <string>
#include <vector>

#include "lyihdp/cascade.hpp"

namespace lyihdp {

// Fixed column order of steps.csv; one row per control step.
const std::vector<std::string>& step_csv_columns();

// Writes header + rows, 17 significant digits (exact double round-trip).
// Identical logs produce byte-identical files.
void emit_csv(const std::vector<StepLog>& log, const std::string& path);

std::string steps_csv_text(const std::vector<StepLog>& log);

// Reads a file produced by emit_csv. Throws std::runtime_error on a header
// mismatch or malformed row.
std::vector<StepLog> read_csv(const std::string& path);

} // namespace lyihdp
