#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include <json.hpp>

#include "elmpc/sim/summary.hpp"

namespace elmpc::sim {

inline constexpr int kLogSchemaVersion = 1;

/// Column names of the per-cycle log, in order.
const std::vector<std::string>& log_columns();

/// "#schema_version=1", the header row, then one row per cycle. Doubles are
/// written in shortest round-trip form; absent values are empty fields.
void write_log_csv(std::ostream& out, const RunLog& log);

/// Wall-clock measurements: one row per cycle with the MPC and IDT times.
void write_timing_csv(std::ostream& out, const RunLog& log);

nlohmann::json summary_to_json(const RunSummary& s);

/// Summary plus the resolved scenario, configs, seed and baseline.
nlohmann::json run_document(const RunLog& log, const RunSummary& s);

/// Both summaries and the EL-on minus EL-off deltas.
nlohmann::json comparison_to_json(const Comparison& c);

/// Writes text to a file, creating parent directories. Throws Error on failure.
void write_file(const std::filesystem::path& path, const std::string& text);

std::string format_double(double v);

}  // namespace elmpc::sim
