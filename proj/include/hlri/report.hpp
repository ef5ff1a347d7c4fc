#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "hlri/engine.hpp"
#include "hlri/repair_types.hpp"

namespace hlri {

/// Shortest round-trip decimal form, '.' separator, independent of locale.
std::string format_number(double value);

nlohmann::json to_json(const SearchRegion& region);
nlohmann::json to_json(const RunReport& report, const RunConfig& config);
nlohmann::json regions_to_json(const RunReport& report);

/// t,stage,best_fitness,best_beta,region_diameter,distinct_fraction,evaluations
std::string history_csv(const RunReport& report);

/// k,beta,g,delta_beta,delta_max
std::string trace_csv(const RepairOutcome& outcome);

/// Writes to a sibling temporary file and renames it into place, so readers
/// see either the complete file or none.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace hlri
