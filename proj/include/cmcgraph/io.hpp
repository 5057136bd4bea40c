// Serialization of fields, outcomes, reports and predicates; atomic file
// output with JSON metadata sidecars.
#pragma once

#include "cmcgraph/catalog.hpp"
#include "cmcgraph/estimates.hpp"
#include "cmcgraph/solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace cmc::io {

inline constexpr const char* kToolVersion = "0.1.0";

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Writes to a temporary sibling and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Writes `path` and `path.meta.json` carrying grid, config hash and version.
void write_with_metadata(const std::filesystem::path& path, const std::string& content, const nlohmann::json& meta);

nlohmann::json grid_json(const Grid& grid);
nlohmann::json metadata(const nlohmann::json& grid, const std::string& config_hash);

/// CSV with header x,y,u: every unknown, then every boundary point.
std::string field_csv(const Grid& grid, const Field& field);

nlohmann::json to_json(const StepRecord& r);
nlohmann::json to_json(const IterationRecord& r);
nlohmann::json to_json(const SolveOutcome& o);
/// One JSON object per line: "step" records and "iteration" records.
std::string diagnostics_jsonl(const SolveOutcome& o);

nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const EstimateReport& r);
nlohmann::json to_json(const SolvabilityReport& r);
nlohmann::json to_json(const RotationalProfile& p);

}  // namespace cmc::io
