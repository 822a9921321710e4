#pragma once

#include "geim/analysis.hpp"
#include "geim/greedy.hpp"
#include "geim/rates.hpp"
#include "geim_app/format.hpp"

#include <filesystem>
#include <string>

namespace geim::app {

inline constexpr int kArtifactVersion = 1;

/// Greedy output as JSON text. Loading and saving again reproduces the
/// text byte for byte.
std::string artifact_to_string(const GreedyResult& result);
GreedyResult artifact_from_string(const std::string& text, const std::string& origin = "<artifact>");

void save_artifact(const GreedyResult& result, const std::filesystem::path& path);
GreedyResult load_artifact(const std::filesystem::path& path);

Json grid_to_json(const Grid& grid);
GridPtr grid_from_json(const nlohmann::json& j);

/// Full analysis report, including the grid, for a later audit.
std::string report_to_string(const AnalysisReport& report);
AnalysisReport report_from_string(const std::string& text, const std::string& origin = "<analysis>");

Json audit_to_json(const RateAudit& audit);
/// Fixed-width text table of every check and the summary counts.
std::string audit_table(const RateAudit& audit);

}  // namespace geim::app
