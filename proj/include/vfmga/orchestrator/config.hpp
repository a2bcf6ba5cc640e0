#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <vector>

#include "vfmga/mavt/analysis.hpp"
#include "vfmga/mga/engine.hpp"

namespace vfmga::orchestrator {

struct MgaConfig {
    std::vector<double> slacks{0.01, 0.05, 0.10, 0.20, 0.30};
    std::vector<mga::Strategy> strategies{mga::Strategy::kBenchmark, mga::Strategy::kContributionBased,
                                          mga::Strategy::kDomainBalanced};
    std::vector<mga::Scheme> schemes{mga::Scheme::kExtreme, mga::Scheme::kMultiExtreme};
    mga::GroupingConfig grouping;
    double rho = 1e-4;
    double dedup_tolerance = 1e-6;
    bool warm_start = true;
};

struct RunConfig {
    std::filesystem::path system;
    std::filesystem::path catalog;
    std::optional<std::filesystem::path> preferences;  ///< absent: stop after evaluation
    MgaConfig mga;
    mavt::AnalysisConfig analysis;
    mavt::SensitivitySpec sensitivity{{0.0, 0.2, 1.0}, 0.05, {"A0000"}};
};

/// `{"slacks", "strategies", "schemes", "rho", "dedup_tolerance", "warm_start", "grouping": {...}}`, all optional.
[[nodiscard]] MgaConfig mga_config_from_json(const nlohmann::json& j, std::string_view path = "$");

/// `{"system", "catalog", "preferences"?, "mga": object or file, "analysis"?}`.
/// Relative paths resolve against `base_dir`.
[[nodiscard]] RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);

/// Settings only; input files are recorded separately by digest.
[[nodiscard]] nlohmann::json to_json(const MgaConfig& c);
[[nodiscard]] nlohmann::json settings_json(const RunConfig& c);

}  // namespace vfmga::orchestrator
