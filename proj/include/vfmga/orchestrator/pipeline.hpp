#pragma once

#include <filesystem>
#include <functional>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vfmga/orchestrator/config.hpp"

namespace vfmga::orchestrator {

enum class Stage { kOptimize, kGroups, kGenerate, kEvaluate, kRank, kAnalyse };

[[nodiscard]] std::string_view to_string(Stage s) noexcept;
[[nodiscard]] Stage parse_stage(std::string_view name);

struct StageRecord {
    Stage stage = Stage::kOptimize;
    std::string started;  ///< UTC, ISO 8601
    double seconds = 0.0;
};

struct RunManifest {
    std::string run_id;  ///< derived from input digests and settings
    nlohmann::json inputs = nlohmann::json::object();  ///< role -> {file, sha256}
    nlohmann::json settings;
    std::vector<StageRecord> stages;
    nlohmann::json counts = nlohmann::json::object();
    std::map<std::string, std::string> artifacts;  ///< file name -> sha256
    std::optional<std::string> stopped;            ///< why the run ended before the analysis stage

    [[nodiscard]] nlohmann::json to_json() const;
};

struct PipelineOptions {
    Stage last = Stage::kAnalyse;
    Execution exec = Execution::kParallel;
    std::function<void(const std::string&)> log;
};

/// Everything the run produced, in memory. Members past the last executed stage stay empty.
struct PipelineResult {
    RunManifest manifest;
    esm::SystemModel model;
    attributes::AttributeCatalog catalog;
    std::optional<mga::MgaContext> context;
    std::vector<mga::MgaGroup> groups;
    std::vector<mga::WeightVector> vectors;
    mga::SweepResult sweep;
    std::vector<attributes::AttributeProfile> profiles;
    std::vector<attributes::ImpactRange> ranges;
    std::vector<mavt::StakeholderPreferences> preferences;
    std::vector<mavt::Ranking> rankings;
    std::optional<mavt::Classification> classification;
    mavt::OccurrenceTable occurrence;
    std::optional<mavt::Dendrogram> dendrogram;
    std::vector<mavt::SensitivityRow> sensitivity;
};

/// Runs the stages in order up to `options.last`, writing each stage's
/// artifacts under `out_dir` and finally manifest.json. Without stakeholder
/// preferences the run stops after evaluation. Identical inputs give
/// byte-identical artifacts; only the manifest's stage timings differ.
PipelineResult run_pipeline(const RunConfig& config, const std::filesystem::path& out_dir,
                            const PipelineOptions& options = {});

}  // namespace vfmga::orchestrator
