#pragma once

#include <filesystem>
#include <json.hpp>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "vfmga/execution.hpp"
#include "vfmga/mavt/analysis.hpp"
#include "vfmga/mavt/scoring.hpp"
#include "vfmga/orchestrator/config.hpp"
#include "vfmga/orchestrator/session.hpp"

namespace vfmga::orchestrator {

/// What the API serves, rebuilt from a finished run directory.
struct RunData {
    esm::SystemModel model;
    attributes::AttributeCatalog catalog;
    std::vector<mga::Alternative> alternatives;
    std::vector<attributes::AttributeProfile> profiles;
    std::vector<attributes::ImpactRange> ranges;
    std::vector<mavt::StakeholderPreferences> preferences;
    mavt::AnalysisConfig analysis;
};

/// The system comes from the run configuration, everything else from the
/// evaluate-stage artifacts in `run_dir`; preferences.json is optional.
[[nodiscard]] RunData load_run(const RunConfig& config, const std::filesystem::path& run_dir);

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/// Transport-free request handler. Sessions live in `<run_dir>/sessions`;
/// preferences from completed sessions join the stakeholder set, replacing
/// any stakeholder with the same id. Safe to call from several threads.
class ApiService {
public:
    ApiService(RunData data, std::filesystem::path run_dir, Execution exec = Execution::kParallel);

    [[nodiscard]] ApiResponse handle(std::string_view method, std::string_view path,
                                     const std::map<std::string, std::string>& query, std::string_view body);

private:
    struct SessionEntry {
        std::mutex mutex;
        ElicitationSession session;
    };

    ApiResponse healthz();
    ApiResponse create_session(const nlohmann::json& body);
    ApiResponse session_status(const std::string& id);
    ApiResponse session_question(const std::string& id);
    ApiResponse session_answer(const std::string& id, const nlohmann::json& body);
    ApiResponse alternatives(const std::map<std::string, std::string>& query);
    ApiResponse ranking(const std::string& stakeholder);
    ApiResponse classification();
    ApiResponse clustering();
    ApiResponse whatif(const nlohmann::json& body);

    SessionEntry& entry(const std::string& id);
    void persist(const ElicitationSession& s) const;
    void adopt(const mavt::StakeholderPreferences& prefs);  ///< caller holds state_mutex_
    void refresh();                                          ///< caller holds state_mutex_
    [[nodiscard]] std::size_t stakeholder_index(const std::string& id) const;

    RunData data_;
    std::filesystem::path run_dir_;
    Execution exec_;

    std::mutex state_mutex_;
    std::vector<mavt::Ranking> rankings_;
    std::optional<nlohmann::json> classification_;

    std::mutex sessions_mutex_;
    std::map<std::string, std::unique_ptr<SessionEntry>> sessions_;
    std::size_t next_session_ = 1;
};

}  // namespace vfmga::orchestrator
