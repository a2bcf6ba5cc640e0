#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vfmga/attributes/evaluate.hpp"
#include "vfmga/mavt/preferences.hpp"

namespace vfmga::orchestrator {

enum class Phase { kSwingRanking, kSwingRating, kSavfBisection, kCompensation, kComplete };

[[nodiscard]] std::string_view to_string(Phase p) noexcept;

struct SessionSettings {
    /// Bisection questions per designated attribute; targets 0.5, 0.25, 0.75, 0.125, ...
    std::size_t bisection_depth = 3;
    std::size_t compensation_probes = 2;
};

/// Interview protocol for one stakeholder: rank order of the attribute
/// swings, SWING ratings, bisection on the most important attribute of each
/// objective, then compensation probes. Phases only move forward; a rejected
/// answer leaves the session unchanged.
class ElicitationSession {
public:
    /// `catalog` must outlive the session; `ranges` span the states asked about.
    ElicitationSession(std::string id, std::string stakeholder, const attributes::AttributeCatalog& catalog,
                       std::vector<attributes::ImpactRange> ranges, SessionSettings settings = {});

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] const std::string& stakeholder() const noexcept { return stakeholder_; }
    [[nodiscard]] Phase phase() const noexcept { return phase_; }
    [[nodiscard]] bool complete() const noexcept { return phase_ == Phase::kComplete; }

    /// Descriptor of the pending question. Throws Error once complete.
    [[nodiscard]] nlohmann::json question() const;
    /// Throws ValidationError for an answer that does not fit the pending question.
    void submit(const nlohmann::json& answer);

    /// Available once complete.
    [[nodiscard]] const std::optional<mavt::StakeholderPreferences>& preferences() const noexcept { return result_; }

    /// Identity, settings and the accepted answers; reloading replays them.
    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] static ElicitationSession from_json(const nlohmann::json& j, const attributes::AttributeCatalog& catalog,
                                                      std::vector<attributes::ImpactRange> ranges);

private:
    struct Elicited {
        double target = 0.0;
        double state = 0.0;
    };

    void accept_order(const nlohmann::json& answer);
    void accept_ratings(const nlohmann::json& answer);
    void accept_bisection(const nlohmann::json& answer);
    void accept_compensation(const nlohmann::json& answer);
    void enter_bisection();
    void enter_compensation();
    void finish();

    [[nodiscard]] double target(std::size_t step) const;
    [[nodiscard]] std::pair<double, double> bounds(std::size_t attribute, double t) const;
    [[nodiscard]] const attributes::AttributeSpec& spec(const std::string& attr) const;
    [[nodiscard]] std::size_t index(const std::string& attr) const;

    std::string id_;
    std::string stakeholder_;
    const attributes::AttributeCatalog* catalog_;
    std::vector<attributes::ImpactRange> ranges_;
    SessionSettings settings_;
    Phase phase_ = Phase::kSwingRanking;
    nlohmann::json answers_ = nlohmann::json::array();

    std::vector<std::string> order_;
    std::vector<std::pair<std::string, double>> ratings_;
    std::map<std::string, double> weights_;
    std::vector<std::string> designated_;  ///< bisection attributes, in question order
    std::size_t current_ = 0;              ///< index into designated_
    std::vector<std::vector<Elicited>> elicited_;
    std::vector<std::pair<std::string, std::string>> probes_;
    std::vector<mavt::Compensation> responses_;
    std::optional<mavt::StakeholderPreferences> result_;
};

}  // namespace vfmga::orchestrator
