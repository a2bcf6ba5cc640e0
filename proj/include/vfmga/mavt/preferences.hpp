#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vfmga/attributes/catalog.hpp"
#include "vfmga/attributes/evaluate.hpp"
#include "vfmga/mavt/value_function.hpp"

namespace vfmga::mavt {

inline constexpr double kDefaultGamma = 0.2;

/// Response to a hypothetical indifference statement implied by an additive model.
enum class Compensation { kAccepted, kRejected, kStronglyRejected };

/// All accepted -> 1 (additive), any strongly rejected -> 0 (geometric),
/// otherwise the low-compensation default. No answers give the default.
[[nodiscard]] double gamma_from_compensation(std::span<const Compensation> answers) noexcept;

/// Shape of one attribute's value function; the worst and best states come
/// from the impact ranges of the run it is applied to.
struct SavfSpec {
    Shape shape = Shape::kLinear;
    std::optional<double> curvature;  ///< exponential: fitted from `points` when absent
    std::vector<ValuePoint> points;   ///< elicited points in normalised coordinates
};

struct StakeholderPreferences {
    std::string id;
    std::map<std::string, double> weights;  ///< attribute -> weight, >= 0, summing to 1
    std::map<std::string, SavfSpec> value_functions;  ///< absent attributes are linear
    double gamma = kDefaultGamma;
    std::vector<std::string> notes;

    /// Weights non-negative and summing to 1 within 1e-9, gamma finite and >= 0.
    void validate() const;
    /// validate() plus: every named attribute exists in the catalog.
    void validate(const attributes::AttributeCatalog& catalog) const;
    /// Weights in catalog order; missing attributes weigh 0.
    [[nodiscard]] std::vector<double> weight_vector(const attributes::AttributeCatalog& catalog) const;
};

/// SWING weights. `ratings` lists attributes from most to least important;
/// the first is rated exactly 100, ratings never increase along the list,
/// and declined attributes are rated 0. Returns rating / sum of ratings.
[[nodiscard]] std::map<std::string, double> swing_weights(std::span<const std::pair<std::string, double>> ratings);

/// One value function per catalog attribute, spanning its impact range.
[[nodiscard]] std::vector<ValueFunction> resolve_value_functions(const StakeholderPreferences& prefs,
                                                                 const attributes::AttributeCatalog& catalog,
                                                                 std::span<const attributes::ImpactRange> ranges);

/// `{"stakeholders": [...]}`. Each stakeholder gives either `weights` or
/// SWING `ratings` (optionally with an explicit `order`), optional
/// `value_functions`, and either `gamma` or `compensation` answers.
[[nodiscard]] std::vector<StakeholderPreferences> preferences_from_json(const nlohmann::json& doc,
                                                                        const attributes::AttributeCatalog& catalog);
[[nodiscard]] std::vector<StakeholderPreferences> load_preferences(const std::string& path,
                                                                   const attributes::AttributeCatalog& catalog);
/// Canonical form: explicit weights, gamma, and value functions.
[[nodiscard]] nlohmann::json to_json(const StakeholderPreferences& prefs);
[[nodiscard]] nlohmann::json to_json(std::span<const StakeholderPreferences> prefs);

[[nodiscard]] std::string_view to_string(Compensation c) noexcept;
[[nodiscard]] Compensation parse_compensation(std::string_view name);

}  // namespace vfmga::mavt
