#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vfmga/esm/system_model.hpp"

namespace vfmga::attributes {

enum class Direction { kLowerBetter, kHigherBetter };
enum class Basis { kGeneration, kCapacity, kSystemic };

enum class Aggregation {
    kSum,                    ///< sum of coefficient x generation (or capacity)
    kDemandWeightedMean,     ///< sum of coefficient x generation / total generation
    kCapacityWeightedMean,   ///< expert scores weighted by capacity, clamped to the scale
    kShannon,                ///< entropy of annual generation shares
    kModelDirect,            ///< copied from the cost breakdown
};

/// Cost component read by model-direct attributes.
enum class CostComponent { kNone, kOperating, kInvestment };

enum class UncertaintyModel { kNone, kNormalRelative, kUniformSupport };

struct ScoreRange {
    double min = 0.0;
    double max = 0.0;
};

struct AttributeSpec {
    std::string id;
    std::string name;
    std::string unit;
    std::string objective;  ///< high-level objective the attribute measures
    Direction direction = Direction::kLowerBetter;
    Basis basis = Basis::kGeneration;
    Aggregation aggregation = Aggregation::kSum;
    CostComponent component = CostComponent::kNone;
    bool decomposable = true;
    UncertaintyModel uncertainty = UncertaintyModel::kNone;
    double relative_sd = 0.1;     ///< normal-relative only
    double envelope_sd = 2.0;     ///< half-width of the range in standard deviations
    std::optional<ScoreRange> scale;  ///< expert scale bounds, e.g. [1, 7]
};

struct AttributeCatalog {
    std::vector<AttributeSpec> attributes;
    /// attribute -> technology -> coefficient (per MWh or per MW, or the expert score).
    std::map<std::string, std::map<std::string, double>> coefficients;
    /// attribute -> technology -> expert score range.
    std::map<std::string, std::map<std::string, ScoreRange>> expert_ranges;
    /// attribute -> technology -> free-text source, e.g. "synthetic".
    std::map<std::string, std::map<std::string, std::string>> provenance;

    void validate() const;

    [[nodiscard]] const AttributeSpec& attribute(std::string_view id) const;
    [[nodiscard]] std::size_t index_of(std::string_view id) const;

    /// Per-technology contribution used for MGA group construction. Explicit
    /// coefficients win; model-direct cost attributes otherwise fall back to the
    /// technology's per-MWh operating cost or per-MW investment cost. Expert
    /// attributes without a coefficient use the midpoint of the score range.
    /// Throws ValidationError naming attribute and technology when absent.
    [[nodiscard]] double contribution(const AttributeSpec& attr, const esm::Technology& tech) const;

    /// Throws ValidationError when a technology of `model` lacks data for an attribute that needs it.
    void check_coverage(const esm::SystemModel& model) const;
};

[[nodiscard]] AttributeCatalog catalog_from_json(const nlohmann::json& doc);
[[nodiscard]] AttributeCatalog load_catalog(const std::filesystem::path& path);

[[nodiscard]] std::string_view to_string(Direction d) noexcept;
[[nodiscard]] std::string_view to_string(Basis b) noexcept;
[[nodiscard]] std::string_view to_string(Aggregation a) noexcept;
[[nodiscard]] std::string_view to_string(UncertaintyModel u) noexcept;

}  // namespace vfmga::attributes
