#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vfmga/attributes/catalog.hpp"
#include "vfmga/execution.hpp"
#include "vfmga/mga/alternative.hpp"

namespace vfmga::attributes {

struct AttributeValue {
    double mean = 0.0;
    double low = 0.0;
    double high = 0.0;
};

/// Attribute values of one alternative, in catalog order.
struct AttributeProfile {
    std::string alternative;
    std::vector<AttributeValue> values;
};

/// Worst and best attainable value of one attribute, oriented by its direction.
struct ImpactRange {
    double worst = 0.0;
    double best = 0.0;
};

/// Throws ValidationError naming attribute and technology when a coefficient is missing.
[[nodiscard]] AttributeProfile evaluate(const mga::Alternative& alt, const AttributeCatalog& catalog,
                                        const esm::SystemModel& model);

/// Output order follows `alts`.
[[nodiscard]] std::vector<AttributeProfile> evaluate_all(std::span<const mga::Alternative> alts,
                                                         const AttributeCatalog& catalog,
                                                         const esm::SystemModel& model,
                                                         Execution exec = Execution::kParallel);

/// -sum s ln s over positive shares. Throws ValidationError unless the shares
/// are non-negative and sum to 1 within 1e-9.
[[nodiscard]] double shannon_index(std::span<const double> shares);

/// Per attribute, the envelope of every profile's [low, high]. Throws on an empty list.
[[nodiscard]] std::vector<ImpactRange> impact_ranges(std::span<const AttributeProfile> profiles,
                                                     const AttributeCatalog& catalog);

/// One row per alternative; columns `<attr>_mean,<attr>_low,<attr>_high` in catalog order.
/// Numbers use the shortest form that reads back to the same double.
void write_profiles_csv(std::ostream& out, std::span<const AttributeProfile> profiles,
                        const AttributeCatalog& catalog);

}  // namespace vfmga::attributes
