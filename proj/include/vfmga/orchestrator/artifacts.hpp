#pragma once

#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "vfmga/attributes/evaluate.hpp"
#include "vfmga/mga/engine.hpp"

// Serialisation of the files a run directory holds.
namespace vfmga::orchestrator {

[[nodiscard]] nlohmann::json groups_json(std::span<const mga::MgaGroup> groups,
                                         std::span<const mga::WeightVector> vectors);

/// Per-technology vectors are arrays in the order of `technologies`.
[[nodiscard]] nlohmann::json alternatives_json(const mga::SweepResult& sweep, const esm::SystemModel& model);
/// Reads the alternatives back. Throws ValidationError when the technology
/// list differs from `model` or an entry is malformed.
[[nodiscard]] std::vector<mga::Alternative> alternatives_from_json(const nlohmann::json& j, const esm::SystemModel& model);

/// `alternative,total,invest,fixed_om,variable_om,fuel,auxiliary,slack_used`.
void write_costs_csv(std::ostream& out, std::span<const mga::Alternative> alternatives);

[[nodiscard]] nlohmann::json ranges_json(const attributes::AttributeCatalog& catalog,
                                         std::span<const attributes::ImpactRange> ranges);
[[nodiscard]] std::vector<attributes::ImpactRange> ranges_from_json(const nlohmann::json& j,
                                                                    const attributes::AttributeCatalog& catalog);

/// Inverse of attributes::write_profiles_csv. Throws ValidationError on a
/// header that does not match the catalog or a malformed row.
[[nodiscard]] std::vector<attributes::AttributeProfile> read_profiles_csv(std::istream& in,
                                                                          const attributes::AttributeCatalog& catalog);

/// Writes via a temporary file and rename, so readers never see a partial file.
void write_file(const std::filesystem::path& path, std::string_view content);
[[nodiscard]] std::string dump(const nlohmann::json& j);

}  // namespace vfmga::orchestrator
