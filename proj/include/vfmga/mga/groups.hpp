#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vfmga/attributes/catalog.hpp"
#include "vfmga/esm/system_model.hpp"

namespace vfmga::mga {

enum class GroupKind { kDriver, kAvoider, kBenchmark };
enum class Dimension { kGeneration, kCapacity };
enum class Strategy { kContributionBased, kDomainBalanced, kBenchmark };

struct MgaGroup {
    std::string id;  ///< e.g. "cb:pef:driver", "db:fte:avoider", "tb:EP"
    GroupKind kind = GroupKind::kBenchmark;
    std::optional<std::string> attribute;
    Dimension dimension = Dimension::kGeneration;
    std::vector<std::string> members;  ///< technology ids, model order
    Strategy strategy = Strategy::kBenchmark;
};

struct GroupingConfig {
    /// Members must jointly be able to supply this share of total annual demand.
    double relevance_threshold = 0.2;
    /// Per-sector share of sectoral demand for the domain-balanced strategy;
    /// sectors not listed need only one technology.
    std::map<std::string, double> sector_thresholds{{"heat", 0.4}};
    /// Contributions within this relative difference are tied and enter together.
    double tie_tolerance = 0.01;
    std::size_t min_members = 2;
    /// The avoider group is dropped when fewer technologies than this carry a
    /// nonzero contribution: it would be nothing but the non-contributors.
    std::size_t avoider_min_contributors = 3;
};

/// Attribute-based groups for one strategy (driver then avoider per decomposable
/// attribute, catalog order), or one singleton generation group per technology
/// for Strategy::kBenchmark. Throws ValidationError when a decomposable
/// attribute has no contribution data.
[[nodiscard]] std::vector<MgaGroup> construct_groups(const attributes::AttributeCatalog& catalog,
                                                     const esm::SystemModel& model, Strategy strategy,
                                                     const GroupingConfig& config = {});

[[nodiscard]] std::string_view to_string(GroupKind k) noexcept;
[[nodiscard]] std::string_view to_string(Dimension d) noexcept;
[[nodiscard]] std::string_view to_string(Strategy s) noexcept;
[[nodiscard]] std::string_view strategy_prefix(Strategy s) noexcept;
[[nodiscard]] Strategy parse_strategy(std::string_view name);

}  // namespace vfmga::mga
