#pragma once

#include <iosfwd>
#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "vfmga/esm/system_model.hpp"
#include "vfmga/mavt/scoring.hpp"
#include "vfmga/mga/alternative.hpp"

namespace vfmga::mavt {

struct AnalysisConfig {
    double top_fraction = 0.1;
    /// A technology is present when its annual generation exceeds this share of its sector's annual demand.
    double presence_threshold = 1e-3;
};

/// floor(q * n). Throws ValidationError unless 0 < q <= 1 and the result is at least 1.
[[nodiscard]] std::size_t top_count(std::size_t n, double q);

[[nodiscard]] bool is_present(const esm::SystemModel& model, const mga::Alternative& alt, std::size_t tech,
                              double threshold);

enum class TechClass { kMustHave, kRealChoice, kMustAvoid };

struct GenerationRange {
    double min = 0.0;
    double max = 0.0;
    [[nodiscard]] double span() const noexcept { return max - min; }
};

/// 1 - narrowed span / full span; 0 when the full span is empty.
[[nodiscard]] double range_reduction(GenerationRange full, GenerationRange narrowed) noexcept;

struct TechnologyClassification {
    std::string technology;
    TechClass full = TechClass::kRealChoice;           ///< over every alternative
    TechClass value_focused = TechClass::kRealChoice;  ///< over the union of the top sets
    GenerationRange full_range;
    GenerationRange top_range;  ///< union of all stakeholders' top sets
    double range_reduction = 0.0;
    std::vector<GenerationRange> stakeholder_ranges;  ///< per ranking, input order
    std::vector<double> stakeholder_reduction;
};

struct Classification {
    AnalysisConfig config;
    std::size_t top_count = 0;
    std::vector<std::string> stakeholders;
    std::vector<std::vector<std::string>> top_sets;  ///< per stakeholder
    std::vector<TechnologyClassification> technologies;  ///< model order
};

/// Rankings must cover exactly the given alternatives. Throws ValidationError
/// for no rankings or a top set smaller than one alternative.
[[nodiscard]] Classification classify_technologies(const esm::SystemModel& model,
                                                   std::span<const mga::Alternative> alternatives,
                                                   std::span<const Ranking> rankings, const AnalysisConfig& config = {});

struct OccurrenceTable {
    std::vector<std::string> stakeholders;
    std::vector<std::string> technologies;
    std::vector<std::vector<double>> frequency;  ///< [stakeholder][technology], share of the top set
};

[[nodiscard]] OccurrenceTable occurrence_frequency(const esm::SystemModel& model,
                                                   std::span<const mga::Alternative> alternatives,
                                                   std::span<const Ranking> rankings,
                                                   const AnalysisConfig& config = {});

/// Ascending ranks starting at 1, ties receiving the mean of their positions.
[[nodiscard]] std::vector<double> average_ranks(std::span<const double> x);
/// Pearson correlation of the average ranks. A constant input correlates 0 with anything.
[[nodiscard]] double spearman(std::span<const double> a, std::span<const double> b);

/// Clusters are numbered as in SciPy: leaves 0..n-1, the i-th merge creates n + i.
struct Merge {
    std::size_t left = 0;   ///< smaller cluster id
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;
};

struct Dendrogram {
    std::vector<std::string> leaves;
    std::vector<std::vector<double>> distance;  ///< 1 - Spearman rho between stakeholders
    std::vector<Merge> merges;
    std::vector<std::size_t> leaf_order;  ///< left-to-right order of the drawn tree
};

/// Average linkage on 1 - rho of the rank vectors. Equal distances merge the
/// pair with the lowest cluster ids first. Throws ValidationError for fewer
/// than two rankings or rankings over different alternatives.
[[nodiscard]] Dendrogram cluster_stakeholders(std::span<const Ranking> rankings);

/// Average-linkage merge tree for any symmetric distance matrix.
[[nodiscard]] std::vector<Merge> average_linkage(std::vector<std::vector<double>> distance);

/// Alternatives ordered by mean rank over the stakeholders, then id.
[[nodiscard]] std::vector<std::string> mean_rank_order(std::span<const Ranking> rankings);

/// Share of alternative pairs ordered oppositely by the two rankings; pairs
/// tied in either ranking are not discordant.
[[nodiscard]] double kendall_distance(const Ranking& a, const Ranking& b);

struct SensitivitySpec {
    std::vector<double> gammas;  ///< replace the stakeholder's gamma
    double weight_delta = 0.0;   ///< add +/- delta to each weight in turn, then renormalise
    std::vector<std::string> tracked;  ///< alternatives whose rank is reported
};

struct SensitivityRow {
    std::string stakeholder;
    std::string perturbation;  ///< "baseline", "gamma", "weight+" or "weight-"
    std::string attribute;     ///< perturbed attribute of weight rows
    double gamma = 0.0;
    double delta = 0.0;
    double kendall_distance = 0.0;  ///< to the stakeholder's baseline ranking
    std::string top_alternative;
    std::vector<std::size_t> tracked_ranks;
};

[[nodiscard]] std::vector<SensitivityRow> sensitivity(std::span<const StakeholderPreferences> prefs,
                                                      std::span<const attributes::AttributeProfile> profiles,
                                                      const attributes::AttributeCatalog& catalog,
                                                      std::span<const attributes::ImpactRange> ranges,
                                                      const SensitivitySpec& spec,
                                                      Execution exec = Execution::kParallel);

void write_sensitivity_csv(std::ostream& out, std::span<const SensitivityRow> rows, const SensitivitySpec& spec);

[[nodiscard]] nlohmann::json to_json(const Classification& c, const OccurrenceTable& occurrence);
[[nodiscard]] nlohmann::json to_json(const Dendrogram& d, std::span<const std::string> alternative_order);

[[nodiscard]] std::string_view to_string(TechClass c) noexcept;

}  // namespace vfmga::mavt
