#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vfmga/attributes/evaluate.hpp"
#include "vfmga/execution.hpp"
#include "vfmga/mavt/preferences.hpp"

namespace vfmga::mavt {

/// Weighted power mean (sum w v^gamma)^(1/gamma); gamma = 0 is the weighted
/// geometric mean prod v^w, which is 0 when some v = 0 carries weight.
/// Throws ValidationError for gamma < 0, negative values, or mismatched sizes.
[[nodiscard]] double aggregate(std::span<const double> values, std::span<const double> weights, double gamma);

/// Overall value of attribute profiles for one stakeholder, evaluated on the attribute means.
class Scorer {
public:
    Scorer(const StakeholderPreferences& prefs, const attributes::AttributeCatalog& catalog,
           std::span<const attributes::ImpactRange> ranges);

    [[nodiscard]] double operator()(const attributes::AttributeProfile& profile) const;
    /// Single-attribute values v_j in catalog order.
    [[nodiscard]] std::vector<double> values(const attributes::AttributeProfile& profile) const;

    [[nodiscard]] const std::vector<ValueFunction>& value_functions() const noexcept { return functions_; }
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
    [[nodiscard]] double gamma() const noexcept { return gamma_; }

private:
    std::vector<ValueFunction> functions_;
    std::vector<double> weights_;
    double gamma_;
};

struct RankedAlternative {
    std::string alternative;
    double value = 0.0;
    std::size_t rank = 0;  ///< 1 is best; equal values share the lowest rank
};

struct Ranking {
    std::string stakeholder;
    std::vector<RankedAlternative> entries;  ///< by value descending, then alternative id

    /// Throws ValidationError for an unknown alternative.
    [[nodiscard]] std::size_t rank_of(std::string_view alternative) const;
    /// Alternatives grouped by shared rank, best first.
    [[nodiscard]] std::vector<std::vector<std::string>> tie_groups() const;
    /// The first `count` entries.
    [[nodiscard]] std::vector<std::string> top(std::size_t count) const;
};

/// Ranks alternatives by value; ties are exact equality.
[[nodiscard]] Ranking rank(std::string stakeholder, std::span<const std::string> alternatives,
                           std::span<const double> values);

[[nodiscard]] Ranking rank(std::span<const attributes::AttributeProfile> profiles, const StakeholderPreferences& prefs,
                           const attributes::AttributeCatalog& catalog,
                           std::span<const attributes::ImpactRange> ranges);

/// One ranking per stakeholder, in input order. Scoring runs over
/// (stakeholder, alternative) pairs in parallel.
[[nodiscard]] std::vector<Ranking> rank_all(std::span<const attributes::AttributeProfile> profiles,
                                            std::span<const StakeholderPreferences> prefs,
                                            const attributes::AttributeCatalog& catalog,
                                            std::span<const attributes::ImpactRange> ranges,
                                            Execution exec = Execution::kParallel);

/// `stakeholder,alternative,value,rank`, one row per pair, rankings in input order.
void write_rankings_csv(std::ostream& out, std::span<const Ranking> rankings);

}  // namespace vfmga::mavt
