#include "vfmga/mga/groups.hpp"

#include <algorithm>
#include <cmath>

namespace vfmga::mga {
namespace {

using attributes::AttributeCatalog;
using attributes::AttributeSpec;

struct Candidate {
    std::size_t tech;
    double contribution;
    double supply;
};

bool tied(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

// Takes whole tie blocks in the given order until both the member count and the
// supply target are met (or candidates run out).
std::vector<std::size_t> take_blocks(const std::vector<Candidate>& ordered, std::size_t min_members, double target,
                                     double tie_tolerance) {
    std::vector<std::size_t> taken;
    double supply = 0.0;
    std::size_t k = 0;
    while (k < ordered.size()) {
        if (taken.size() >= min_members && supply >= target) break;
        std::size_t end = k + 1;
        while (end < ordered.size() && tied(ordered[k].contribution, ordered[end].contribution, tie_tolerance)) ++end;
        for (std::size_t j = k; j < end; ++j) {
            taken.push_back(ordered[j].tech);
            supply += ordered[j].supply;
        }
        k = end;
    }
    return taken;
}

std::vector<Candidate> sorted(std::vector<Candidate> c, bool descending) {
    std::stable_sort(c.begin(), c.end(), [descending](const Candidate& a, const Candidate& b) {
        return descending ? a.contribution > b.contribution : a.contribution < b.contribution;
    });
    return c;
}

std::vector<Candidate> positive(const std::vector<Candidate>& c) {
    std::vector<Candidate> out;
    std::copy_if(c.begin(), c.end(), std::back_inserter(out), [](const Candidate& x) { return x.contribution > 0.0; });
    return out;
}

MgaGroup make_group(const esm::SystemModel& model, Strategy strategy, const AttributeSpec& attr, GroupKind kind,
                    std::vector<std::size_t> techs) {
    std::sort(techs.begin(), techs.end());
    techs.erase(std::unique(techs.begin(), techs.end()), techs.end());
    MgaGroup g;
    g.kind = kind;
    g.attribute = attr.id;
    g.strategy = strategy;
    g.dimension = attr.basis == attributes::Basis::kCapacity ? Dimension::kCapacity : Dimension::kGeneration;
    g.id = std::string(strategy_prefix(strategy)) + ":" + attr.id + ":" + std::string(to_string(kind));
    for (std::size_t i : techs) g.members.push_back(model.technologies[i].id);
    return g;
}

}  // namespace

std::vector<MgaGroup> construct_groups(const AttributeCatalog& catalog, const esm::SystemModel& model,
                                       Strategy strategy, const GroupingConfig& config) {
    std::vector<MgaGroup> groups;
    if (strategy == Strategy::kBenchmark) {
        for (const esm::Technology& t : model.technologies)
            groups.push_back({"tb:" + t.id, GroupKind::kBenchmark, std::nullopt, Dimension::kGeneration, {t.id},
                              Strategy::kBenchmark});
        return groups;
    }

    const double total_demand = model.total_annual_demand();
    for (const AttributeSpec& attr : catalog.attributes) {
        if (!attr.decomposable) continue;
        const bool capacity = attr.basis == attributes::Basis::kCapacity;
        const bool has_data = attr.aggregation == attributes::Aggregation::kModelDirect ||
                              catalog.coefficients.contains(attr.id) || catalog.expert_ranges.contains(attr.id);
        if (!has_data) throw ValidationError("decomposable attribute '" + attr.id + "' has no contribution data");

        std::vector<Candidate> candidates;
        for (std::size_t i = 0; i < model.technologies.size(); ++i) {
            const esm::Technology& t = model.technologies[i];
            // Capacity groups steer investment, so only investable technologies qualify.
            if (capacity && !t.investable()) continue;
            candidates.push_back({i, catalog.contribution(attr, t), model.max_annual_supply(t)});
        }
        const std::size_t contributors = positive(candidates).size();
        const bool keep_avoider = contributors >= config.avoider_min_contributors;

        std::vector<std::size_t> driver, avoider;
        if (strategy == Strategy::kContributionBased) {
            const double target = config.relevance_threshold * total_demand;
            driver = take_blocks(sorted(positive(candidates), true), config.min_members, target, config.tie_tolerance);
            if (keep_avoider)
                avoider = take_blocks(sorted(candidates, false), config.min_members, target, config.tie_tolerance);
        } else {
            for (const std::string& sector : model.carriers) {
                std::vector<Candidate> in_sector;
                for (const Candidate& c : candidates)
                    if (model.technologies[c.tech].sector == sector) in_sector.push_back(c);
                if (in_sector.empty()) continue;
                auto th = config.sector_thresholds.find(sector);
                const double target = th == config.sector_thresholds.end()
                                          ? 0.0
                                          : th->second * model.annual_demand(sector);
                auto d = take_blocks(sorted(positive(in_sector), true), 1, target, config.tie_tolerance);
                driver.insert(driver.end(), d.begin(), d.end());
                if (keep_avoider) {
                    auto a = take_blocks(sorted(in_sector, false), 1, target, config.tie_tolerance);
                    avoider.insert(avoider.end(), a.begin(), a.end());
                }
            }
        }
        if (!driver.empty()) groups.push_back(make_group(model, strategy, attr, GroupKind::kDriver, driver));
        if (!avoider.empty()) groups.push_back(make_group(model, strategy, attr, GroupKind::kAvoider, avoider));
    }
    return groups;
}

std::string_view to_string(GroupKind k) noexcept {
    switch (k) {
        case GroupKind::kDriver: return "driver";
        case GroupKind::kAvoider: return "avoider";
        case GroupKind::kBenchmark: return "benchmark";
    }
    return "?";
}

std::string_view to_string(Dimension d) noexcept { return d == Dimension::kCapacity ? "capacity" : "generation"; }

std::string_view to_string(Strategy s) noexcept {
    switch (s) {
        case Strategy::kContributionBased: return "contribution-based";
        case Strategy::kDomainBalanced: return "domain-balanced";
        case Strategy::kBenchmark: return "benchmark";
    }
    return "?";
}

std::string_view strategy_prefix(Strategy s) noexcept {
    switch (s) {
        case Strategy::kContributionBased: return "cb";
        case Strategy::kDomainBalanced: return "db";
        case Strategy::kBenchmark: return "tb";
    }
    return "?";
}

Strategy parse_strategy(std::string_view name) {
    for (Strategy s : {Strategy::kContributionBased, Strategy::kDomainBalanced, Strategy::kBenchmark})
        if (name == to_string(s) || name == strategy_prefix(s)) return s;
    throw ValidationError("unknown grouping strategy '" + std::string(name) + "'");
}

}  // namespace vfmga::mga
