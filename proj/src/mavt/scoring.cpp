#include "vfmga/mavt/scoring.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace vfmga::mavt {

double aggregate(std::span<const double> values, std::span<const double> weights, double gamma) {
    if (values.size() != weights.size())
        throw ValidationError(fmt::format("{} values for {} weights", values.size(), weights.size()));
    if (!std::isfinite(gamma) || gamma < 0.0) throw ValidationError(fmt::format("gamma must be >= 0, got {}", gamma));
    for (double v : values)
        if (!(v >= 0.0)) throw ValidationError(fmt::format("single-attribute value {} is undefined for aggregation", v));

    if (gamma == 0.0) {
        double log_v = 0.0;
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (weights[j] == 0.0) continue;
            if (values[j] == 0.0) return 0.0;
            log_v += weights[j] * std::log(values[j]);
        }
        return std::exp(log_v);
    }
    if (gamma == 1.0) {
        double s = 0.0;
        for (std::size_t j = 0; j < values.size(); ++j) s += weights[j] * values[j];
        return s;
    }
    // sum w v^g - 1 accumulated directly, so small gamma keeps its precision.
    double excess = -1.0;
    for (double w : weights) excess += w;
    for (std::size_t j = 0; j < values.size(); ++j)
        if (weights[j] != 0.0) excess += weights[j] * std::expm1(gamma * std::log(values[j]));
    if (excess <= -1.0) return 0.0;
    return std::exp(std::log1p(excess) / gamma);
}

Scorer::Scorer(const StakeholderPreferences& prefs, const attributes::AttributeCatalog& catalog,
               std::span<const attributes::ImpactRange> ranges)
    : functions_(resolve_value_functions(prefs, catalog, ranges)),
      weights_(prefs.weight_vector(catalog)),
      gamma_(prefs.gamma) {
    prefs.validate(catalog);
}

std::vector<double> Scorer::values(const attributes::AttributeProfile& profile) const {
    if (profile.values.size() != functions_.size())
        throw ValidationError(fmt::format("profile '{}' has {} attributes, expected {}", profile.alternative,
                                          profile.values.size(), functions_.size()));
    std::vector<double> v(functions_.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = functions_[j](profile.values[j].mean);
    return v;
}

double Scorer::operator()(const attributes::AttributeProfile& profile) const {
    return aggregate(values(profile), weights_, gamma_);
}

std::size_t Ranking::rank_of(std::string_view alternative) const {
    for (const auto& e : entries)
        if (e.alternative == alternative) return e.rank;
    throw ValidationError(fmt::format("alternative '{}' is not ranked for '{}'", alternative, stakeholder));
}

std::vector<std::vector<std::string>> Ranking::tie_groups() const {
    std::vector<std::vector<std::string>> groups;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i == 0 || entries[i].rank != entries[i - 1].rank) groups.emplace_back();
        groups.back().push_back(entries[i].alternative);
    }
    return groups;
}

std::vector<std::string> Ranking::top(std::size_t count) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < std::min(count, entries.size()); ++i) out.push_back(entries[i].alternative);
    return out;
}

Ranking rank(std::string stakeholder, std::span<const std::string> alternatives, std::span<const double> values) {
    if (alternatives.size() != values.size())
        throw ValidationError(fmt::format("{} alternatives for {} values", alternatives.size(), values.size()));
    Ranking r;
    r.stakeholder = std::move(stakeholder);
    for (std::size_t k = 0; k < values.size(); ++k) r.entries.push_back({alternatives[k], values[k], 0});
    std::sort(r.entries.begin(), r.entries.end(), [](const RankedAlternative& a, const RankedAlternative& b) {
        return a.value != b.value ? a.value > b.value : a.alternative < b.alternative;
    });
    for (std::size_t i = 0; i < r.entries.size(); ++i)
        r.entries[i].rank = i > 0 && r.entries[i].value == r.entries[i - 1].value ? r.entries[i - 1].rank : i + 1;
    return r;
}

Ranking rank(std::span<const attributes::AttributeProfile> profiles, const StakeholderPreferences& prefs,
             const attributes::AttributeCatalog& catalog, std::span<const attributes::ImpactRange> ranges) {
    return std::move(rank_all(profiles, std::span(&prefs, 1), catalog, ranges, Execution::kSerial).front());
}

std::vector<Ranking> rank_all(std::span<const attributes::AttributeProfile> profiles,
                              std::span<const StakeholderPreferences> prefs, const attributes::AttributeCatalog& catalog,
                              std::span<const attributes::ImpactRange> ranges, Execution exec) {
    std::vector<Scorer> scorers;
    for (const auto& p : prefs) scorers.emplace_back(p, catalog, ranges);
    const std::size_t n = profiles.size();
    std::vector<double> values(scorers.size() * n);
    std::vector<std::string> errors(values.size());

    auto score = [&](std::size_t cell) {
        try {
            values[cell] = scorers[cell / n](profiles[cell % n]);
        } catch (const std::exception& e) {
            errors[cell] = e.what();
        }
    };
    const auto cells = static_cast<std::ptrdiff_t>(values.size());
    if (exec == Execution::kSerial) {
        for (std::ptrdiff_t c = 0; c < cells; ++c) score(static_cast<std::size_t>(c));
    } else {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t c = 0; c < cells; ++c) score(static_cast<std::size_t>(c));
    }
    for (const std::string& e : errors)
        if (!e.empty()) throw ValidationError(e);

    std::vector<std::string> ids;
    for (const auto& p : profiles) ids.push_back(p.alternative);
    std::vector<Ranking> out;
    for (std::size_t s = 0; s < scorers.size(); ++s)
        out.push_back(rank(prefs[s].id, ids, std::span(values).subspan(s * n, n)));
    return out;
}

void write_rankings_csv(std::ostream& out, std::span<const Ranking> rankings) {
    out << "stakeholder,alternative,value,rank\n";
    for (const Ranking& r : rankings)
        for (const auto& e : r.entries) fmt::print(out, "{},{},{:.12g},{}\n", r.stakeholder, e.alternative, e.value, e.rank);
}

}  // namespace vfmga::mavt
