#include "vfmga/attributes/evaluate.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace vfmga::attributes {
namespace {

double total(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

AttributeValue with_uncertainty(const AttributeSpec& a, double mean) {
    if (a.uncertainty != UncertaintyModel::kNormalRelative) return {mean, mean, mean};
    const double half = a.envelope_sd * a.relative_sd * std::abs(mean);
    return {mean, mean - half, mean + half};
}

AttributeValue expert_value(const AttributeSpec& a, const AttributeCatalog& catalog, const esm::SystemModel& model,
                            const mga::Alternative& alt) {
    const double cap_total = total(alt.capacity);
    const double lo = a.scale->min;
    const double hi = a.scale->max;
    if (cap_total <= 0.0) return {lo, lo, lo};
    double mean = 0.0, low = 0.0, high = 0.0;
    const auto ranges = catalog.expert_ranges.find(a.id);
    for (std::size_t i = 0; i < model.technologies.size(); ++i) {
        const double w = alt.capacity[i] / cap_total;
        if (w == 0.0) continue;
        const esm::Technology& tech = model.technologies[i];
        const double score = catalog.contribution(a, tech);
        mean += w * score;
        if (a.uncertainty == UncertaintyModel::kUniformSupport) {
            const ScoreRange& r = ranges->second.at(tech.id);
            low += w * r.min;
            high += w * r.max;
        }
    }
    mean = std::clamp(mean, lo, hi);
    if (a.uncertainty != UncertaintyModel::kUniformSupport) return with_uncertainty(a, mean);
    // Rounding can push the mixture an ulp past the clamped mean.
    return {mean, std::min(std::clamp(low, lo, hi), mean), std::max(std::clamp(high, lo, hi), mean)};
}

}  // namespace

double shannon_index(std::span<const double> shares) {
    double sum = 0.0;
    for (double s : shares) {
        if (!(s >= 0.0)) throw ValidationError("shannon index: negative share");
        sum += s;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError(fmt::format("shannon index: shares sum to {:.12g}, expected 1", sum));
    double h = 0.0;
    for (double s : shares)
        if (s > 0.0) h -= s * std::log(s);
    return h;
}

AttributeProfile evaluate(const mga::Alternative& alt, const AttributeCatalog& catalog,
                          const esm::SystemModel& model) {
    const std::size_t n = model.technologies.size();
    if (alt.generation.size() != n || alt.capacity.size() != n)
        throw esm::DimensionMismatchError("alternative '" + alt.id + "' does not match the system's technologies");

    AttributeProfile profile{alt.id, {}};
    profile.values.reserve(catalog.attributes.size());
    const double gen_total = total(alt.generation);

    for (const AttributeSpec& a : catalog.attributes) {
        switch (a.aggregation) {
            case Aggregation::kModelDirect: {
                const double mean =
                    a.component == CostComponent::kInvestment ? alt.costs.invest : alt.costs.operating();
                profile.values.push_back(with_uncertainty(a, mean));
                break;
            }
            case Aggregation::kSum: {
                const auto& quantity = a.basis == Basis::kCapacity ? alt.capacity : alt.generation;
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += catalog.contribution(a, model.technologies[i]) * quantity[i];
                profile.values.push_back(with_uncertainty(a, s));
                break;
            }
            case Aggregation::kDemandWeightedMean: {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    s += catalog.contribution(a, model.technologies[i]) * alt.generation[i];
                profile.values.push_back(with_uncertainty(a, gen_total > 0.0 ? s / gen_total : 0.0));
                break;
            }
            case Aggregation::kCapacityWeightedMean:
                profile.values.push_back(expert_value(a, catalog, model, alt));
                break;
            case Aggregation::kShannon: {
                double h = 0.0;
                if (gen_total > 0.0) {
                    std::vector<double> shares(n);
                    for (std::size_t i = 0; i < n; ++i) shares[i] = alt.generation[i] / gen_total;
                    // Renormalise so the sum check cannot trip on accumulated rounding.
                    const double s = total(shares);
                    for (double& x : shares) x /= s;
                    h = shannon_index(shares);
                }
                profile.values.push_back(with_uncertainty(a, h));
                break;
            }
        }
    }
    return profile;
}

std::vector<AttributeProfile> evaluate_all(std::span<const mga::Alternative> alts, const AttributeCatalog& catalog,
                                           const esm::SystemModel& model, Execution exec) {
    catalog.check_coverage(model);
    std::vector<AttributeProfile> out(alts.size());
    const auto count = static_cast<std::ptrdiff_t>(alts.size());
    if (exec == Execution::kSerial) {
        for (std::ptrdiff_t k = 0; k < count; ++k) out[k] = evaluate(alts[k], catalog, model);
        return out;
    }
    // Exceptions must not cross the parallel region; coverage was checked above,
    // so only dimension errors remain and are rethrown in order afterwards.
    std::vector<std::string> errors(alts.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        try {
            out[k] = evaluate(alts[k], catalog, model);
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    }
    for (const std::string& e : errors)
        if (!e.empty()) throw ValidationError(e);
    return out;
}

std::vector<ImpactRange> impact_ranges(std::span<const AttributeProfile> profiles, const AttributeCatalog& catalog) {
    if (profiles.empty()) throw ValidationError("impact ranges need at least one profile");
    std::vector<ImpactRange> ranges(catalog.attributes.size());
    for (std::size_t j = 0; j < catalog.attributes.size(); ++j) {
        double lo = profiles.front().values.at(j).low;
        double hi = profiles.front().values.at(j).high;
        for (const AttributeProfile& p : profiles) {
            lo = std::min(lo, p.values.at(j).low);
            hi = std::max(hi, p.values.at(j).high);
        }
        ranges[j] = catalog.attributes[j].direction == Direction::kLowerBetter ? ImpactRange{hi, lo}
                                                                                : ImpactRange{lo, hi};
    }
    return ranges;
}

void write_profiles_csv(std::ostream& out, std::span<const AttributeProfile> profiles,
                        const AttributeCatalog& catalog) {
    out << "alternative";
    for (const AttributeSpec& a : catalog.attributes) fmt::print(out, ",{0}_mean,{0}_low,{0}_high", a.id);
    out << '\n';
    for (const AttributeProfile& p : profiles) {
        out << p.alternative;
        for (const AttributeValue& v : p.values) fmt::print(out, ",{},{},{}", v.mean, v.low, v.high);
        out << '\n';
    }
}

}  // namespace vfmga::attributes
