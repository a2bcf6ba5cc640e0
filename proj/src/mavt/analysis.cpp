#include "vfmga/mavt/analysis.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

namespace vfmga::mavt {

std::size_t top_count(std::size_t n, double q) {
    if (!(q > 0.0 && q <= 1.0)) throw ValidationError(fmt::format("top fraction must lie in (0, 1], got {}", q));
    // The small allowance keeps e.g. 0.29 * 100 from flooring to 28.
    const auto k = static_cast<std::size_t>(std::floor(q * static_cast<double>(n) + 1e-9));
    if (k < 1) throw ValidationError(fmt::format("top {} of {} alternatives is empty", q, n));
    return k;
}

bool is_present(const esm::SystemModel& model, const mga::Alternative& alt, std::size_t tech, double threshold) {
    return alt.generation[tech] > threshold * model.annual_demand(model.technologies[tech].sector);
}

double range_reduction(GenerationRange full, GenerationRange narrowed) noexcept {
    return full.span() > 0.0 ? 1.0 - narrowed.span() / full.span() : 0.0;
}

namespace {

// Indices into `alternatives` of each stakeholder's top set.
std::vector<std::vector<std::size_t>> top_indices(std::span<const mga::Alternative> alternatives,
                                                  std::span<const Ranking> rankings, std::size_t k) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < alternatives.size(); ++i) index.emplace(alternatives[i].id, i);
    std::vector<std::vector<std::size_t>> out;
    for (const Ranking& r : rankings) {
        if (r.entries.size() != alternatives.size())
            throw ValidationError(fmt::format("ranking of '{}' covers {} of {} alternatives", r.stakeholder,
                                              r.entries.size(), alternatives.size()));
        auto& top = out.emplace_back();
        for (const std::string& id : r.top(k)) {
            auto it = index.find(id);
            if (it == index.end())
                throw ValidationError(fmt::format("ranking of '{}' names unknown alternative '{}'", r.stakeholder, id));
            top.push_back(it->second);
        }
    }
    return out;
}

GenerationRange range_over(std::span<const mga::Alternative> alts, std::span<const std::size_t> which, std::size_t tech) {
    GenerationRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t k : which) {
        r.min = std::min(r.min, alts[k].generation[tech]);
        r.max = std::max(r.max, alts[k].generation[tech]);
    }
    return r;
}

TechClass classify(std::span<const mga::Alternative> alts, std::span<const std::size_t> which,
                   const std::function<bool(const mga::Alternative&)>& present) {
    const auto n = std::count_if(which.begin(), which.end(), [&](std::size_t k) { return present(alts[k]); });
    if (n == static_cast<std::ptrdiff_t>(which.size())) return TechClass::kMustHave;
    return n == 0 ? TechClass::kMustAvoid : TechClass::kRealChoice;
}

}  // namespace

Classification classify_technologies(const esm::SystemModel& model, std::span<const mga::Alternative> alternatives,
                                     std::span<const Ranking> rankings, const AnalysisConfig& config) {
    if (rankings.empty()) throw ValidationError("classification needs at least one ranking");
    Classification c;
    c.config = config;
    c.top_count = top_count(alternatives.size(), config.top_fraction);
    const auto tops = top_indices(alternatives, rankings, c.top_count);

    std::vector<std::size_t> all(alternatives.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::size_t> pooled;
    for (const auto& t : tops) pooled.insert(pooled.end(), t.begin(), t.end());
    std::sort(pooled.begin(), pooled.end());
    pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

    for (std::size_t s = 0; s < rankings.size(); ++s) {
        c.stakeholders.push_back(rankings[s].stakeholder);
        auto& ids = c.top_sets.emplace_back();
        for (std::size_t k : tops[s]) ids.push_back(alternatives[k].id);
    }
    for (std::size_t i = 0; i < model.technologies.size(); ++i) {
        auto present = [&](const mga::Alternative& a) { return is_present(model, a, i, config.presence_threshold); };
        TechnologyClassification t;
        t.technology = model.technologies[i].id;
        t.full = classify(alternatives, all, present);
        t.value_focused = classify(alternatives, pooled, present);
        t.full_range = range_over(alternatives, all, i);
        t.top_range = range_over(alternatives, pooled, i);
        t.range_reduction = range_reduction(t.full_range, t.top_range);
        for (const auto& top : tops) {
            t.stakeholder_ranges.push_back(range_over(alternatives, top, i));
            t.stakeholder_reduction.push_back(range_reduction(t.full_range, t.stakeholder_ranges.back()));
        }
        c.technologies.push_back(std::move(t));
    }
    return c;
}

OccurrenceTable occurrence_frequency(const esm::SystemModel& model, std::span<const mga::Alternative> alternatives,
                                     std::span<const Ranking> rankings, const AnalysisConfig& config) {
    OccurrenceTable t;
    for (const auto& tech : model.technologies) t.technologies.push_back(tech.id);
    if (rankings.empty()) return t;
    const std::size_t k = top_count(alternatives.size(), config.top_fraction);
    const auto tops = top_indices(alternatives, rankings, k);
    for (std::size_t s = 0; s < rankings.size(); ++s) {
        t.stakeholders.push_back(rankings[s].stakeholder);
        auto& row = t.frequency.emplace_back(model.technologies.size(), 0.0);
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::size_t n = 0;
            for (std::size_t a : tops[s]) n += is_present(model, alternatives[a], i, config.presence_threshold);
            row[i] = static_cast<double>(n) / static_cast<double>(k);
        }
    }
    return t;
}

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double mean = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ValidationError("rank vectors differ in length");
    const auto ra = average_ranks(a), rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

namespace {

// Rank vectors of every ranking, aligned on the first ranking's alternatives in id order.
std::vector<std::vector<double>> aligned_ranks(std::span<const Ranking> rankings) {
    std::vector<std::string> ids;
    for (const auto& e : rankings.front().entries) ids.push_back(e.alternative);
    std::sort(ids.begin(), ids.end());
    std::vector<std::vector<double>> out;
    for (const Ranking& r : rankings) {
        std::map<std::string_view, std::size_t> rank;
        for (const auto& e : r.entries) rank.emplace(e.alternative, e.rank);
        if (rank.size() != ids.size())
            throw ValidationError(fmt::format("rankings of '{}' and '{}' cover different alternatives",
                                              rankings.front().stakeholder, r.stakeholder));
        auto& v = out.emplace_back();
        for (const std::string& id : ids) {
            auto it = rank.find(id);
            if (it == rank.end())
                throw ValidationError(fmt::format("ranking of '{}' lacks alternative '{}'", r.stakeholder, id));
            v.push_back(static_cast<double>(it->second));
        }
    }
    return out;
}

}  // namespace

std::vector<Merge> average_linkage(std::vector<std::vector<double>> d) {
    const std::size_t n = d.size();
    std::vector<std::size_t> id(n), size(n, 1);
    std::iota(id.begin(), id.end(), 0);
    std::vector<bool> active(n, true);
    std::vector<Merge> merges;
    for (std::size_t step = 0; step + 1 < n; ++step) {
        // Rows keep their original slot; `id` maps a slot to its current cluster id.
        std::size_t a = n, b = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || !active[j]) continue;
                auto key = [&](std::size_t p, std::size_t q) {
                    return std::make_tuple(d[p][q], std::min(id[p], id[q]), std::max(id[p], id[q]));
                };
                if (a == n || key(i, j) < key(a, b)) a = i, b = j;
            }
        }
        if (id[a] > id[b]) std::swap(a, b);
        merges.push_back({id[a], id[b], d[a][b], size[a] + size[b]});
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == a || k == b) continue;
            const double v = (static_cast<double>(size[a]) * d[a][k] + static_cast<double>(size[b]) * d[b][k]) /
                             static_cast<double>(size[a] + size[b]);
            d[a][k] = d[k][a] = v;
        }
        size[a] += size[b];
        id[a] = n + step;
        active[b] = false;
    }
    return merges;
}

Dendrogram cluster_stakeholders(std::span<const Ranking> rankings) {
    if (rankings.size() < 2) throw ValidationError("clustering needs at least two stakeholders");
    const auto ranks = aligned_ranks(rankings);
    Dendrogram dg;
    const std::size_t n = rankings.size();
    dg.distance.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        dg.leaves.push_back(rankings[i].stakeholder);
        for (std::size_t j = i + 1; j < n; ++j) dg.distance[i][j] = dg.distance[j][i] = 1.0 - spearman(ranks[i], ranks[j]);
    }
    dg.merges = average_linkage(dg.distance);
    std::function<void(std::size_t)> walk = [&](std::size_t c) {
        if (c < n) {
            dg.leaf_order.push_back(c);
        } else {
            walk(dg.merges[c - n].left);
            walk(dg.merges[c - n].right);
        }
    };
    walk(2 * n - 2);
    return dg;
}

std::vector<std::string> mean_rank_order(std::span<const Ranking> rankings) {
    if (rankings.empty()) return {};
    std::map<std::string, double> total;
    for (const Ranking& r : rankings)
        for (const auto& e : r.entries) total[e.alternative] += static_cast<double>(e.rank);
    std::vector<std::pair<double, std::string>> order;
    for (const auto& [id, t] : total) order.emplace_back(t / static_cast<double>(rankings.size()), id);
    std::sort(order.begin(), order.end());
    std::vector<std::string> out;
    for (auto& [m, id] : order) out.push_back(std::move(id));
    return out;
}

double kendall_distance(const Ranking& a, const Ranking& b) {
    const Ranking pair[] = {a, b};
    const auto ranks = aligned_ranks(pair);
    const std::size_t n = ranks[0].size();
    if (n < 2) return 0.0;
    std::size_t discordant = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            discordant += (ranks[0][i] - ranks[0][j]) * (ranks[1][i] - ranks[1][j]) < 0.0;
    return static_cast<double>(discordant) / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

std::vector<SensitivityRow> sensitivity(std::span<const StakeholderPreferences> prefs,
                                        std::span<const attributes::AttributeProfile> profiles,
                                        const attributes::AttributeCatalog& catalog,
                                        std::span<const attributes::ImpactRange> ranges, const SensitivitySpec& spec,
                                        Execution exec) {
    std::vector<StakeholderPreferences> variants;
    std::vector<SensitivityRow> rows;
    auto row = [](std::string who, std::string what, std::string attr, double gamma, double delta) {
        SensitivityRow r;
        r.stakeholder = std::move(who);
        r.perturbation = std::move(what);
        r.attribute = std::move(attr);
        r.gamma = gamma;
        r.delta = delta;
        return r;
    };
    for (const StakeholderPreferences& p : prefs) {
        variants.push_back(p);
        rows.push_back(row(p.id, "baseline", "", p.gamma, 0.0));
        for (double g : spec.gammas) {
            variants.push_back(p);
            variants.back().gamma = g;
            rows.push_back(row(p.id, "gamma", "", g, 0.0));
        }
        if (spec.weight_delta <= 0.0) continue;
        for (const auto& attr : catalog.attributes) {
            for (double sign : {+1.0, -1.0}) {
                StakeholderPreferences v = p;
                for (const auto& a : catalog.attributes) v.weights.try_emplace(a.id, 0.0);
                double& w = v.weights[attr.id];
                w = std::max(0.0, w + sign * spec.weight_delta);
                double total = 0.0;
                for (const auto& [id, x] : v.weights) total += x;
                for (auto& [id, x] : v.weights) x /= total;
                variants.push_back(std::move(v));
                rows.push_back(row(p.id, sign > 0 ? "weight+" : "weight-", attr.id, p.gamma, spec.weight_delta));
            }
        }
    }
    const auto rankings = rank_all(profiles, variants, catalog, ranges, exec);
    const Ranking* baseline = nullptr;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].perturbation == "baseline") baseline = &rankings[k];
        rows[k].kendall_distance = kendall_distance(*baseline, rankings[k]);
        rows[k].top_alternative = rankings[k].entries.empty() ? "" : rankings[k].entries.front().alternative;
        for (const std::string& id : spec.tracked) rows[k].tracked_ranks.push_back(rankings[k].rank_of(id));
    }
    return rows;
}

void write_sensitivity_csv(std::ostream& out, std::span<const SensitivityRow> rows, const SensitivitySpec& spec) {
    out << "stakeholder,perturbation,attribute,gamma,delta,kendall_distance,top_alternative";
    for (const std::string& id : spec.tracked) out << ",rank_" << id;
    out << '\n';
    for (const SensitivityRow& r : rows) {
        fmt::print(out, "{},{},{},{:.12g},{:.12g},{:.12g},{}", r.stakeholder, r.perturbation, r.attribute, r.gamma,
                   r.delta, r.kendall_distance, r.top_alternative);
        for (std::size_t rank : r.tracked_ranks) out << ',' << rank;
        out << '\n';
    }
}

nlohmann::json to_json(const Classification& c, const OccurrenceTable& occurrence) {
    using nlohmann::json;
    auto range = [](GenerationRange r) { return json{{"min", r.min}, {"max", r.max}}; };
    json techs = json::array();
    for (const auto& t : c.technologies) {
        json per = json::object();
        for (std::size_t s = 0; s < c.stakeholders.size(); ++s)
            per[c.stakeholders[s]] = {{"range", range(t.stakeholder_ranges[s])}, {"range_reduction", t.stakeholder_reduction[s]}};
        techs.push_back({{"technology", t.technology},
                         {"full", to_string(t.full)},
                         {"value_focused", to_string(t.value_focused)},
                         {"full_range", range(t.full_range)},
                         {"top_range", range(t.top_range)},
                         {"range_reduction", t.range_reduction},
                         {"stakeholders", std::move(per)}});
    }
    json tops = json::object();
    for (std::size_t s = 0; s < c.stakeholders.size(); ++s) tops[c.stakeholders[s]] = c.top_sets[s];
    json freq = json::object();
    for (std::size_t s = 0; s < occurrence.stakeholders.size(); ++s) {
        json row = json::object();
        for (std::size_t i = 0; i < occurrence.technologies.size(); ++i)
            row[occurrence.technologies[i]] = occurrence.frequency[s][i];
        freq[occurrence.stakeholders[s]] = std::move(row);
    }
    return {{"top_fraction", c.config.top_fraction},
            {"presence_threshold", c.config.presence_threshold},
            {"top_count", c.top_count},
            {"technologies", std::move(techs)},
            {"top_sets", std::move(tops)},
            {"occurrence_frequency", std::move(freq)}};
}

nlohmann::json to_json(const Dendrogram& d, std::span<const std::string> alternative_order) {
    using nlohmann::json;
    json merges = json::array();
    for (const Merge& m : d.merges)
        merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
    return {{"leaves", d.leaves},
            {"distance", d.distance},
            {"merges", std::move(merges)},
            {"leaf_order", d.leaf_order},
            {"alternative_order", std::vector<std::string>(alternative_order.begin(), alternative_order.end())}};
}

std::string_view to_string(TechClass c) noexcept {
    switch (c) {
        case TechClass::kMustHave: return "must-have";
        case TechClass::kRealChoice: return "real-choice";
        case TechClass::kMustAvoid: return "must-avoid";
    }
    return "?";
}

}  // namespace vfmga::mavt
