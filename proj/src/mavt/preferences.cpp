#include "vfmga/mavt/preferences.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vfmga/json_read.hpp"

namespace vfmga::mavt {

namespace jr = json_read;
using nlohmann::json;

double gamma_from_compensation(std::span<const Compensation> answers) noexcept {
    if (answers.empty()) return kDefaultGamma;
    if (std::find(answers.begin(), answers.end(), Compensation::kStronglyRejected) != answers.end()) return 0.0;
    if (std::all_of(answers.begin(), answers.end(), [](Compensation c) { return c == Compensation::kAccepted; }))
        return 1.0;
    return kDefaultGamma;
}

void StakeholderPreferences::validate() const {
    double total = 0.0;
    for (const auto& [attr, w] : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw ValidationError(fmt::format("stakeholder '{}': weight of '{}' must be non-negative, got {}", id, attr, w));
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ValidationError(fmt::format("stakeholder '{}': weights sum to {}, not 1", id, total));
    if (!std::isfinite(gamma) || gamma < 0.0)
        throw ValidationError(fmt::format("stakeholder '{}': gamma must be finite and non-negative, got {}", id, gamma));
    for (const auto& [attr, spec] : value_functions) {
        try {
            if (spec.shape == Shape::kPiecewise) {
                (void)ValueFunction::piecewise(0.0, 1.0, spec.points);
            } else if (spec.curvature) {
                (void)ValueFunction::exponential(0.0, 1.0, *spec.curvature);
            } else {
                (void)fit_curvature(spec.points);
            }
        } catch (const ValidationError& e) {
            throw ValidationError(fmt::format("stakeholder '{}', value function '{}': {}", id, attr, e.what()));
        }
    }
}

void StakeholderPreferences::validate(const attributes::AttributeCatalog& catalog) const {
    validate();
    auto known = [&](const std::string& attr) {
        if (std::none_of(catalog.attributes.begin(), catalog.attributes.end(),
                         [&](const attributes::AttributeSpec& a) { return a.id == attr; }))
            throw ValidationError(fmt::format("stakeholder '{}' names unknown attribute '{}'", id, attr));
    };
    for (const auto& [attr, w] : weights) known(attr);
    for (const auto& [attr, spec] : value_functions) known(attr);
}

std::vector<double> StakeholderPreferences::weight_vector(const attributes::AttributeCatalog& catalog) const {
    std::vector<double> w;
    w.reserve(catalog.attributes.size());
    for (const auto& a : catalog.attributes) {
        auto it = weights.find(a.id);
        w.push_back(it == weights.end() ? 0.0 : it->second);
    }
    return w;
}

std::map<std::string, double> swing_weights(std::span<const std::pair<std::string, double>> ratings) {
    if (ratings.empty()) throw ValidationError("SWING needs at least one rated attribute");
    if (ratings.front().second != 100.0)
        throw ValidationError(fmt::format("the most important attribute '{}' must be rated 100, got {}",
                                          ratings.front().first, ratings.front().second));
    double total = 0.0;
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < ratings.size(); ++i) {
        const auto& [attr, r] = ratings[i];
        if (!(r >= 0.0 && r <= 100.0))
            throw ValidationError(fmt::format("rating of '{}' must lie in [0, 100], got {}", attr, r));
        if (i > 0 && r > ratings[i - 1].second)
            throw ValidationError(fmt::format("rating of '{}' exceeds that of the more important '{}'", attr,
                                              ratings[i - 1].first));
        if (!out.emplace(attr, r).second) throw ValidationError("attribute '" + attr + "' is rated twice");
        total += r;
    }
    for (auto& [attr, w] : out) w /= total;
    return out;
}

std::vector<ValueFunction> resolve_value_functions(const StakeholderPreferences& prefs,
                                                   const attributes::AttributeCatalog& catalog,
                                                   std::span<const attributes::ImpactRange> ranges) {
    if (ranges.size() != catalog.attributes.size())
        throw ValidationError(fmt::format("{} impact ranges for {} attributes", ranges.size(), catalog.attributes.size()));
    std::vector<ValueFunction> out;
    out.reserve(ranges.size());
    for (std::size_t j = 0; j < ranges.size(); ++j) {
        const double worst = ranges[j].worst, best = ranges[j].best;
        auto it = prefs.value_functions.find(catalog.attributes[j].id);
        if (it == prefs.value_functions.end() || it->second.shape == Shape::kLinear) {
            out.push_back(ValueFunction::linear(worst, best));
        } else if (it->second.shape == Shape::kPiecewise) {
            out.push_back(ValueFunction::piecewise(worst, best, it->second.points));
        } else {
            const SavfSpec& s = it->second;
            out.push_back(ValueFunction::exponential(worst, best, s.curvature ? *s.curvature : fit_curvature(s.points)));
        }
    }
    return out;
}

namespace {

SavfSpec savf_from_json(const json& j, const std::string& path) {
    jr::expect_object(j, path);
    jr::allowed_keys(j, path, {"shape", "c", "points"});
    SavfSpec s;
    try {
        s.shape = parse_shape(jr::string(j, path, "shape"));
    } catch (const ValidationError& e) {
        jr::fail(jr::child(path, "shape"), e.what());
    }
    s.curvature = jr::optional_number(j, path, "c");
    if (j.contains("points")) {
        const std::string pp = jr::child(path, "points");
        if (!j["points"].is_array()) jr::fail(pp, "expected an array");
        for (std::size_t i = 0; i < j["points"].size(); ++i) {
            const json& p = j["points"][i];
            const std::string ip = jr::child(pp, i);
            jr::expect_object(p, ip);
            jr::allowed_keys(p, ip, {"z", "value"});
            s.points.push_back({jr::number(p, ip, "z"), jr::number(p, ip, "value")});
        }
    }
    if (s.shape == Shape::kExponential && !s.curvature && s.points.empty())
        jr::fail(path, "an exponential value function needs `c` or `points`");
    if (s.shape != Shape::kExponential && s.curvature) jr::fail(path, "`c` applies to exponential shapes only");
    return s;
}

StakeholderPreferences stakeholder_from_json(const json& j, const std::string& path,
                                             const attributes::AttributeCatalog& catalog) {
    jr::expect_object(j, path);
    jr::allowed_keys(j, path, {"id", "weights", "ratings", "order", "value_functions", "gamma", "compensation", "notes"});
    StakeholderPreferences p;
    p.id = jr::string(j, path, "id");

    if (j.contains("weights") == j.contains("ratings")) jr::fail(path, "give exactly one of `weights` and `ratings`");
    if (j.contains("weights")) {
        const json& w = jr::member(j, path, "weights");
        jr::expect_object(w, jr::child(path, "weights"));
        for (const auto& [attr, value] : w.items()) p.weights[attr] = jr::number(value, jr::child(jr::child(path, "weights"), attr));
    } else {
        const std::string rp = jr::child(path, "ratings");
        const json& r = jr::member(j, path, "ratings");
        jr::expect_object(r, rp);
        std::map<std::string, double> rated;
        for (const auto& [attr, value] : r.items()) rated[attr] = jr::number(value, jr::child(rp, attr));
        std::vector<std::string> order;
        if (j.contains("order")) {
            const std::string op = jr::child(path, "order");
            if (!j["order"].is_array()) jr::fail(op, "expected an array of attribute ids");
            for (std::size_t i = 0; i < j["order"].size(); ++i) {
                if (!j["order"][i].is_string()) jr::fail(jr::child(op, i), "expected an attribute id");
                order.push_back(j["order"][i].get<std::string>());
            }
        } else {
            for (const auto& a : catalog.attributes) order.push_back(a.id);
            std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
                auto ra = rated.find(a), rb = rated.find(b);
                return (ra == rated.end() ? 0.0 : ra->second) > (rb == rated.end() ? 0.0 : rb->second);
            });
        }
        std::vector<std::pair<std::string, double>> ratings;
        for (const std::string& attr : order) {
            auto it = rated.find(attr);
            ratings.emplace_back(attr, it == rated.end() ? 0.0 : it->second);
            if (it == rated.end()) p.notes.push_back("declined: " + attr);
        }
        for (const auto& [attr, value] : rated)
            if (std::find(order.begin(), order.end(), attr) == order.end())
                jr::fail(jr::child(rp, attr), "rated attribute is missing from `order`");
        try {
            p.weights = swing_weights(ratings);
        } catch (const ValidationError& e) {
            jr::fail(rp, e.what());
        }
    }

    if (j.contains("value_functions")) {
        const std::string vp = jr::child(path, "value_functions");
        jr::expect_object(j["value_functions"], vp);
        for (const auto& [attr, spec] : j["value_functions"].items())
            p.value_functions[attr] = savf_from_json(spec, jr::child(vp, attr));
    }

    if (j.contains("gamma") && j.contains("compensation")) jr::fail(path, "give at most one of `gamma` and `compensation`");
    if (j.contains("compensation")) {
        const std::string cp = jr::child(path, "compensation");
        if (!j["compensation"].is_array()) jr::fail(cp, "expected an array of answers");
        std::vector<Compensation> answers;
        for (std::size_t i = 0; i < j["compensation"].size(); ++i) {
            const json& a = j["compensation"][i];
            if (!a.is_string()) jr::fail(jr::child(cp, i), "expected an answer string");
            try {
                answers.push_back(parse_compensation(a.get<std::string>()));
            } catch (const ValidationError& e) {
                jr::fail(jr::child(cp, i), e.what());
            }
        }
        p.gamma = gamma_from_compensation(answers);
    } else {
        p.gamma = jr::number_or(j, path, "gamma", kDefaultGamma);
    }

    if (j.contains("notes")) {
        const json& n = j["notes"];
        if (n.is_string()) {
            p.notes.push_back(n.get<std::string>());
        } else if (n.is_array() && std::all_of(n.begin(), n.end(), [](const json& x) { return x.is_string(); })) {
            for (const json& x : n) p.notes.push_back(x.get<std::string>());
        } else {
            jr::fail(jr::child(path, "notes"), "expected a string or an array of strings");
        }
    }

    try {
        p.validate(catalog);
    } catch (const ValidationError& e) {
        jr::fail(path, e.what());
    }
    return p;
}

}  // namespace

std::vector<StakeholderPreferences> preferences_from_json(const json& doc, const attributes::AttributeCatalog& catalog) {
    jr::expect_object(doc, "$");
    jr::allowed_keys(doc, "$", {"stakeholders", "description"});
    const json& list = jr::member(doc, "$", "stakeholders");
    if (!list.is_array()) jr::fail("$.stakeholders", "expected an array");
    std::vector<StakeholderPreferences> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        out.push_back(stakeholder_from_json(list[i], jr::child("$.stakeholders", i), catalog));
        for (std::size_t k = 0; k + 1 < out.size(); ++k)
            if (out[k].id == out.back().id) jr::fail(jr::child("$.stakeholders", i), "duplicate stakeholder id '" + out[k].id + "'");
    }
    return out;
}

std::vector<StakeholderPreferences> load_preferences(const std::string& path, const attributes::AttributeCatalog& catalog) {
    return preferences_from_json(jr::parse_file(path), catalog);
}

json to_json(const StakeholderPreferences& p) {
    json vfs = json::object();
    for (const auto& [attr, s] : p.value_functions) {
        json v = {{"shape", to_string(s.shape)}};
        if (s.curvature) v["c"] = *s.curvature;
        if (!s.points.empty()) {
            v["points"] = json::array();
            for (const ValuePoint& pt : s.points) v["points"].push_back({{"z", pt.z}, {"value", pt.value}});
        }
        vfs[attr] = std::move(v);
    }
    return {{"id", p.id}, {"weights", p.weights}, {"value_functions", std::move(vfs)}, {"gamma", p.gamma},
            {"notes", p.notes}};
}

json to_json(std::span<const StakeholderPreferences> prefs) {
    json list = json::array();
    for (const auto& p : prefs) list.push_back(to_json(p));
    return {{"stakeholders", std::move(list)}};
}

std::string_view to_string(Compensation c) noexcept {
    switch (c) {
        case Compensation::kAccepted: return "accepted";
        case Compensation::kRejected: return "rejected";
        case Compensation::kStronglyRejected: return "strongly-rejected";
    }
    return "?";
}

Compensation parse_compensation(std::string_view name) {
    if (name == "accepted") return Compensation::kAccepted;
    if (name == "rejected") return Compensation::kRejected;
    if (name == "strongly-rejected") return Compensation::kStronglyRejected;
    throw ValidationError("unknown compensation answer '" + std::string(name) + "'");
}

}  // namespace vfmga::mavt
