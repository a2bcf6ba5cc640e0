#include "vfmga/orchestrator/config.hpp"

#include <cmath>

#include "vfmga/json_read.hpp"

namespace vfmga::orchestrator {

namespace jr = json_read;
using nlohmann::json;

namespace {

std::vector<std::string> strings(const json& j, const std::string& path) {
    if (!j.is_array()) jr::fail(path, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) jr::fail(jr::child(path, i), "expected a string");
        out.push_back(j[i].get<std::string>());
    }
    return out;
}

template <class F>
auto parsed(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ValidationError& e) {
        jr::fail(path, e.what());
    }
}

mga::GroupingConfig grouping_from_json(const json& j, const std::string& path) {
    jr::expect_object(j, path);
    jr::allowed_keys(j, path, {"relevance_threshold", "sector_thresholds", "tie_tolerance", "min_members",
                               "avoider_min_contributors"});
    mga::GroupingConfig g;
    g.relevance_threshold = jr::number_or(j, path, "relevance_threshold", g.relevance_threshold);
    g.tie_tolerance = jr::number_or(j, path, "tie_tolerance", g.tie_tolerance);
    auto count = [&](std::string_view key, std::size_t fallback) {
        const double v = jr::number_or(j, path, key, static_cast<double>(fallback));
        if (v < 0 || v != std::floor(v)) jr::fail(jr::child(path, key), "expected a non-negative integer");
        return static_cast<std::size_t>(v);
    };
    g.min_members = count("min_members", g.min_members);
    g.avoider_min_contributors = count("avoider_min_contributors", g.avoider_min_contributors);
    if (j.contains("sector_thresholds")) {
        const std::string sp = jr::child(path, "sector_thresholds");
        jr::expect_object(j["sector_thresholds"], sp);
        g.sector_thresholds.clear();
        for (const auto& [sector, v] : j["sector_thresholds"].items()) g.sector_thresholds[sector] = jr::number(v, jr::child(sp, sector));
    }
    return g;
}

}  // namespace

MgaConfig mga_config_from_json(const json& j, std::string_view path_view) {
    const std::string path(path_view);
    jr::expect_object(j, path);
    jr::allowed_keys(j, path, {"slacks", "strategies", "schemes", "rho", "dedup_tolerance", "warm_start", "grouping", "description"});
    MgaConfig c;
    if (j.contains("slacks")) {
        c.slacks = jr::numbers(j["slacks"], jr::child(path, "slacks"));
        if (c.slacks.empty()) jr::fail(jr::child(path, "slacks"), "at least one slack is required");
        for (std::size_t i = 0; i < c.slacks.size(); ++i)
            if (!(c.slacks[i] >= 0.0)) jr::fail(jr::child(jr::child(path, "slacks"), i), "slack must be non-negative");
    }
    if (j.contains("strategies")) {
        c.strategies.clear();
        const std::string sp = jr::child(path, "strategies");
        for (const std::string& s : strings(j["strategies"], sp))
            c.strategies.push_back(parsed(sp, [&] { return mga::parse_strategy(s); }));
    }
    if (j.contains("schemes")) {
        c.schemes.clear();
        const std::string sp = jr::child(path, "schemes");
        for (const std::string& s : strings(j["schemes"], sp)) c.schemes.push_back(parsed(sp, [&] { return mga::parse_scheme(s); }));
    }
    c.rho = jr::number_or(j, path, "rho", c.rho);
    if (!(c.rho >= 0.0)) jr::fail(jr::child(path, "rho"), "must be non-negative");
    c.dedup_tolerance = jr::number_or(j, path, "dedup_tolerance", c.dedup_tolerance);
    if (!(c.dedup_tolerance > 0.0)) jr::fail(jr::child(path, "dedup_tolerance"), "must be positive");
    c.warm_start = jr::boolean_or(j, path, "warm_start", c.warm_start);
    if (j.contains("grouping")) c.grouping = grouping_from_json(j["grouping"], jr::child(path, "grouping"));
    return c;
}

RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir) {
    jr::expect_object(j, "$");
    jr::allowed_keys(j, "$", {"system", "catalog", "preferences", "mga", "analysis", "description"});
    RunConfig c;
    auto resolve = [&](const std::string& p) { return (base_dir / p).lexically_normal(); };
    c.system = resolve(jr::string(j, "$", "system"));
    c.catalog = resolve(jr::string(j, "$", "catalog"));
    if (j.contains("preferences") && !j["preferences"].is_null()) c.preferences = resolve(jr::string(j, "$", "preferences"));
    if (j.contains("mga")) {
        if (j["mga"].is_string()) {
            c.mga = mga_config_from_json(jr::parse_file(resolve(j["mga"].get<std::string>())));
        } else {
            c.mga = mga_config_from_json(j["mga"], "$.mga");
        }
    }
    if (j.contains("analysis")) {
        const json& a = j["analysis"];
        jr::expect_object(a, "$.analysis");
        jr::allowed_keys(a, "$.analysis", {"top_fraction", "presence_threshold", "sensitivity"});
        c.analysis.top_fraction = jr::number_or(a, "$.analysis", "top_fraction", c.analysis.top_fraction);
        if (!(c.analysis.top_fraction > 0.0 && c.analysis.top_fraction <= 1.0))
            jr::fail("$.analysis.top_fraction", "must lie in (0, 1]");
        c.analysis.presence_threshold = jr::number_or(a, "$.analysis", "presence_threshold", c.analysis.presence_threshold);
        if (!(c.analysis.presence_threshold >= 0.0)) jr::fail("$.analysis.presence_threshold", "must be non-negative");
        if (a.contains("sensitivity")) {
            const json& s = a["sensitivity"];
            const std::string sp = "$.analysis.sensitivity";
            jr::expect_object(s, sp);
            jr::allowed_keys(s, sp, {"gammas", "weight_delta", "tracked"});
            if (s.contains("gammas")) c.sensitivity.gammas = jr::numbers(s["gammas"], jr::child(sp, "gammas"));
            c.sensitivity.weight_delta = jr::number_or(s, sp, "weight_delta", c.sensitivity.weight_delta);
            if (s.contains("tracked")) c.sensitivity.tracked = strings(s["tracked"], jr::child(sp, "tracked"));
        }
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return run_config_from_json(jr::parse_file(path), path.parent_path());
}

json to_json(const MgaConfig& c) {
    json strategies = json::array(), schemes = json::array();
    for (auto s : c.strategies) strategies.push_back(mga::to_string(s));
    for (auto s : c.schemes) schemes.push_back(mga::to_string(s));
    return {{"slacks", c.slacks},
            {"strategies", std::move(strategies)},
            {"schemes", std::move(schemes)},
            {"rho", c.rho},
            {"dedup_tolerance", c.dedup_tolerance},
            {"warm_start", c.warm_start},
            {"grouping",
             {{"relevance_threshold", c.grouping.relevance_threshold},
              {"sector_thresholds", c.grouping.sector_thresholds},
              {"tie_tolerance", c.grouping.tie_tolerance},
              {"min_members", c.grouping.min_members},
              {"avoider_min_contributors", c.grouping.avoider_min_contributors}}}};
}

json settings_json(const RunConfig& c) {
    return {{"mga", to_json(c.mga)},
            {"analysis",
             {{"top_fraction", c.analysis.top_fraction},
              {"presence_threshold", c.analysis.presence_threshold},
              {"sensitivity",
               {{"gammas", c.sensitivity.gammas},
                {"weight_delta", c.sensitivity.weight_delta},
                {"tracked", c.sensitivity.tracked}}}}}};
}

}  // namespace vfmga::orchestrator
