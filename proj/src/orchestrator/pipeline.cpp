#include "vfmga/orchestrator/pipeline.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <sstream>

#include "vfmga/esm/system_json.hpp"
#include "vfmga/lp/mps_writer.hpp"
#include "vfmga/orchestrator/artifacts.hpp"
#include "vfmga/orchestrator/digest.hpp"

namespace vfmga::orchestrator {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Stage s) noexcept {
    switch (s) {
        case Stage::kOptimize: return "optimize";
        case Stage::kGroups: return "groups";
        case Stage::kGenerate: return "generate";
        case Stage::kEvaluate: return "evaluate";
        case Stage::kRank: return "rank";
        case Stage::kAnalyse: return "analyse";
    }
    return "?";
}

Stage parse_stage(std::string_view name) {
    for (Stage s : {Stage::kOptimize, Stage::kGroups, Stage::kGenerate, Stage::kEvaluate, Stage::kRank, Stage::kAnalyse})
        if (to_string(s) == name) return s;
    throw ValidationError("unknown stage '" + std::string(name) + "'");
}

json RunManifest::to_json() const {
    json stage_list = json::array();
    for (const auto& s : stages)
        stage_list.push_back({{"stage", orchestrator::to_string(s.stage)}, {"started", s.started}, {"seconds", s.seconds}});
    return {{"run_id", run_id},
            {"inputs", inputs},
            {"settings", settings},
            {"stages", std::move(stage_list)},
            {"counts", counts},
            {"artifacts", artifacts},
            {"stopped", stopped ? json(*stopped) : json(nullptr)}};
}

namespace {

std::string utc_now() {
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config, const fs::path& out_dir, const PipelineOptions& options) {
    PipelineResult r;
    RunManifest& m = r.manifest;
    fs::create_directories(out_dir);
    auto log = [&](const std::string& msg) {
        if (options.log) options.log(msg);
    };
    auto emit = [&](const std::string& name, const std::string& content) {
        write_file(out_dir / name, content);
        m.artifacts[name] = sha256_hex(content);
    };
    auto record_input = [&](const std::string& role, const fs::path& path) {
        m.inputs[role] = {{"file", path.filename().string()}, {"sha256", sha256_file(path)}};
    };

    // Inputs are validated before any stage runs.
    record_input("system", config.system);
    record_input("catalog", config.catalog);
    r.model = esm::load_system(config.system);
    r.catalog = attributes::load_catalog(config.catalog);
    r.catalog.check_coverage(r.model);
    if (config.preferences) {
        record_input("preferences", *config.preferences);
        r.preferences = mavt::load_preferences(config.preferences->string(), r.catalog);
    }
    m.settings = settings_json(config);
    m.run_id = sha256_hex(m.inputs.dump() + m.settings.dump()).substr(0, 16);

    auto run_stage = [&](Stage stage, auto&& body) {
        if (stage > options.last) return false;
        StageRecord rec{stage, utc_now(), 0.0};
        log(fmt::format("{}: started", to_string(stage)));
        const auto t0 = std::chrono::steady_clock::now();
        body();
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log(fmt::format("{}: {:.2f} s", to_string(stage), rec.seconds));
        m.stages.push_back(rec);
        return true;
    };

    auto finish = [&]() -> PipelineResult& {
        write_file(out_dir / "manifest.json", dump(m.to_json()));
        return r;
    };

    run_stage(Stage::kOptimize, [&] {
        mga::MgaSettings settings;
        settings.rho = config.mga.rho;
        settings.warm_start = config.mga.warm_start;
        r.context.emplace(r.model, settings);
        std::ostringstream mps;
        lp::write_mps(r.context->compiled().program, mps, "OPTIMUM");
        emit("optimum.mps", mps.str());
        m.counts["f_star"] = r.context->f_star();
        m.counts["lp_variables"] = r.context->compiled().program.num_variables();
        m.counts["lp_constraints"] = r.context->compiled().program.num_constraints();
    });

    const bool grouped = run_stage(Stage::kGroups, [&] {
        json per_strategy = json::object();
        for (mga::Strategy s : config.mga.strategies) {
            auto g = mga::construct_groups(r.catalog, r.model, s, config.mga.grouping);
            per_strategy[std::string(mga::to_string(s))] = g.size();
            r.groups.insert(r.groups.end(), g.begin(), g.end());
        }
        r.vectors = mga::build_weight_vectors(r.groups, config.mga.schemes);
        emit("groups.json", dump(groups_json(r.groups, r.vectors)));
        m.counts["groups"] = std::move(per_strategy);
        m.counts["weight_vectors"] = r.vectors.size();
    });
    if (!grouped) return finish();

    const bool generated = run_stage(Stage::kGenerate, [&] {
        r.sweep = mga::generate_all(*r.context, r.groups, r.vectors, config.mga.slacks,
                                    mga::SweepOptions{config.mga.dedup_tolerance}, options.exec);
        emit("alternatives.json", dump(alternatives_json(r.sweep, r.model)));
        std::ostringstream costs;
        write_costs_csv(costs, r.sweep.alternatives);
        emit("costs.csv", costs.str());
        m.counts["runs"] = r.sweep.runs;
        m.counts["raw_alternatives"] = r.sweep.raw_alternatives;
        m.counts["alternatives"] = r.sweep.alternatives.size();
        m.counts["failures"] = r.sweep.failures.size();
        m.counts["capacity_artefacts"] = std::count_if(r.sweep.alternatives.begin(), r.sweep.alternatives.end(),
                                                       [](const mga::Alternative& a) { return a.capacity_artefact; });
        for (const auto& f : r.sweep.failures) log(fmt::format("run {} ({}) failed: {}", f.run_index, f.weight_vector, f.message));
    });
    if (!generated) return finish();

    const bool evaluated = run_stage(Stage::kEvaluate, [&] {
        r.profiles = attributes::evaluate_all(r.sweep.alternatives, r.catalog, r.model, options.exec);
        r.ranges = attributes::impact_ranges(r.profiles, r.catalog);
        std::ostringstream profiles;
        attributes::write_profiles_csv(profiles, r.profiles, r.catalog);
        emit("profiles.csv", profiles.str());
        emit("ranges.json", dump(ranges_json(r.catalog, r.ranges)));
        emit("catalog.json", read_file(config.catalog));
    });
    if (!evaluated) return finish();

    m.counts["stakeholders"] = r.preferences.size();
    if (r.preferences.empty()) {
        m.stopped = "no stakeholder preferences; ranking and analysis skipped";
        log(*m.stopped);
        return finish();
    }

    const bool ranked = run_stage(Stage::kRank, [&] {
        r.rankings = mavt::rank_all(r.profiles, r.preferences, r.catalog, r.ranges, options.exec);
        emit("preferences.json", dump(mavt::to_json(std::span<const mavt::StakeholderPreferences>(r.preferences))));
        std::ostringstream rankings;
        mavt::write_rankings_csv(rankings, r.rankings);
        emit("rankings.csv", rankings.str());
    });
    if (!ranked) return finish();

    run_stage(Stage::kAnalyse, [&] {
        r.classification = mavt::classify_technologies(r.model, r.sweep.alternatives, r.rankings, config.analysis);
        r.occurrence = mavt::occurrence_frequency(r.model, r.sweep.alternatives, r.rankings, config.analysis);
        emit("classification.json", dump(mavt::to_json(*r.classification, r.occurrence)));
        if (r.rankings.size() >= 2) {
            r.dendrogram = mavt::cluster_stakeholders(r.rankings);
            emit("dendrogram.json", dump(mavt::to_json(*r.dendrogram, mavt::mean_rank_order(r.rankings))));
        } else {
            log("one stakeholder: clustering skipped");
        }
        mavt::SensitivitySpec spec = config.sensitivity;
        std::erase_if(spec.tracked, [&](const std::string& id) {
            return std::none_of(r.sweep.alternatives.begin(), r.sweep.alternatives.end(),
                                [&](const mga::Alternative& a) { return a.id == id; });
        });
        r.sensitivity = mavt::sensitivity(r.preferences, r.profiles, r.catalog, r.ranges, spec, options.exec);
        std::ostringstream csv;
        mavt::write_sensitivity_csv(csv, r.sensitivity, spec);
        emit("sensitivity.csv", csv.str());
    });
    return finish();
}

}  // namespace vfmga::orchestrator
