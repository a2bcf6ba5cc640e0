#include "vfmga/mga/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

namespace vfmga::mga {

std::vector<WeightVector> build_weight_vectors(std::span<const MgaGroup> groups, std::span<const Scheme> schemes) {
    const bool extreme = std::find(schemes.begin(), schemes.end(), Scheme::kExtreme) != schemes.end();
    const bool multi = std::find(schemes.begin(), schemes.end(), Scheme::kMultiExtreme) != schemes.end();
    std::vector<WeightVector> out;
    if (extreme)
        for (const MgaGroup& g : groups) {
            out.push_back({g.id + "/min", Scheme::kExtreme, g.strategy, "min", {{g.id, +1}}});
            out.push_back({g.id + "/max", Scheme::kExtreme, g.strategy, "max", {{g.id, -1}}});
        }
    if (multi)
        for (const MgaGroup& driver : groups) {
            if (driver.kind != GroupKind::kDriver) continue;
            auto avoider = std::find_if(groups.begin(), groups.end(), [&](const MgaGroup& g) {
                return g.kind == GroupKind::kAvoider && g.strategy == driver.strategy && g.attribute == driver.attribute;
            });
            if (avoider == groups.end()) continue;
            const std::string base = fmt::format("me:{}:{}", strategy_prefix(driver.strategy), *driver.attribute);
            out.push_back({base + "/min-driver", Scheme::kMultiExtreme, driver.strategy, "min-driver",
                           {{driver.id, +1}, {avoider->id, -1}}});
            out.push_back({base + "/max-driver", Scheme::kMultiExtreme, driver.strategy, "max-driver",
                           {{driver.id, -1}, {avoider->id, +1}}});
        }
    return out;
}

lp::LpSolution augmented_solve(const lp::LinearProgram& program, double f_star, std::span<const lp::Term> mga_terms,
                               double slack, double rho, const lp::SolveOptions& options) {
    if (!(slack >= 0.0)) throw ValidationError(fmt::format("slack must be non-negative, got {}", slack));
    if (!std::isfinite(f_star)) throw ValidationError("optimal cost must be finite");
    const lp::Objective& cost = program.objective();
    lp::LinearProgram p = lp::add_constraint(
        program, {"mga_cost_cap", cost.terms, lp::Relation::kLessEqual, (1.0 + slack) * f_star - cost.constant});
    const double scale = f_star != 0.0 ? rho / std::abs(f_star) : rho;
    lp::Objective objective;
    objective.terms.assign(mga_terms.begin(), mga_terms.end());
    for (const lp::Term& t : cost.terms) objective.terms.push_back({t.var, scale * t.coeff});
    p.set_objective(std::move(objective));
    return lp::solve(p, options);
}

MgaContext::MgaContext(esm::SystemModel model, MgaSettings settings)
    : model_(std::move(model)), settings_(std::move(settings)), compiled_(esm::compile(model_)) {
    lp::SolveOptions opts = settings_.solve;
    opts.warm_start.reset();
    optimum_ = lp::solve(compiled_.program, opts);
    if (!optimum_.optimal())
        throw Error(fmt::format("cost minimisation is {}", lp::to_string(optimum_.status)));
}

Alternative MgaContext::optimum_alternative() const {
    Alternative a = make_alternative(optimum_.values);
    a.id = alternative_id(0);
    a.provenance.push_back({"optimum", {}, "optimum", "", "", 0.0, 0, 0.0});
    return a;
}

std::vector<lp::Term> MgaContext::mga_terms(const WeightVector& w, std::span<const MgaGroup> groups) const {
    std::vector<lp::Term> terms;
    for (const auto& [group_id, weight] : w.weights) {
        auto g = std::find_if(groups.begin(), groups.end(), [&](const MgaGroup& x) { return x.id == group_id; });
        if (g == groups.end()) throw ValidationError("weight vector '" + w.id + "' names unknown group '" + group_id + "'");
        for (const std::string& member : g->members) {
            const std::size_t i = model_.technology_index(member);
            if (g->dimension == Dimension::kGeneration) {
                for (lp::VarId v : compiled_.generation[i]) terms.push_back({v, static_cast<double>(weight)});
            } else if (compiled_.investment[i]) {
                terms.push_back({*compiled_.investment[i], static_cast<double>(weight)});
            }
        }
    }
    return terms;
}

Alternative MgaContext::solve(const WeightVector& w, std::span<const MgaGroup> groups, double slack) const {
    const std::vector<lp::Term> terms = mga_terms(w, groups);
    lp::SolveOptions opts = settings_.solve;
    if (settings_.warm_start) opts.warm_start = optimum_.basis;
    const lp::LpSolution sol = augmented_solve(compiled_.program, f_star(), terms, slack, settings_.rho, opts);
    if (!sol.optimal())
        throw Error(fmt::format("MGA run '{}' at slack {} is {}", w.id, slack, lp::to_string(sol.status)));

    // Structural values are the first columns of the augmented program.
    std::span<const double> values(sol.values.data(), compiled_.program.num_variables());
    Alternative a = make_alternative(values);
    Provenance p;
    p.weight_vector = w.id;
    for (const auto& [g, weight] : w.weights) p.groups.push_back(g);
    p.scheme = std::string(to_string(w.scheme));
    p.strategy = std::string(to_string(w.strategy));
    p.direction = w.direction;
    p.slack = slack;
    for (const lp::Term& t : terms) p.mga_objective += t.coeff * values[t.var.index];
    a.provenance.push_back(std::move(p));
    return a;
}

Alternative MgaContext::make_alternative(std::span<const double> values) const {
    const esm::Decomposition d = esm::decompose(model_, compiled_, values);
    Alternative a;
    a.generation = d.annual_generation;
    a.invested = d.invested_capacity;
    a.costs = d.costs;
    a.slack_used = f_star() != 0.0 ? d.costs.total / f_star() - 1.0 : 0.0;
    a.capacity.resize(model_.technologies.size());
    for (std::size_t i = 0; i < model_.technologies.size(); ++i) {
        const esm::Technology& tech = model_.technologies[i];
        double needed = 0.0;  // MW the generation profile actually uses
        for (std::size_t t = 0; t < model_.slices.size(); ++t) {
            const double per_mw = tech.availability[t] * model_.slices[t].weight;
            if (per_mw > 0.0) needed = std::max(needed, values[compiled_.generation[i][t].index] / per_mw);
        }
        a.capacity[i] = tech.procurement ? needed : model_.existing_capacity(tech) + a.invested[i];
        const double installed = model_.existing_capacity(tech) + a.invested[i];
        const double eps = 1e-9 * std::max(1.0, tech.max_investment);
        if (a.invested[i] > eps && installed > settings_.artefact_factor * needed + eps) a.capacity_artefact = true;
    }
    return a;
}

namespace {

std::vector<long long> dedup_key(const Alternative& a, const esm::SystemModel& model, double tol) {
    std::vector<long long> key;
    key.reserve(2 * model.technologies.size());
    for (std::size_t i = 0; i < model.technologies.size(); ++i) {
        const double scale = std::max(model.max_annual_supply(model.technologies[i]), 1e-12);
        key.push_back(std::llround(a.generation[i] / (tol * scale)));
    }
    for (std::size_t i = 0; i < model.technologies.size(); ++i) {
        const double scale = std::max(model.technologies[i].max_investment, 1e-12);
        key.push_back(std::llround(a.invested[i] / (tol * scale)));
    }
    return key;
}

}  // namespace

std::vector<Alternative> deduplicate(std::vector<Alternative> alts, const esm::SystemModel& model, double tolerance) {
    std::sort(alts.begin(), alts.end(), [](const Alternative& a, const Alternative& b) { return a.id < b.id; });
    std::map<std::vector<long long>, std::size_t> seen;
    std::vector<Alternative> out;
    for (Alternative& a : alts) {
        auto key = dedup_key(a, model, tolerance);
        auto [it, inserted] = seen.emplace(std::move(key), out.size());
        if (inserted) {
            out.push_back(std::move(a));
        } else {
            auto& target = out[it->second].provenance;
            target.insert(target.end(), a.provenance.begin(), a.provenance.end());
        }
    }
    return out;
}

SweepResult generate_all(const MgaContext& context, std::span<const MgaGroup> groups,
                         std::span<const WeightVector> vectors, std::span<const double> slacks,
                         const SweepOptions& options, Execution exec) {
    if (slacks.empty()) throw ValidationError("the slack list is empty");
    for (double s : slacks)
        if (!(s >= 0.0)) throw ValidationError(fmt::format("slack must be non-negative, got {}", s));

    SweepResult result;
    result.f_star = context.f_star();
    result.runs = vectors.size() * slacks.size();
    std::vector<std::optional<Alternative>> done(result.runs);
    std::vector<std::string> errors(result.runs);

    auto run = [&](std::size_t k) {
        const WeightVector& w = vectors[k % vectors.size()];
        const double slack = slacks[k / vectors.size()];
        try {
            Alternative a = context.solve(w, groups, slack);
            a.id = alternative_id(k + 1);
            a.provenance.front().run_index = k + 1;
            done[k] = std::move(a);
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    };
    const auto n = static_cast<std::ptrdiff_t>(result.runs);
    if (exec == Execution::kSerial) {
        for (std::ptrdiff_t k = 0; k < n; ++k) run(static_cast<std::size_t>(k));
    } else {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t k = 0; k < n; ++k) run(static_cast<std::size_t>(k));
    }

    std::vector<Alternative> raw;
    raw.reserve(result.runs + 1);
    raw.push_back(context.optimum_alternative());
    for (std::size_t k = 0; k < result.runs; ++k) {
        if (done[k]) {
            raw.push_back(std::move(*done[k]));
        } else {
            result.failures.push_back(
                {k + 1, vectors[k % vectors.size()].id, slacks[k / vectors.size()], errors[k]});
        }
    }
    result.raw_alternatives = raw.size();
    result.alternatives = deduplicate(std::move(raw), context.model(), options.dedup_tolerance);
    return result;
}

std::string alternative_id(std::size_t run_index) { return fmt::format("A{:04d}", run_index); }

std::string_view to_string(Scheme s) noexcept { return s == Scheme::kExtreme ? "extreme" : "multi-extreme"; }

Scheme parse_scheme(std::string_view name) {
    if (name == "extreme") return Scheme::kExtreme;
    if (name == "multi-extreme") return Scheme::kMultiExtreme;
    throw ValidationError("unknown weighting scheme '" + std::string(name) + "'");
}

}  // namespace vfmga::mga
