#include "vfmga/esm/compile.hpp"

#include <fmt/format.h>

#include <cmath>

namespace vfmga::esm {

CompiledSystem compile(const SystemModel& model) {
    model.validate();
    const std::size_t n_slices = model.slices.size();
    const std::size_t n_tech = model.technologies.size();

    for (const std::string& carrier : model.carriers) {
        auto d = model.demand.find(carrier);
        if (d == model.demand.end()) continue;
        for (std::size_t t = 0; t < n_slices; ++t) {
            double supply = 0.0;
            for (const Technology& tech : model.technologies) {
                auto out = tech.outputs.find(carrier);
                if (out == tech.outputs.end()) continue;
                supply += out->second * tech.availability[t] *
                          (model.existing_capacity(tech) + tech.max_investment) * model.slices[t].weight;
            }
            if (supply < d->second[t] * (1.0 - 1e-12))
                throw InfeasibleModelError(fmt::format(
                    "carrier '{}' in slice '{}': maximum supply {:.6g} MWh is below demand {:.6g} MWh", carrier,
                    model.slices[t].id, supply, d->second[t]));
        }
    }

    CompiledSystem out;
    lp::LinearProgram& lp = out.program;
    out.generation.resize(n_tech);
    out.investment.resize(n_tech);

    for (std::size_t i = 0; i < n_tech; ++i) {
        const Technology& tech = model.technologies[i];
        const double existing = model.existing_capacity(tech);
        for (std::size_t t = 0; t < n_slices; ++t) {
            const double per_mw = tech.availability[t] * model.slices[t].weight;
            // Investable technologies get an explicit capacity row instead.
            const double upper = (tech.investable() && per_mw > 0.0) ? lp::kInfinity : per_mw * existing;
            out.generation[i].push_back(
                lp.add_variable(fmt::format("gen[{}@{}]", tech.id, model.slices[t].id), 0.0, upper));
        }
    }
    for (std::size_t i = 0; i < n_tech; ++i) {
        const Technology& tech = model.technologies[i];
        if (tech.investable()) out.investment[i] = lp.add_variable("inv[" + tech.id + "]", 0.0, tech.max_investment);
    }

    // (a) carrier balances
    for (const std::string& carrier : model.carriers) {
        auto d = model.demand.find(carrier);
        for (std::size_t t = 0; t < n_slices; ++t) {
            lp::Constraint row{fmt::format("bal[{}@{}]", carrier, model.slices[t].id), {}, lp::Relation::kEqual,
                               d == model.demand.end() ? 0.0 : d->second[t]};
            for (std::size_t i = 0; i < n_tech; ++i) {
                const Technology& tech = model.technologies[i];
                auto o = tech.outputs.find(carrier);
                if (o != tech.outputs.end()) row.terms.push_back({out.generation[i][t], o->second});
                if (tech.input && tech.input->carrier == carrier)
                    row.terms.push_back({out.generation[i][t], -1.0 / tech.input->cop[t]});
            }
            if (row.terms.empty() && row.rhs == 0.0) continue;
            lp.append_constraint(std::move(row));
        }
    }

    // (b) generation within available capacity
    for (std::size_t i = 0; i < n_tech; ++i) {
        if (!out.investment[i]) continue;
        const Technology& tech = model.technologies[i];
        const double existing = model.existing_capacity(tech);
        for (std::size_t t = 0; t < n_slices; ++t) {
            const double per_mw = tech.availability[t] * model.slices[t].weight;
            if (per_mw <= 0.0) continue;
            lp.append_constraint({fmt::format("cap[{}@{}]", tech.id, model.slices[t].id),
                                  {{out.generation[i][t], 1.0}, {*out.investment[i], -per_mw}},
                                  lp::Relation::kLessEqual,
                                  per_mw * existing});
        }
    }

    // (c) annual potentials
    for (std::size_t i = 0; i < n_tech; ++i) {
        const Technology& tech = model.technologies[i];
        if (!tech.max_annual_generation) continue;
        lp::Constraint row{"pot[" + tech.id + "]", {}, lp::Relation::kLessEqual, *tech.max_annual_generation};
        for (lp::VarId v : out.generation[i]) row.terms.push_back({v, 1.0});
        lp.append_constraint(std::move(row));
    }

    // (d) is the upper bound on inv[]; (e) emissions
    if (std::isfinite(model.emission_cap)) {
        lp::Constraint row{"co2", {}, lp::Relation::kLessEqual, model.emission_cap};
        for (std::size_t i = 0; i < n_tech; ++i) {
            const double ef = model.technologies[i].emission_factor;
            if (ef <= 0.0) continue;
            for (lp::VarId v : out.generation[i]) row.terms.push_back({v, ef});
        }
        if (!row.terms.empty()) lp.append_constraint(std::move(row));
    }

    lp::Objective objective;
    for (std::size_t i = 0; i < n_tech; ++i) {
        const Technology& tech = model.technologies[i];
        const double per_mwh = tech.costs.vom + tech.costs.fuel + tech.costs.aux;
        if (per_mwh != 0.0)
            for (lp::VarId v : out.generation[i]) objective.terms.push_back({v, per_mwh});
        if (out.investment[i]) objective.terms.push_back({*out.investment[i], tech.costs.invest + tech.costs.fom});
        objective.constant += tech.costs.fom * model.existing_capacity(tech);
    }
    lp.set_objective(std::move(objective));
    return out;
}

namespace {

void check_dimensions(const SystemModel& model, const CompiledSystem& compiled, std::span<const double> values) {
    if (compiled.generation.size() != model.technologies.size() ||
        compiled.investment.size() != model.technologies.size())
        throw DimensionMismatchError("compiled system does not match the model's technologies");
    for (const auto& row : compiled.generation)
        if (row.size() != model.slices.size())
            throw DimensionMismatchError("compiled system does not match the model's time slices");
    if (values.size() != compiled.program.num_variables())
        throw DimensionMismatchError(fmt::format("solution has {} values, program has {} variables", values.size(),
                                                 compiled.program.num_variables()));
}

}  // namespace

Decomposition decompose(const SystemModel& model, const CompiledSystem& compiled, std::span<const double> values) {
    check_dimensions(model, compiled, values);
    Decomposition d;
    d.annual_generation.assign(model.technologies.size(), 0.0);
    d.invested_capacity.assign(model.technologies.size(), 0.0);
    CostBreakdown& c = d.costs;
    for (std::size_t i = 0; i < model.technologies.size(); ++i) {
        const Technology& tech = model.technologies[i];
        double gen = 0.0;
        for (lp::VarId v : compiled.generation[i]) gen += values[v.index];
        const double inv = compiled.investment[i] ? values[compiled.investment[i]->index] : 0.0;
        d.annual_generation[i] = gen;
        d.invested_capacity[i] = inv;
        c.invest += tech.costs.invest * inv;
        c.fixed_om += tech.costs.fom * (model.existing_capacity(tech) + inv);
        c.variable_om += tech.costs.vom * gen;
        c.fuel += tech.costs.fuel * gen;
        c.auxiliary += tech.costs.aux * gen;
    }
    c.total = c.invest + c.fixed_om + c.variable_om + c.fuel + c.auxiliary;
    return d;
}

std::vector<double> generation_profile(const CompiledSystem& compiled, std::size_t tech,
                                       std::span<const double> values) {
    if (tech >= compiled.generation.size()) throw DimensionMismatchError("technology index out of range");
    if (values.size() != compiled.program.num_variables())
        throw DimensionMismatchError("solution does not match the compiled program");
    std::vector<double> profile;
    profile.reserve(compiled.generation[tech].size());
    for (lp::VarId v : compiled.generation[tech]) profile.push_back(values[v.index]);
    return profile;
}

std::vector<double> balance_residuals(const SystemModel& model, const CompiledSystem& compiled,
                                      std::span<const double> values) {
    check_dimensions(model, compiled, values);
    std::vector<double> residuals;
    for (const std::string& carrier : model.carriers) {
        auto d = model.demand.find(carrier);
        for (std::size_t t = 0; t < model.slices.size(); ++t) {
            double r = d == model.demand.end() ? 0.0 : -d->second[t];
            for (std::size_t i = 0; i < model.technologies.size(); ++i) {
                const Technology& tech = model.technologies[i];
                const double gen = values[compiled.generation[i][t].index];
                auto o = tech.outputs.find(carrier);
                if (o != tech.outputs.end()) r += o->second * gen;
                if (tech.input && tech.input->carrier == carrier) r -= gen / tech.input->cop[t];
            }
            residuals.push_back(r);
        }
    }
    return residuals;
}

SystemModel collapse_to_single_slice(const SystemModel& model) {
    model.validate();
    SystemModel one = model;
    const double hours = model.total_hours();
    auto weighted_mean = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t t = 0; t < v.size(); ++t) s += v[t] * model.slices[t].weight;
        return s / hours;
    };
    one.slices = {TimeSlice{"year", hours}};
    for (auto& [carrier, values] : one.demand) {
        double total = 0.0;
        for (double v : values) total += v;
        values = {total};
    }
    for (Technology& tech : one.technologies) {
        // Procurement capacity depends on the peak, which collapsing flattens.
        if (tech.procurement) {
            tech.existing_capacity = model.existing_capacity(tech);
            tech.procurement = false;
        }
        tech.availability = {weighted_mean(tech.availability)};
        if (tech.input) tech.input->cop = {weighted_mean(tech.input->cop)};
    }
    return one;
}

}  // namespace vfmga::esm
