#include "vfmga/esm/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace vfmga::esm {
namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError("system model: " + what);
}

}  // namespace

void SystemModel::validate() const {
    require(!slices.empty(), "no time slices");
    require(!technologies.empty(), "no technologies");
    std::set<std::string> carrier_set(carriers.begin(), carriers.end());
    require(carrier_set.size() == carriers.size(), "duplicate carrier id");

    for (const TimeSlice& s : slices)
        require(s.weight > 0.0 && std::isfinite(s.weight), "slice '" + s.id + "' needs a positive weight");
    const double hours = total_hours();
    require(std::abs(hours - hours_per_year) <= hours_tolerance * std::max(1.0, hours_per_year),
            "slice weights sum to " + std::to_string(hours) + " h, expected " + std::to_string(hours_per_year));
    require(emission_cap >= 0.0, "negative emission cap");
    require(procurement_factor > 0.0, "procurement factor must be positive");

    for (const auto& [carrier, values] : demand) {
        require(carrier_set.contains(carrier), "demand for undeclared carrier '" + carrier + "'");
        require(values.size() == slices.size(), "demand for '" + carrier + "' does not cover every slice");
        for (double v : values) require(v >= 0.0 && std::isfinite(v), "negative demand for '" + carrier + "'");
    }

    std::set<std::string> ids;
    for (const Technology& t : technologies) {
        const std::string who = "technology '" + t.id + "': ";
        require(ids.insert(t.id).second, "duplicate technology id '" + t.id + "'");
        require(carrier_set.contains(t.sector), who + "undeclared sector carrier '" + t.sector + "'");
        require(t.outputs.contains(t.sector), who + "outputs must include the sector carrier");
        for (const auto& [c, ratio] : t.outputs) {
            require(carrier_set.contains(c), who + "undeclared output carrier '" + c + "'");
            require(ratio >= 0.0, who + "negative output ratio");
        }
        if (t.input) {
            require(carrier_set.contains(t.input->carrier), who + "undeclared input carrier '" + t.input->carrier + "'");
            require(t.input->cop.size() == slices.size(), who + "cop profile length mismatch");
            for (double c : t.input->cop) require(c > 0.0 && std::isfinite(c), who + "cop must be positive");
        }
        const auto& k = t.costs;
        require(k.invest >= 0 && k.fom >= 0 && k.vom >= 0 && k.fuel >= 0 && k.aux >= 0, who + "negative cost");
        require(t.existing_capacity >= 0.0 && t.max_investment >= 0.0, who + "negative capacity");
        require(std::isfinite(t.max_investment), who + "max investment must be finite");
        require(t.emission_factor >= 0.0, who + "negative emission factor");
        require(t.availability.size() == slices.size(), who + "availability profile length mismatch");
        for (double a : t.availability) require(a >= 0.0 && a <= 1.0, who + "availability outside [0, 1]");
        if (t.max_annual_generation) {
            require(*t.max_annual_generation >= 0.0, who + "negative annual generation limit");
            const double ceiling = (existing_capacity(t) + t.max_investment) * hours;
            require(*t.max_annual_generation <= ceiling * (1.0 + 1e-12),
                    who + "annual generation limit exceeds capacity times modelled hours");
        }
    }
}

std::size_t SystemModel::technology_index(std::string_view id) const {
    for (std::size_t i = 0; i < technologies.size(); ++i)
        if (technologies[i].id == id) return i;
    throw ValidationError("unknown technology '" + std::string(id) + "'");
}

bool SystemModel::has_carrier(std::string_view id) const {
    return std::find(carriers.begin(), carriers.end(), id) != carriers.end();
}

double SystemModel::total_hours() const {
    return std::accumulate(slices.begin(), slices.end(), 0.0,
                           [](double s, const TimeSlice& t) { return s + t.weight; });
}

double SystemModel::annual_demand(std::string_view carrier) const {
    auto it = demand.find(std::string(carrier));
    if (it == demand.end()) return 0.0;
    return std::accumulate(it->second.begin(), it->second.end(), 0.0);
}

double SystemModel::total_annual_demand() const {
    double s = 0.0;
    for (const auto& [c, v] : demand) s += std::accumulate(v.begin(), v.end(), 0.0);
    return s;
}

double SystemModel::peak_demand(std::string_view carrier) const {
    auto it = demand.find(std::string(carrier));
    if (it == demand.end()) return 0.0;
    double peak = 0.0;
    for (std::size_t t = 0; t < slices.size() && t < it->second.size(); ++t)
        peak = std::max(peak, it->second[t] / slices[t].weight);
    return peak;
}

double SystemModel::existing_capacity(const Technology& tech) const {
    if (tech.procurement) return procurement_factor * peak_demand(tech.sector);
    return tech.existing_capacity;
}

double SystemModel::max_annual_supply(const Technology& tech) const {
    const double cap = existing_capacity(tech) + tech.max_investment;
    double supply = 0.0;
    for (std::size_t t = 0; t < slices.size(); ++t) supply += tech.availability[t] * cap * slices[t].weight;
    if (tech.max_annual_generation) supply = std::min(supply, *tech.max_annual_generation);
    return supply;
}

}  // namespace vfmga::esm
