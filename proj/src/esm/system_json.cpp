#include "vfmga/esm/system_json.hpp"

#include "vfmga/json_read.hpp"

namespace vfmga::esm {

namespace jr = json_read;
using nlohmann::json;

namespace {

Technology technology_from_json(const json& j, const std::string& path, std::size_t n_slices) {
    jr::allowed_keys(j, path,
                     {"id", "name", "note", "sector", "outputs", "input", "existing_capacity", "max_investment",
                      "max_annual_generation", "procurement", "costs", "emission_factor", "availability"});
    Technology t;
    t.id = jr::string(j, path, "id");
    t.sector = jr::string(j, path, "sector");
    if (j.contains("outputs")) {
        const std::string op = jr::child(path, "outputs");
        jr::expect_object(j["outputs"], op);
        for (const auto& [carrier, ratio] : j["outputs"].items())
            t.outputs[carrier] = jr::number(ratio, jr::child(op, carrier));
    } else {
        t.outputs[t.sector] = 1.0;
    }
    if (j.contains("input")) {
        const std::string ip = jr::child(path, "input");
        const json& in = j["input"];
        jr::allowed_keys(in, ip, {"carrier", "cop"});
        t.input = InputCarrier{jr::string(in, ip, "carrier"),
                               jr::profile(jr::member(in, ip, "cop"), jr::child(ip, "cop"), n_slices)};
    }
    t.existing_capacity = jr::number_or(j, path, "existing_capacity", 0.0);
    t.max_investment = jr::number_or(j, path, "max_investment", 0.0);
    t.max_annual_generation = jr::optional_number(j, path, "max_annual_generation");
    t.procurement = jr::boolean_or(j, path, "procurement", false);
    if (j.contains("costs")) {
        const std::string cp = jr::child(path, "costs");
        const json& c = j["costs"];
        jr::allowed_keys(c, cp, {"invest", "fom", "vom", "fuel", "aux"});
        t.costs.invest = jr::number_or(c, cp, "invest", 0.0);
        t.costs.fom = jr::number_or(c, cp, "fom", 0.0);
        t.costs.vom = jr::number_or(c, cp, "vom", 0.0);
        t.costs.fuel = jr::number_or(c, cp, "fuel", 0.0);
        t.costs.aux = jr::number_or(c, cp, "aux", 0.0);
    }
    t.emission_factor = jr::number_or(j, path, "emission_factor", 0.0);
    t.availability = j.contains("availability")
                         ? jr::profile(j["availability"], jr::child(path, "availability"), n_slices)
                         : std::vector<double>(n_slices, 1.0);
    return t;
}

}  // namespace

SystemModel system_from_json(const json& doc) {
    jr::allowed_keys(doc, "$",
                     {"description", "hours_per_year", "hours_tolerance", "procurement_factor", "carriers", "slices",
                      "demand", "emission_cap", "technologies"});
    SystemModel m;
    m.hours_per_year = jr::number_or(doc, "$", "hours_per_year", m.hours_per_year);
    m.hours_tolerance = jr::number_or(doc, "$", "hours_tolerance", m.hours_tolerance);
    m.procurement_factor = jr::number_or(doc, "$", "procurement_factor", m.procurement_factor);
    if (auto cap = jr::optional_number(doc, "$", "emission_cap")) m.emission_cap = *cap;

    const json& carriers = jr::member(doc, "$", "carriers");
    if (!carriers.is_array()) jr::fail("$.carriers", "expected an array of carrier ids");
    for (std::size_t i = 0; i < carriers.size(); ++i) {
        if (!carriers[i].is_string()) jr::fail(jr::child("$.carriers", i), "expected a string");
        m.carriers.push_back(carriers[i].get<std::string>());
    }

    const json& slices = jr::member(doc, "$", "slices");
    if (!slices.is_array()) jr::fail("$.slices", "expected an array");
    for (std::size_t i = 0; i < slices.size(); ++i) {
        const std::string p = jr::child("$.slices", i);
        jr::allowed_keys(slices[i], p, {"id", "weight"});
        m.slices.push_back({jr::string(slices[i], p, "id"), jr::number(slices[i], p, "weight")});
    }

    const json& demand = jr::member(doc, "$", "demand");
    jr::expect_object(demand, "$.demand");
    for (const auto& [carrier, values] : demand.items())
        m.demand[carrier] = jr::profile(values, jr::child("$.demand", carrier), m.slices.size());

    const json& techs = jr::member(doc, "$", "technologies");
    if (!techs.is_array()) jr::fail("$.technologies", "expected an array");
    for (std::size_t i = 0; i < techs.size(); ++i)
        m.technologies.push_back(technology_from_json(techs[i], jr::child("$.technologies", i), m.slices.size()));

    m.validate();
    return m;
}

SystemModel load_system(const std::filesystem::path& path) { return system_from_json(jr::parse_file(path)); }

}  // namespace vfmga::esm
