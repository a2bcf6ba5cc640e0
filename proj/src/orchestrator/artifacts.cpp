#include "vfmga/orchestrator/artifacts.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "vfmga/error.hpp"

namespace vfmga::orchestrator {

using nlohmann::json;

json groups_json(std::span<const mga::MgaGroup> groups, std::span<const mga::WeightVector> vectors) {
    json g = json::array();
    for (const auto& x : groups) {
        g.push_back({{"id", x.id},
                     {"kind", mga::to_string(x.kind)},
                     {"strategy", mga::to_string(x.strategy)},
                     {"attribute", x.attribute ? json(*x.attribute) : json(nullptr)},
                     {"dimension", mga::to_string(x.dimension)},
                     {"members", x.members}});
    }
    json v = json::array();
    for (const auto& w : vectors) {
        json weights = json::array();
        for (const auto& [group, weight] : w.weights) weights.push_back({{"group", group}, {"weight", weight}});
        v.push_back({{"id", w.id},
                     {"scheme", mga::to_string(w.scheme)},
                     {"strategy", mga::to_string(w.strategy)},
                     {"direction", w.direction},
                     {"weights", std::move(weights)}});
    }
    return {{"groups", std::move(g)}, {"weight_vectors", std::move(v)}};
}

namespace {

json costs_json(const esm::CostBreakdown& c) {
    return {{"total", c.total},         {"invest", c.invest}, {"fixed_om", c.fixed_om},
            {"variable_om", c.variable_om}, {"fuel", c.fuel}, {"auxiliary", c.auxiliary}};
}

}  // namespace

json alternatives_json(const mga::SweepResult& sweep, const esm::SystemModel& model) {
    json techs = json::array();
    for (const auto& t : model.technologies) techs.push_back(t.id);
    json failures = json::array();
    for (const auto& f : sweep.failures)
        failures.push_back({{"run_index", f.run_index}, {"weight_vector", f.weight_vector}, {"slack", f.slack}, {"message", f.message}});
    json alts = json::array();
    for (const auto& a : sweep.alternatives) {
        json prov = json::array();
        for (const auto& p : a.provenance)
            prov.push_back({{"run_index", p.run_index},
                            {"weight_vector", p.weight_vector},
                            {"groups", p.groups},
                            {"scheme", p.scheme},
                            {"strategy", p.strategy},
                            {"direction", p.direction},
                            {"slack", p.slack},
                            {"mga_objective", p.mga_objective}});
        alts.push_back({{"id", a.id},
                        {"slack_used", a.slack_used},
                        {"capacity_artefact", a.capacity_artefact},
                        {"costs", costs_json(a.costs)},
                        {"generation", a.generation},
                        {"invested", a.invested},
                        {"capacity", a.capacity},
                        {"provenance", std::move(prov)}});
    }
    return {{"f_star", sweep.f_star},
            {"runs", sweep.runs},
            {"raw_alternatives", sweep.raw_alternatives},
            {"technologies", std::move(techs)},
            {"failures", std::move(failures)},
            {"alternatives", std::move(alts)}};
}

std::vector<mga::Alternative> alternatives_from_json(const json& j, const esm::SystemModel& model) {
    try {
        const json& techs = j.at("technologies");
        if (techs.size() != model.technologies.size())
            throw ValidationError("alternatives.json was written for a different system");
        for (std::size_t t = 0; t < techs.size(); ++t)
            if (techs[t].get<std::string>() != model.technologies[t].id)
                throw ValidationError("alternatives.json was written for a different system");
        std::vector<mga::Alternative> out;
        for (const json& a : j.at("alternatives")) {
            mga::Alternative alt;
            alt.id = a.at("id").get<std::string>();
            alt.slack_used = a.at("slack_used").get<double>();
            alt.capacity_artefact = a.at("capacity_artefact").get<bool>();
            const json& c = a.at("costs");
            alt.costs = {c.at("total").get<double>(),       c.at("invest").get<double>(), c.at("fixed_om").get<double>(),
                         c.at("variable_om").get<double>(), c.at("fuel").get<double>(),   c.at("auxiliary").get<double>()};
            alt.generation = a.at("generation").get<std::vector<double>>();
            alt.invested = a.at("invested").get<std::vector<double>>();
            alt.capacity = a.at("capacity").get<std::vector<double>>();
            if (alt.generation.size() != techs.size() || alt.invested.size() != techs.size() || alt.capacity.size() != techs.size())
                throw ValidationError("alternative '" + alt.id + "' has the wrong number of technologies");
            for (const json& p : a.at("provenance")) {
                mga::Provenance prov;
                prov.run_index = p.at("run_index").get<std::size_t>();
                prov.weight_vector = p.at("weight_vector").get<std::string>();
                prov.groups = p.at("groups").get<std::vector<std::string>>();
                prov.scheme = p.at("scheme").get<std::string>();
                prov.strategy = p.at("strategy").get<std::string>();
                prov.direction = p.at("direction").get<std::string>();
                prov.slack = p.at("slack").get<double>();
                prov.mga_objective = p.at("mga_objective").get<double>();
                alt.provenance.push_back(std::move(prov));
            }
            out.push_back(std::move(alt));
        }
        return out;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed alternatives.json: ") + e.what());
    }
}

void write_costs_csv(std::ostream& out, std::span<const mga::Alternative> alternatives) {
    out << "alternative,total,invest,fixed_om,variable_om,fuel,auxiliary,slack_used\n";
    for (const auto& a : alternatives) {
        const auto& c = a.costs;
        fmt::print(out, "{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", a.id, c.total, c.invest,
                   c.fixed_om, c.variable_om, c.fuel, c.auxiliary, a.slack_used);
    }
}

json ranges_json(const attributes::AttributeCatalog& catalog, std::span<const attributes::ImpactRange> ranges) {
    json out = json::array();
    for (std::size_t j = 0; j < ranges.size(); ++j) {
        const auto& a = catalog.attributes[j];
        out.push_back({{"attribute", a.id},
                       {"unit", a.unit},
                       {"direction", attributes::to_string(a.direction)},
                       {"worst", ranges[j].worst},
                       {"best", ranges[j].best}});
    }
    return {{"ranges", std::move(out)}};
}

std::vector<attributes::ImpactRange> ranges_from_json(const json& j, const attributes::AttributeCatalog& catalog) {
    const json& list = j.at("ranges");
    if (list.size() != catalog.attributes.size())
        throw ValidationError(fmt::format("ranges.json lists {} attributes, the catalog {}", list.size(), catalog.attributes.size()));
    std::vector<attributes::ImpactRange> out;
    for (std::size_t k = 0; k < list.size(); ++k) {
        if (list[k].at("attribute").get<std::string>() != catalog.attributes[k].id)
            throw ValidationError("ranges.json does not follow the catalog order at '" + catalog.attributes[k].id + "'");
        out.push_back({list[k].at("worst").get<double>(), list[k].at("best").get<double>()});
    }
    return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i)
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    return out;
}

double parse_double(std::string_view s, std::size_t line) {
    // from_chars for double needs GCC 11, which is the minimum supported compiler.
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ValidationError(fmt::format("profiles.csv line {}: '{}' is not a number", line, s));
    return v;
}

}  // namespace

std::vector<attributes::AttributeProfile> read_profiles_csv(std::istream& in, const attributes::AttributeCatalog& catalog) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("profiles.csv is empty");
    std::ostringstream expected;
    attributes::write_profiles_csv(expected, {}, catalog);
    std::string header = expected.str();
    header.pop_back();
    if (line != header) throw ValidationError("profiles.csv header does not match the catalog");
    std::vector<attributes::AttributeProfile> out;
    for (std::size_t n = 2; std::getline(in, line); ++n) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != 1 + 3 * catalog.attributes.size())
            throw ValidationError(fmt::format("profiles.csv line {} has {} cells", n, cells.size()));
        attributes::AttributeProfile p;
        p.alternative = std::string(cells[0]);
        for (std::size_t j = 0; j < catalog.attributes.size(); ++j)
            p.values.push_back({parse_double(cells[1 + 3 * j], n), parse_double(cells[2 + 3 * j], n),
                                parse_double(cells[3 + 3 * j], n)});
        out.push_back(std::move(p));
    }
    return out;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace vfmga::orchestrator
