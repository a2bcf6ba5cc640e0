#include "vfmga/attributes/catalog.hpp"

#include <set>

#include "vfmga/json_read.hpp"

namespace vfmga::attributes {

namespace jr = json_read;
using nlohmann::json;

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError("attribute catalog: " + what);
}

template <class Enum, std::size_t N>
Enum parse_enum(const json& j, const std::string& path, std::string_view key,
                const std::pair<std::string_view, Enum> (&names)[N], std::optional<Enum> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        jr::fail(path, "missing required key '" + std::string(key) + "'");
    }
    const std::string value = jr::string(j, path, key);
    for (const auto& [name, e] : names)
        if (name == value) return e;
    jr::fail(jr::child(path, key), "unrecognised value '" + value + "'");
}

constexpr std::pair<std::string_view, Direction> kDirections[] = {
    {"lower-better", Direction::kLowerBetter}, {"higher-better", Direction::kHigherBetter}};
constexpr std::pair<std::string_view, Basis> kBases[] = {
    {"generation", Basis::kGeneration}, {"capacity", Basis::kCapacity}, {"systemic", Basis::kSystemic}};
constexpr std::pair<std::string_view, Aggregation> kAggregations[] = {
    {"sum", Aggregation::kSum},
    {"demand-weighted-mean", Aggregation::kDemandWeightedMean},
    {"capacity-weighted-mean", Aggregation::kCapacityWeightedMean},
    {"shannon", Aggregation::kShannon},
    {"model-direct", Aggregation::kModelDirect}};
constexpr std::pair<std::string_view, CostComponent> kComponents[] = {
    {"none", CostComponent::kNone}, {"operating", CostComponent::kOperating}, {"investment", CostComponent::kInvestment}};
constexpr std::pair<std::string_view, UncertaintyModel> kUncertainty[] = {
    {"none", UncertaintyModel::kNone},
    {"normal-relative", UncertaintyModel::kNormalRelative},
    {"uniform-support", UncertaintyModel::kUniformSupport}};

template <class Enum, std::size_t N>
std::string_view name_of(Enum e, const std::pair<std::string_view, Enum> (&names)[N]) {
    for (const auto& [name, v] : names)
        if (v == e) return name;
    return "?";
}

ScoreRange range_from_json(const json& j, const std::string& path) {
    if (j.is_array()) {
        std::vector<double> v = jr::numbers(j, path);
        if (v.size() != 2) jr::fail(path, "expected [min, max]");
        return {v[0], v[1]};
    }
    jr::allowed_keys(j, path, {"min", "max"});
    return {jr::number(j, path, "min"), jr::number(j, path, "max")};
}

AttributeSpec attribute_from_json(const json& j, const std::string& path) {
    jr::allowed_keys(j, path,
                     {"id", "name", "unit", "objective", "direction", "basis", "aggregation", "component",
                      "decomposable", "uncertainty", "scale"});
    AttributeSpec a;
    a.id = jr::string(j, path, "id");
    a.name = jr::string_or(j, path, "name", a.id);
    a.unit = jr::string_or(j, path, "unit", "");
    a.objective = jr::string_or(j, path, "objective", "");
    a.direction = parse_enum(j, path, "direction", kDirections);
    a.basis = parse_enum(j, path, "basis", kBases);
    a.aggregation = parse_enum(j, path, "aggregation", kAggregations);
    a.component = parse_enum(j, path, "component", kComponents, std::optional(CostComponent::kNone));
    a.decomposable = jr::boolean_or(j, path, "decomposable", a.basis != Basis::kSystemic);
    if (j.contains("uncertainty")) {
        const std::string up = jr::child(path, "uncertainty");
        const json& u = j["uncertainty"];
        jr::allowed_keys(u, up, {"model", "sd", "envelope_sd"});
        a.uncertainty = parse_enum(u, up, "model", kUncertainty);
        a.relative_sd = jr::number_or(u, up, "sd", a.relative_sd);
        a.envelope_sd = jr::number_or(u, up, "envelope_sd", a.envelope_sd);
    }
    if (j.contains("scale")) a.scale = range_from_json(j["scale"], jr::child(path, "scale"));
    return a;
}

}  // namespace

void AttributeCatalog::validate() const {
    require(!attributes.empty(), "no attributes");
    std::set<std::string> ids;
    for (const AttributeSpec& a : attributes) {
        const std::string who = "attribute '" + a.id + "': ";
        require(!a.id.empty(), "empty attribute id");
        require(ids.insert(a.id).second, "duplicate attribute id '" + a.id + "'");
        require(a.relative_sd >= 0.0 && a.envelope_sd >= 0.0, who + "negative uncertainty width");
        if (a.decomposable) require(a.basis != Basis::kSystemic, who + "a systemic attribute cannot be decomposable");
        switch (a.aggregation) {
            case Aggregation::kShannon:
                require(a.basis == Basis::kSystemic && !a.decomposable, who + "the Shannon index is systemic");
                break;
            case Aggregation::kModelDirect:
                require(a.component != CostComponent::kNone, who + "model-direct attributes need a cost component");
                break;
            case Aggregation::kCapacityWeightedMean:
                require(a.basis == Basis::kCapacity, who + "capacity-weighted means need a capacity basis");
                require(a.scale.has_value(), who + "capacity-weighted means need a score scale");
                break;
            case Aggregation::kDemandWeightedMean:
                require(a.basis == Basis::kGeneration, who + "demand-weighted means need a generation basis");
                break;
            case Aggregation::kSum:
                require(a.basis != Basis::kSystemic, who + "sums need a generation or capacity basis");
                break;
        }
        if (a.scale) require(a.scale->min <= a.scale->max, who + "scale min exceeds max");
        if (a.uncertainty == UncertaintyModel::kUniformSupport)
            require(a.aggregation == Aggregation::kCapacityWeightedMean,
                    who + "uniform-support uncertainty applies to expert-scale attributes");
        if (auto it = expert_ranges.find(a.id); it != expert_ranges.end())
            for (const auto& [tech, r] : it->second) {
                require(r.min <= r.max, who + "score range min exceeds max for '" + tech + "'");
                if (a.scale)
                    require(r.min >= a.scale->min && r.max <= a.scale->max,
                            who + "score range for '" + tech + "' leaves the scale");
            }
        if (auto it = coefficients.find(a.id); it != coefficients.end() && a.scale)
            for (const auto& [tech, c] : it->second) {
                require(c >= a.scale->min && c <= a.scale->max, who + "score for '" + tech + "' leaves the scale");
                if (auto r = expert_ranges.find(a.id); r != expert_ranges.end())
                    if (auto t = r->second.find(tech); t != r->second.end())
                        require(c >= t->second.min && c <= t->second.max,
                                who + "score for '" + tech + "' lies outside its range");
            }
    }
    for (const auto& [attr, row] : coefficients) require(ids.contains(attr), "coefficients for undeclared attribute '" + attr + "'");
    for (const auto& [attr, row] : expert_ranges)
        require(ids.contains(attr), "score ranges for undeclared attribute '" + attr + "'");
}

const AttributeSpec& AttributeCatalog::attribute(std::string_view id) const { return attributes[index_of(id)]; }

std::size_t AttributeCatalog::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < attributes.size(); ++i)
        if (attributes[i].id == id) return i;
    throw ValidationError("unknown attribute '" + std::string(id) + "'");
}

double AttributeCatalog::contribution(const AttributeSpec& attr, const esm::Technology& tech) const {
    if (auto row = coefficients.find(attr.id); row != coefficients.end())
        if (auto c = row->second.find(tech.id); c != row->second.end()) return c->second;
    if (attr.aggregation == Aggregation::kModelDirect) {
        if (attr.component == CostComponent::kOperating) return tech.costs.vom + tech.costs.fuel + tech.costs.aux;
        if (attr.component == CostComponent::kInvestment) return tech.costs.invest;
    }
    if (attr.aggregation == Aggregation::kCapacityWeightedMean)
        if (auto row = expert_ranges.find(attr.id); row != expert_ranges.end())
            if (auto r = row->second.find(tech.id); r != row->second.end()) return 0.5 * (r->second.min + r->second.max);
    throw ValidationError("attribute '" + attr.id + "' has no coefficient for technology '" + tech.id + "'");
}

void AttributeCatalog::check_coverage(const esm::SystemModel& model) const {
    for (const AttributeSpec& a : attributes) {
        const bool needs_coefficients = a.aggregation == Aggregation::kSum ||
                                        a.aggregation == Aggregation::kDemandWeightedMean ||
                                        a.aggregation == Aggregation::kCapacityWeightedMean;
        if (a.decomposable && needs_coefficients && !coefficients.contains(a.id) && !expert_ranges.contains(a.id))
            throw ValidationError("decomposable attribute '" + a.id + "' has no contribution data");
        for (const esm::Technology& t : model.technologies) {
            if (needs_coefficients || a.decomposable) (void)contribution(a, t);
            if (a.uncertainty == UncertaintyModel::kUniformSupport) {
                auto row = expert_ranges.find(a.id);
                if (row == expert_ranges.end() || !row->second.contains(t.id))
                    throw ValidationError("attribute '" + a.id + "' has no score range for technology '" + t.id + "'");
            }
        }
    }
}

AttributeCatalog catalog_from_json(const json& doc) {
    jr::allowed_keys(doc, "$", {"description", "attributes", "coefficients", "expert_ranges", "provenance"});
    AttributeCatalog c;
    const json& attrs = jr::member(doc, "$", "attributes");
    if (!attrs.is_array()) jr::fail("$.attributes", "expected an array");
    for (std::size_t i = 0; i < attrs.size(); ++i)
        c.attributes.push_back(attribute_from_json(attrs[i], jr::child("$.attributes", i)));

    const std::string default_source = jr::string_or(doc, "$", "provenance", "");
    if (doc.contains("coefficients")) {
        const json& coeffs = doc["coefficients"];
        jr::expect_object(coeffs, "$.coefficients");
        for (const auto& [attr, row] : coeffs.items()) {
            const std::string rp = jr::child("$.coefficients", attr);
            jr::expect_object(row, rp);
            for (const auto& [tech, entry] : row.items()) {
                const std::string ep = jr::child(rp, tech);
                if (entry.is_object()) {
                    jr::allowed_keys(entry, ep, {"value", "source"});
                    c.coefficients[attr][tech] = jr::number(entry, ep, "value");
                    c.provenance[attr][tech] = jr::string_or(entry, ep, "source", default_source);
                } else {
                    c.coefficients[attr][tech] = jr::number(entry, ep);
                    if (!default_source.empty()) c.provenance[attr][tech] = default_source;
                }
            }
        }
    }
    if (doc.contains("expert_ranges")) {
        const json& ranges = doc["expert_ranges"];
        jr::expect_object(ranges, "$.expert_ranges");
        for (const auto& [attr, row] : ranges.items()) {
            const std::string rp = jr::child("$.expert_ranges", attr);
            jr::expect_object(row, rp);
            for (const auto& [tech, entry] : row.items())
                c.expert_ranges[attr][tech] = range_from_json(entry, jr::child(rp, tech));
        }
    }
    c.validate();
    return c;
}

AttributeCatalog load_catalog(const std::filesystem::path& path) { return catalog_from_json(jr::parse_file(path)); }

std::string_view to_string(Direction d) noexcept { return name_of(d, kDirections); }
std::string_view to_string(Basis b) noexcept { return name_of(b, kBases); }
std::string_view to_string(Aggregation a) noexcept { return name_of(a, kAggregations); }
std::string_view to_string(UncertaintyModel u) noexcept { return name_of(u, kUncertainty); }

}  // namespace vfmga::attributes
