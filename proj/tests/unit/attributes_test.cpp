#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "support/desk.hpp"
#include "vfmga/attributes/evaluate.hpp"

namespace {

using namespace vfmga;
using attributes::Aggregation;
using attributes::AttributeCatalog;
using attributes::AttributeSpec;
using attributes::UncertaintyModel;

esm::SystemModel two_tech_model() {
    esm::SystemModel m;
    m.carriers = {"heat"};
    m.slices = {{"y", 8760.0}};
    m.demand["heat"] = {4000.0};
    for (std::string id : {"a", "b"}) {
        esm::Technology t;
        t.id = id;
        t.sector = "heat";
        t.outputs["heat"] = 1.0;
        t.existing_capacity = 1.0;
        t.availability = {1.0};
        m.technologies.push_back(t);
    }
    return m;
}

mga::Alternative alternative(std::vector<double> gen, std::vector<double> cap) {
    mga::Alternative a;
    a.id = "A0001";
    a.generation = std::move(gen);
    a.invested.assign(a.generation.size(), 0.0);
    a.capacity = std::move(cap);
    return a;
}

AttributeSpec spec(std::string id, Aggregation agg, attributes::Basis basis = attributes::Basis::kGeneration) {
    AttributeSpec a;
    a.id = std::move(id);
    a.aggregation = agg;
    a.basis = basis;
    return a;
}

TEST(Shannon, KnownValues) {
    const double third = 1.0 / 3.0;
    EXPECT_NEAR(attributes::shannon_index(std::vector{third, third, 1.0 - 2 * third}), std::log(3.0), 1e-12);
    EXPECT_EQ(attributes::shannon_index(std::vector{1.0, 0.0, 0.0}), 0.0);
    // -(0.5 ln 0.5 + 2 * 0.25 ln 0.25) evaluated at 50 digits.
    EXPECT_NEAR(attributes::shannon_index(std::vector{0.5, 0.25, 0.25}), 1.0397207708399179, 1e-15);
    EXPECT_NEAR(attributes::shannon_index(std::vector{0.5, 0.25, 0.25}), 1.0397, 5e-5);
}

TEST(Shannon, UniformSharesGiveLogN) {
    for (int n = 2; n <= 6; ++n) {
        std::vector<double> shares(n, 1.0 / n);
        EXPECT_NEAR(attributes::shannon_index(shares), std::log(static_cast<double>(n)), 1e-12) << n;
    }
}

TEST(Shannon, PermutationInvariantAndMaximalAtUniform) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + trial % 5;
        std::vector<double> s(n);
        for (double& x : s) x = u(rng);
        const double total = std::accumulate(s.begin(), s.end(), 0.0);
        for (double& x : s) x /= total;
        const double h = attributes::shannon_index(s);
        EXPECT_LE(h, std::log(static_cast<double>(n)) + 1e-12);
        EXPECT_GE(h, 0.0);
        std::shuffle(s.begin(), s.end(), rng);
        EXPECT_NEAR(attributes::shannon_index(s), h, 1e-13);
    }
}

TEST(Shannon, RejectsUnnormalisedShares) {
    EXPECT_THROW((void)attributes::shannon_index(std::vector{0.5, 0.4}), ValidationError);
    EXPECT_THROW((void)attributes::shannon_index(std::vector{1.2, -0.2}), ValidationError);
}

TEST(Evaluate, SumAndWeightedMeanExamples) {
    esm::SystemModel m = two_tech_model();
    m.technologies.resize(1);
    AttributeCatalog c;
    c.attributes = {spec("transport", Aggregation::kSum)};
    c.coefficients["transport"] = {{"a", 4.0 / 1000.0}};  // 4 trucks per GWh
    auto p = attributes::evaluate(alternative({2000.0}, {1.0}), c, m);
    EXPECT_NEAR(p.values[0].mean, 8.0, 1e-12);

    m = two_tech_model();
    c.attributes = {spec("pef", Aggregation::kDemandWeightedMean)};
    c.coefficients = {{"pef", {{"a", 1.8}, {"b", 0.2}}}};
    p = attributes::evaluate(alternative({1500.0, 1500.0}, {1.0, 1.0}), c, m);
    EXPECT_NEAR(p.values[0].mean, 1.0, 1e-12);
}

TEST(Evaluate, SumsScaleAndMeansDoNot) {
    esm::SystemModel m = two_tech_model();
    AttributeCatalog c;
    c.attributes = {spec("s", Aggregation::kSum), spec("m", Aggregation::kDemandWeightedMean),
                    spec("k", Aggregation::kSum, attributes::Basis::kCapacity)};
    c.coefficients = {{"s", {{"a", 0.3}, {"b", 1.7}}}, {"m", {{"a", 2.0}, {"b", 0.5}}}, {"k", {{"a", 3.0}, {"b", 1.0}}}};
    auto base = attributes::evaluate(alternative({123.0, 456.0}, {0.5, 0.25}), c, m);
    auto twice = attributes::evaluate(alternative({246.0, 912.0}, {1.0, 0.5}), c, m);
    EXPECT_EQ(twice.values[0].mean, 2.0 * base.values[0].mean);
    EXPECT_NEAR(twice.values[1].mean, base.values[1].mean, 1e-15);
    EXPECT_EQ(twice.values[2].mean, 2.0 * base.values[2].mean);
}

TEST(Evaluate, MissingCoefficientNamesAttributeAndTechnology) {
    esm::SystemModel m = two_tech_model();
    AttributeCatalog c;
    c.attributes = {spec("land", Aggregation::kSum)};
    c.coefficients["land"] = {{"a", 1.0}};
    try {
        (void)attributes::evaluate(alternative({1.0, 1.0}, {1.0, 1.0}), c, m);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("'land'"), std::string::npos);
        EXPECT_NE(msg.find("'b'"), std::string::npos);
    }
}

TEST(Evaluate, CostAttributesComeFromTheBreakdown) {
    const auto& desk = desk::desk_sweep();
    const auto& opt = desk.result.alternatives.front();
    ASSERT_EQ(opt.id, "A0000");
    auto p = attributes::evaluate(opt, desk.catalog, desk.model);
    const auto d = esm::decompose(desk.model, desk.context.compiled(), desk.context.optimum());
    const double om = d.costs.variable_om + d.costs.fixed_om + d.costs.fuel + d.costs.auxiliary;
    EXPECT_NEAR(p.values[desk.catalog.index_of("om_cost")].mean, om, 1e-9 * om);
    EXPECT_NEAR(p.values[desk.catalog.index_of("invest_cost")].mean, d.costs.invest, 1e-9 * d.costs.invest);
}

TEST(ImpactRanges, NormalEnvelopeOrientedByDirection) {
    esm::SystemModel m = two_tech_model();
    AttributeCatalog c;
    c.attributes = {spec("cost", Aggregation::kSum), spec("good", Aggregation::kSum)};
    for (auto& a : c.attributes) {
        a.uncertainty = UncertaintyModel::kNormalRelative;
        a.relative_sd = 0.1;
    }
    c.attributes[1].direction = attributes::Direction::kHigherBetter;
    c.coefficients = {{"cost", {{"a", 0.1}, {"b", 0.1}}}, {"good", {{"a", 0.1}, {"b", 0.1}}}};
    std::vector<attributes::AttributeProfile> profiles{
        attributes::evaluate(alternative({500.0, 500.0}, {1.0, 1.0}), c, m)};
    ASSERT_DOUBLE_EQ(profiles[0].values[0].mean, 100.0);
    auto r = attributes::impact_ranges(profiles, c);
    EXPECT_NEAR(r[0].worst, 120.0, 1e-12);
    EXPECT_NEAR(r[0].best, 80.0, 1e-12);
    EXPECT_NEAR(r[1].worst, 80.0, 1e-12);
    EXPECT_NEAR(r[1].best, 120.0, 1e-12);
}

TEST(ImpactRanges, ExpertSupportMixesByCapacity) {
    esm::SystemModel m = two_tech_model();
    AttributeCatalog c;
    AttributeSpec a = spec("burden", Aggregation::kCapacityWeightedMean, attributes::Basis::kCapacity);
    a.scale = attributes::ScoreRange{1.0, 7.0};
    a.uncertainty = UncertaintyModel::kUniformSupport;
    c.attributes = {a};
    c.expert_ranges["burden"] = {{"a", {2.0, 5.0}}, {"b", {3.0, 6.0}}};
    c.validate();
    std::vector<attributes::AttributeProfile> profiles{
        attributes::evaluate(alternative({10.0, 10.0}, {0.4, 0.4}), c, m)};
    EXPECT_NEAR(profiles[0].values[0].low, 2.5, 1e-12);
    EXPECT_NEAR(profiles[0].values[0].high, 5.5, 1e-12);
    EXPECT_NEAR(profiles[0].values[0].mean, 4.0, 1e-12);
    auto r = attributes::impact_ranges(profiles, c);
    EXPECT_NEAR(r[0].worst, 5.5, 1e-12);
    EXPECT_NEAR(r[0].best, 2.5, 1e-12);
}

TEST(ImpactRanges, ZeroUncertaintySpansTheMeans) {
    esm::SystemModel m = two_tech_model();
    AttributeCatalog c;
    c.attributes = {spec("x", Aggregation::kSum)};
    c.coefficients["x"] = {{"a", 1.0}, {"b", 2.0}};
    std::vector<attributes::AttributeProfile> profiles;
    for (double g : {10.0, 40.0, 25.0}) profiles.push_back(attributes::evaluate(alternative({g, 0.0}, {1, 1}), c, m));
    auto r = attributes::impact_ranges(profiles, c);
    EXPECT_EQ(r[0].worst, 40.0);
    EXPECT_EQ(r[0].best, 10.0);
    EXPECT_THROW((void)attributes::impact_ranges({}, c), ValidationError);
}

TEST(DeskProfiles, MeansLieInsideRangesAndEnvelopes) {
    const auto& desk = desk::desk_sweep();
    auto profiles = attributes::evaluate_all(desk.result.alternatives, desk.catalog, desk.model);
    auto serial = attributes::evaluate_all(desk.result.alternatives, desk.catalog, desk.model, Execution::kSerial);
    auto ranges = attributes::impact_ranges(profiles, desk.catalog);
    const std::size_t shannon = desk.catalog.index_of("shannon");
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        EXPECT_EQ(profiles[k].alternative, desk.result.alternatives[k].id);
        for (std::size_t j = 0; j < desk.catalog.attributes.size(); ++j) {
            const auto& v = profiles[k].values[j];
            EXPECT_EQ(v.mean, serial[k].values[j].mean);
            EXPECT_LE(v.low, v.mean);
            EXPECT_LE(v.mean, v.high);
            const double lo = std::min(ranges[j].worst, ranges[j].best);
            const double hi = std::max(ranges[j].worst, ranges[j].best);
            EXPECT_GE(v.mean, lo);
            EXPECT_LE(v.mean, hi);
        }
        EXPECT_GE(profiles[k].values[shannon].mean, 0.0);
        EXPECT_LE(profiles[k].values[shannon].mean, std::log(13.0));
    }
}

TEST(Catalog, DeskCatalogMatchesTheHierarchy) {
    const auto& c = desk::desk_sweep().catalog;
    const std::vector<std::string> ids{"om_cost",   "invest_cost",       "fte",
                                       "pef",       "land_use",          "price_volatility",
                                       "shannon",   "regulatory_burden", "technical_burden",
                                       "campus_area", "transport_frequency"};
    ASSERT_EQ(c.attributes.size(), ids.size());
    for (std::size_t j = 0; j < ids.size(); ++j) {
        EXPECT_EQ(c.attributes[j].id, ids[j]);
        EXPECT_EQ(c.attributes[j].direction == attributes::Direction::kHigherBetter, ids[j] == "shannon");
    }
    for (const auto& [attr, row] : c.expert_ranges)
        for (const auto& [tech, r] : row) {
            EXPECT_GE(r.min, 1.0);
            EXPECT_LE(r.max, 7.0);
        }
    EXPECT_EQ(c.provenance.at("pef").at("EP"), "synthetic");
    c.check_coverage(desk::desk_sweep().model);
}

TEST(Catalog, LoaderRejectsBadInput) {
    nlohmann::json doc = {{"attributes", {{{"id", "x"}, {"direction", "lower-better"}, {"basis", "generation"},
                                           {"aggregation", "median"}}}}};
    EXPECT_THROW((void)attributes::catalog_from_json(doc), ValidationError);
    doc["attributes"][0]["aggregation"] = "sum";
    EXPECT_NO_THROW((void)attributes::catalog_from_json(doc));
    doc["expert_ranges"] = {{"x", {{"a", {5, 3}}}}};
    EXPECT_THROW((void)attributes::catalog_from_json(doc), ValidationError);
    doc.erase("expert_ranges");
    doc["attributes"][0]["aggregation"] = "shannon";
    EXPECT_THROW((void)attributes::catalog_from_json(doc), ValidationError);
}

TEST(ProfilesCsv, HeaderAndRows) {
    esm::SystemModel m = two_tech_model();
    AttributeCatalog c;
    c.attributes = {spec("x", Aggregation::kSum)};
    c.coefficients["x"] = {{"a", 1.0}, {"b", 2.0}};
    std::vector<attributes::AttributeProfile> profiles{attributes::evaluate(alternative({1.5, 0.25}, {1, 1}), c, m)};
    std::ostringstream out;
    attributes::write_profiles_csv(out, profiles, c);
    EXPECT_EQ(out.str(), "alternative,x_mean,x_low,x_high\nA0001,2,2,2\n");
}

}  // namespace
