#include <fmt/format.h>
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracle/clustering.hpp"
#include "vfmga/mavt/analysis.hpp"

namespace {

using namespace vfmga;
using namespace vfmga::mavt;

// Real root of u^3 + u^2 + u - 1 by Cardano; then v(1/4; c) = 1/2 at c = -4 ln u.
double quarter_midpoint_curvature() {
    // Depressed cubic t^3 + p t + q with u = t - 1/3.
    const double p = 2.0 / 3.0, q = -34.0 / 27.0;
    const double disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    const double t = std::cbrt(-q / 2.0 + disc) + std::cbrt(-q / 2.0 - disc);
    return -4.0 * std::log(t - 1.0 / 3.0);
}

TEST(ValueFunction, EndpointsAreExactInBothOrientations) {
    for (auto [worst, best] : {std::pair{0.0, 10.0}, std::pair{120.0, 80.0}}) {
        for (const ValueFunction& f :
             {ValueFunction::linear(worst, best), ValueFunction::exponential(worst, best, 2.4),
              ValueFunction::exponential(worst, best, -3.0), ValueFunction::piecewise(worst, best, {{0.3, 0.6}})}) {
            EXPECT_EQ(f(worst), 0.0);
            EXPECT_EQ(f(best), 1.0);
            double prev = 0.0;
            for (int i = 1; i <= 100; ++i) {
                const double v = f(worst + (best - worst) * i / 100.0);
                EXPECT_GE(v, prev);
                prev = v;
            }
        }
    }
    auto f = ValueFunction::linear(120.0, 80.0);
    EXPECT_DOUBLE_EQ(f(100.0), 0.5);
    EXPECT_EQ(f(200.0), 0.0);
    EXPECT_EQ(f(10.0), 1.0);
    EXPECT_EQ(ValueFunction::linear(5.0, 5.0)(5.0), 1.0);
}

TEST(FitSavf, SymmetricMidpointIsLinear) {
    const Midpoint m[] = {{50.0, 0.5}};
    auto f = fit_savf(0.0, 100.0, m);
    EXPECT_LT(std::abs(f.curvature()), 1e-9);
    EXPECT_NEAR(f(25.0), 0.25, 1e-9);
    auto g = fit_savf(0.0, 100.0, {});
    EXPECT_EQ(g.shape(), Shape::kLinear);
    EXPECT_EQ(g(37.0), 0.37);
}

TEST(FitSavf, QuarterMidpointMatchesCubicRoot) {
    const double root = quarter_midpoint_curvature();
    EXPECT_NEAR(root, 2.4375114537440249, 1e-12);
    // Lower-better attribute: worst 200, best 100, state 175 has z = 0.25.
    const Midpoint m[] = {{175.0, 0.5}};
    auto f = fit_savf(200.0, 100.0, m);
    EXPECT_LT(std::abs(f.curvature() - root), 1e-4);
    EXPECT_NEAR(f.curvature(), root, 1e-9);
    EXPECT_NEAR(f.curvature(), 2.44, 5e-3);
    EXPECT_NEAR(f(175.0), 0.5, 1e-6);
    EXPECT_EQ(f(200.0), 0.0);
    EXPECT_EQ(f(100.0), 1.0);
}

TEST(FitSavf, SingleMidpointsAreReproduced) {
    for (double z : {0.05, 0.2, 0.5, 0.7, 0.95})
        for (double v : {0.1, 0.3, 0.5, 0.8, 0.97}) {
            const ValuePoint p[] = {{z, v}};
            EXPECT_NEAR(exponential_value(z, fit_curvature(p)), v, 1e-6) << z << ' ' << v;
        }
}

TEST(FitSavf, LeastSquaresRecoversExactCurvature) {
    std::vector<ValuePoint> pts;
    for (double z : {0.25, 0.5, 0.75}) pts.push_back({z, exponential_value(z, 1.7)});
    EXPECT_NEAR(fit_curvature(pts), 1.7, 1e-6);
    for (double z : {0.25, 0.5, 0.75}) pts.push_back({z, exponential_value(z, -0.8)});
    pts.resize(3);
    for (std::size_t i = 0; i < 3; ++i) pts[i].value = exponential_value(pts[i].z, -0.8);
    EXPECT_NEAR(fit_curvature(pts), -0.8, 1e-6);
}

TEST(FitSavf, RejectsInvalidMidpoints) {
    const ValuePoint decreasing[] = {{0.25, 0.6}, {0.5, 0.4}};
    EXPECT_THROW((void)fit_curvature(decreasing), ValidationError);
    const ValuePoint outside[] = {{1.2, 0.5}};
    EXPECT_THROW((void)fit_curvature(outside), ValidationError);
    const ValuePoint bad_value[] = {{0.5, 1.0}};
    EXPECT_THROW((void)fit_curvature(bad_value), ValidationError);
    const Midpoint m[] = {{120.0, 0.5}};
    EXPECT_THROW((void)fit_savf(0.0, 100.0, m), ValidationError);
}

TEST(Piecewise, InterpolatesElicitedPoints) {
    auto f = ValueFunction::piecewise(0.0, 1.0, {{0.75, 0.9}, {0.25, 0.5}, {0.5, 0.75}});
    EXPECT_DOUBLE_EQ(f(0.25), 0.5);
    EXPECT_DOUBLE_EQ(f(0.5), 0.75);
    EXPECT_DOUBLE_EQ(f(0.75), 0.9);
    EXPECT_DOUBLE_EQ(f(0.125), 0.25);
    EXPECT_DOUBLE_EQ(f(0.875), 0.95);
}

TEST(Aggregate, Examples) {
    EXPECT_DOUBLE_EQ(aggregate(std::vector{0.2, 0.8}, std::vector{0.5, 0.5}, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(aggregate(std::vector{0.25, 1.0}, std::vector{0.5, 0.5}, 0.0), 0.5);
    // (0.7 * 0.4^0.2 + 0.3 * 0.9^0.2)^5 at 50 digits.
    const double v = aggregate(std::vector{0.4, 0.9}, std::vector{0.7, 0.3}, 0.2);
    EXPECT_NEAR(v, 0.51741411130286811, 1e-14);
    EXPECT_NEAR(v, 0.5175, 1e-4);
}

TEST(Aggregate, LimitsBoundsAndMonotonicity) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = 1 + trial % 6;
        std::vector<double> w(n), v(n);
        for (auto& x : w) x = u(rng);
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        for (auto& x : w) x /= total;
        for (auto& x : v) x = u(rng);
        const double gamma = 1.0 - u(rng);  // (0, 1]
        const double V = aggregate(v, w, gamma);
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        ASSERT_GE(V, *lo * (1 - 1e-12)) << trial;
        ASSERT_LE(V, *hi * (1 + 1e-12)) << trial;

        double additive = 0.0, geometric = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            additive += w[j] * v[j];
            geometric *= std::pow(std::max(v[j], 0.01), w[j]);
        }
        ASSERT_LT(std::abs(aggregate(v, w, 1.0) - additive), 1e-12);
        std::vector<double> vf(v);
        for (auto& x : vf) x = std::max(x, 0.01);
        ASSERT_LT(std::abs(aggregate(vf, w, 1e-6) - geometric), 1e-6) << trial;

        std::vector<double> better(v);
        better[0] = std::min(1.0, better[0] + 0.1);
        ASSERT_GE(aggregate(better, w, gamma), V);
    }
}

TEST(Aggregate, ZeroWeightsAndZeroValues) {
    const std::vector<double> w{0.6, 0.4, 0.0};
    for (double gamma : {0.0, 0.2, 1.0})
        EXPECT_EQ(aggregate(std::vector{0.3, 0.7, 0.0}, w, gamma), aggregate(std::vector{0.3, 0.7, 1.0}, w, gamma));
    EXPECT_EQ(aggregate(std::vector{0.0, 0.7}, std::vector{0.5, 0.5}, 0.0), 0.0);
    EXPECT_THROW((void)aggregate(std::vector{0.5}, std::vector{1.0}, -0.5), ValidationError);
    EXPECT_THROW((void)aggregate(std::vector{-0.1}, std::vector{1.0}, 0.2), ValidationError);
    EXPECT_THROW((void)aggregate(std::vector{0.5, 0.5}, std::vector{1.0}, 0.2), ValidationError);
}

TEST(Swing, Examples) {
    const std::vector<std::pair<std::string, double>> r1{{"a", 100}, {"b", 50}, {"c", 50}};
    auto w = swing_weights(r1);
    EXPECT_DOUBLE_EQ(w["a"], 0.5);
    EXPECT_DOUBLE_EQ(w["b"], 0.25);
    EXPECT_DOUBLE_EQ(w["c"], 0.25);
    EXPECT_EQ(swing_weights(std::vector<std::pair<std::string, double>>{{"x", 100}})["x"], 1.0);
    const std::vector<std::pair<std::string, double>> r2{{"a", 100}, {"b", 80}, {"c", 60}, {"d", 40}, {"e", 20}};
    w = swing_weights(r2);
    const double expected[] = {1.0 / 3, 4.0 / 15, 1.0 / 5, 2.0 / 15, 1.0 / 15};
    for (std::size_t i = 0; i < r2.size(); ++i) EXPECT_NEAR(w[r2[i].first], expected[i], 1e-15);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0, [](double s, auto& kv) { return s + kv.second; }), 1.0, 1e-12);
}

TEST(Swing, RejectsInvalidRatings) {
    using R = std::vector<std::pair<std::string, double>>;
    EXPECT_THROW((void)swing_weights(R{}), ValidationError);
    EXPECT_THROW((void)swing_weights(R{{"a", 90}, {"b", 50}}), ValidationError);
    EXPECT_THROW((void)swing_weights(R{{"a", 100}, {"b", 50}, {"c", 70}}), ValidationError);
    EXPECT_THROW((void)swing_weights(R{{"a", 100}, {"b", -1}}), ValidationError);
    EXPECT_THROW((void)swing_weights(R{{"a", 100}, {"a", 50}}), ValidationError);
    EXPECT_EQ(swing_weights(R{{"a", 100}, {"b", 0}})["b"], 0.0);
}

TEST(Compensation, GammaHeuristic) {
    using C = Compensation;
    EXPECT_EQ(gamma_from_compensation(std::vector{C::kAccepted, C::kAccepted}), 1.0);
    EXPECT_EQ(gamma_from_compensation(std::vector{C::kRejected, C::kRejected}), 0.2);
    EXPECT_EQ(gamma_from_compensation(std::vector{C::kAccepted, C::kRejected}), 0.2);
    EXPECT_EQ(gamma_from_compensation(std::vector{C::kRejected, C::kStronglyRejected}), 0.0);
    EXPECT_EQ(gamma_from_compensation({}), 0.2);
}

TEST(Ranking, TiesShareTheMinimumRank) {
    const std::vector<std::string> ids{"a", "b", "c"};
    auto r = rank("s", ids, std::vector{0.9, 0.5, 0.9});
    EXPECT_EQ(r.rank_of("a"), 1u);
    EXPECT_EQ(r.rank_of("c"), 1u);
    EXPECT_EQ(r.rank_of("b"), 3u);
    EXPECT_EQ(r.entries[0].alternative, "a");
    EXPECT_EQ(r.entries[1].alternative, "c");
    ASSERT_EQ(r.tie_groups().size(), 2u);
    EXPECT_EQ(r.tie_groups()[0], (std::vector<std::string>{"a", "c"}));
    EXPECT_THROW((void)r.rank_of("z"), ValidationError);
}

TEST(Ranking, MatchesPairwiseOracleAndIsOrderInvariant) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> level(0, 7);  // coarse values force ties
    std::vector<std::string> ids;
    std::vector<double> values;
    for (int i = 0; i < 20; ++i) {
        ids.push_back(fmt::format("A{:04d}", i));
        values.push_back(level(rng) / 7.0);
    }
    auto r = rank("s", ids, values);
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = 0; j < ids.size(); ++j)
            EXPECT_EQ(values[i] >= values[j], r.rank_of(ids[i]) <= r.rank_of(ids[j]));
    std::vector<double> transformed;
    for (double v : values) transformed.push_back(std::exp(3.0 * v) - 5.0);
    auto t = rank("s", ids, transformed);
    for (std::size_t k = 0; k < ids.size(); ++k) {
        EXPECT_EQ(t.entries[k].alternative, r.entries[k].alternative);
        EXPECT_EQ(t.entries[k].rank, r.entries[k].rank);
    }
}

attributes::AttributeCatalog two_attribute_catalog() {
    attributes::AttributeCatalog c;
    attributes::AttributeSpec cost;
    cost.id = "cost";
    attributes::AttributeSpec div;
    div.id = "diversity";
    div.direction = attributes::Direction::kHigherBetter;
    c.attributes = {cost, div};
    return c;
}

std::vector<attributes::AttributeProfile> profiles(std::vector<std::pair<double, double>> means) {
    std::vector<attributes::AttributeProfile> out;
    for (std::size_t k = 0; k < means.size(); ++k)
        out.push_back({fmt::format("A{:04d}", k), {{means[k].first, means[k].first, means[k].first},
                                                  {means[k].second, means[k].second, means[k].second}}});
    return out;
}

TEST(Scorer, UsesRangesAndValueFunctions) {
    auto catalog = two_attribute_catalog();
    auto p = profiles({{100, 0.5}, {120, 1.5}, {110, 1.0}});
    auto ranges = attributes::impact_ranges(p, catalog);
    StakeholderPreferences prefs{"s", {{"cost", 0.5}, {"diversity", 0.5}}, {}, 1.0, {}};
    Scorer score(prefs, catalog, ranges);
    EXPECT_DOUBLE_EQ(score(p[0]), 0.5);
    EXPECT_DOUBLE_EQ(score(p[2]), 0.5);
    prefs.value_functions["diversity"] = {Shape::kExponential, 2.4375114537440249, {}};
    Scorer concave(prefs, catalog, ranges);
    EXPECT_NEAR(concave.values(p[2])[1], exponential_value(0.5, 2.4375114537440249), 1e-15);
    prefs.value_functions["diversity"] = {Shape::kExponential, std::nullopt, {{0.25, 0.5}}};
    EXPECT_NEAR(Scorer(prefs, catalog, ranges).value_functions()[1].curvature(), 2.4375114537440249, 1e-9);

    prefs.weights["unknown"] = 0.0;
    EXPECT_THROW(Scorer(prefs, catalog, ranges), ValidationError);
}

TEST(Scorer, SerialAndParallelRankingsAgree) {
    auto catalog = two_attribute_catalog();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<double, double>> means;
    for (int k = 0; k < 200; ++k) means.emplace_back(100 + 50 * u(rng), 2 * u(rng));
    auto p = profiles(means);
    auto ranges = attributes::impact_ranges(p, catalog);
    std::vector<StakeholderPreferences> prefs;
    for (int s = 0; s < 5; ++s) {
        const double w = u(rng);
        prefs.push_back({fmt::format("S{}", s), {{"cost", w}, {"diversity", 1 - w}}, {}, 0.2 * s, {}});
    }
    auto a = rank_all(p, prefs, catalog, ranges, Execution::kSerial);
    auto b = rank_all(p, prefs, catalog, ranges, Execution::kParallel);
    ASSERT_EQ(a.size(), 5u);
    for (std::size_t s = 0; s < a.size(); ++s)
        for (std::size_t k = 0; k < p.size(); ++k) {
            EXPECT_EQ(a[s].entries[k].alternative, b[s].entries[k].alternative);
            EXPECT_EQ(a[s].entries[k].value, b[s].entries[k].value);
        }
}

esm::SystemModel heat_model() {
    esm::SystemModel m;
    m.carriers = {"heat"};
    m.slices = {{"y", 8760.0}};
    m.demand["heat"] = {1000.0};
    for (std::string id : {"x", "y", "z"}) {
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

std::vector<mga::Alternative> alternatives(const std::vector<std::vector<double>>& gens) {
    std::vector<mga::Alternative> out;
    for (std::size_t k = 0; k < gens.size(); ++k) {
        mga::Alternative a;
        a.id = fmt::format("A{:04d}", k);
        a.generation = gens[k];
        out.push_back(a);
    }
    return out;
}

TEST(Classification, PresenceClassesAndRangeReduction) {
    auto model = heat_model();
    // x runs at 60 in every alternative; z stays below the 1 MWh presence threshold.
    std::vector<std::vector<double>> gens;
    for (int k = 0; k < 10; ++k) gens.push_back({60.0, static_cast<double>(6 * k), 0.5});
    gens[0][1] = 10.0;
    gens[1][1] = 20.0;
    gens[5][1] = 0.0;
    auto alts = alternatives(gens);
    std::vector<std::string> ids;
    for (const auto& a : alts) ids.push_back(a.id);
    std::vector<double> values(10, 0.0);
    values[0] = 1.0;
    values[1] = 0.9;
    const Ranking rankings[] = {rank("s", ids, values)};

    AnalysisConfig cfg{0.2, 1e-3};
    auto c = classify_technologies(model, alts, rankings, cfg);
    EXPECT_EQ(c.top_count, 2u);
    EXPECT_EQ(c.top_sets[0], (std::vector<std::string>{"A0000", "A0001"}));
    EXPECT_EQ(c.technologies[0].full, TechClass::kMustHave);
    EXPECT_EQ(c.technologies[0].value_focused, TechClass::kMustHave);
    EXPECT_EQ(c.technologies[1].full, TechClass::kRealChoice);
    EXPECT_EQ(c.technologies[2].full, TechClass::kMustAvoid);
    EXPECT_EQ(c.technologies[2].value_focused, TechClass::kMustAvoid);
    // y spans [0, 60] overall but only [10, 20] in the top set.
    gens[2][1] = 0.0;
    gens[9][1] = 60.0;
    alts = alternatives(gens);
    c = classify_technologies(model, alts, rankings, cfg);
    EXPECT_DOUBLE_EQ(c.technologies[1].full_range.min, 0.0);
    EXPECT_DOUBLE_EQ(c.technologies[1].full_range.max, 60.0);
    EXPECT_DOUBLE_EQ(c.technologies[1].top_range.min, 10.0);
    EXPECT_DOUBLE_EQ(c.technologies[1].top_range.max, 20.0);
    EXPECT_NEAR(c.technologies[1].range_reduction, 5.0 / 6.0, 1e-15);
    EXPECT_EQ(c.technologies[1].full, TechClass::kRealChoice);
    EXPECT_EQ(c.technologies[1].value_focused, TechClass::kMustHave);
    EXPECT_EQ(c.technologies[0].range_reduction, 0.0);
}

TEST(Classification, DegenerateTopFractionsAndErrors) {
    auto model = heat_model();
    auto alts = alternatives({{1, 2, 3}, {3, 2, 1}, {2, 2, 2}});
    const std::vector<std::string> ids{"A0000", "A0001", "A0002"};
    const Ranking r[] = {rank("s", ids, std::vector{0.1, 0.2, 0.3})};
    auto full = classify_technologies(model, alts, r, {1.0, 1e-3});
    for (const auto& t : full.technologies) {
        EXPECT_EQ(t.top_range.min, t.full_range.min);
        EXPECT_EQ(t.top_range.max, t.full_range.max);
    }
    EXPECT_THROW((void)classify_technologies(model, alts, r, {0.2, 1e-3}), ValidationError);
    EXPECT_THROW((void)classify_technologies(model, alts, {}, {1.0, 1e-3}), ValidationError);
    EXPECT_THROW((void)top_count(10, 0.0), ValidationError);
    EXPECT_THROW((void)top_count(10, 1.5), ValidationError);
    EXPECT_EQ(top_count(100, 0.29), 29u);
    EXPECT_EQ(top_count(170, 0.1), 17u);
}

TEST(Occurrence, CountsTopSetPresence) {
    auto model = heat_model();
    std::vector<std::vector<double>> gens;
    for (int k = 0; k < 20; ++k) gens.push_back({50.0, k % 10 < 3 ? 5.0 : 0.0, 0.0});
    auto alts = alternatives(gens);
    std::vector<std::string> ids;
    std::vector<double> values;
    for (const auto& a : alts) ids.push_back(a.id), values.push_back(-static_cast<double>(ids.size()));
    const Ranking r[] = {rank("s", ids, values)};
    auto t = occurrence_frequency(model, alts, r, {0.5, 1e-3});
    ASSERT_EQ(t.frequency.size(), 1u);
    EXPECT_EQ(t.frequency[0][0], 1.0);
    EXPECT_DOUBLE_EQ(t.frequency[0][1], 0.3);
    EXPECT_EQ(t.frequency[0][2], 0.0);
}

TEST(Spearman, AverageRanksAndExtremes) {
    EXPECT_EQ(average_ranks(std::vector{3.0, 1.0, 1.0}), (std::vector{3.0, 1.5, 1.5}));
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> rev{5, 4, 3, 2, 1};
    EXPECT_DOUBLE_EQ(spearman(a, a), 1.0);
    EXPECT_DOUBLE_EQ(spearman(a, rev), -1.0);
    EXPECT_EQ(spearman(a, std::vector{2.0, 2.0, 2.0, 2.0, 2.0}), 0.0);
}

Ranking from_ranks(std::string who, const std::vector<double>& ranks) {
    std::vector<std::string> ids;
    std::vector<double> values;
    for (std::size_t k = 0; k < ranks.size(); ++k) {
        ids.push_back(fmt::format("A{:04d}", k));
        values.push_back(-ranks[k]);
    }
    return rank(std::move(who), ids, values);
}

TEST(Clustering, IdenticalAndReversedRankings) {
    const Ranking same[] = {from_ranks("p", {1, 2, 3, 4}), from_ranks("q", {1, 2, 3, 4})};
    auto d = cluster_stakeholders(same);
    ASSERT_EQ(d.merges.size(), 1u);
    EXPECT_EQ(d.merges[0].height, 0.0);
    const Ranking opposite[] = {from_ranks("p", {1, 2, 3, 4}), from_ranks("q", {4, 3, 2, 1})};
    EXPECT_DOUBLE_EQ(cluster_stakeholders(opposite).merges[0].height, 2.0);
    const Ranking one[] = {from_ranks("p", {1, 2})};
    EXPECT_THROW((void)cluster_stakeholders(one), ValidationError);
    const Ranking mismatch[] = {from_ranks("p", {1, 2, 3}), from_ranks("q", {1, 2})};
    EXPECT_THROW((void)cluster_stakeholders(mismatch), ValidationError);
}

TEST(Clustering, FourByFourMatrixMatchesBruteForce) {
    const std::vector<std::vector<double>> ranks{
        {1, 2, 3, 4, 5, 6}, {2, 1, 3, 4, 6, 5}, {6, 5, 4, 3, 1, 2}, {3, 1, 2, 6, 4, 5}};
    std::vector<Ranking> rankings;
    for (std::size_t s = 0; s < ranks.size(); ++s) rankings.push_back(from_ranks(fmt::format("S{}", s), ranks[s]));
    auto d = cluster_stakeholders(rankings);

    std::vector<std::vector<double>> oracle(4, std::vector<double>(4, 0.0));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) oracle[i][j] = 1.0 - oracle::spearman_no_ties(ranks[i], ranks[j]);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(d.distance[i][j], oracle[i][j], 1e-14);
    // Hand trace: d01 = 4/35, d02 = d12 = 68/35, d03 = 12/35, d13 = 10/35, d23 = 56/35.
    EXPECT_NEAR(d.distance[0][1], 4.0 / 35, 1e-15);
    EXPECT_NEAR(d.distance[2][3], 56.0 / 35, 1e-15);

    auto brute = oracle::brute_force_average_linkage(oracle);
    ASSERT_EQ(d.merges.size(), 3u);
    const std::vector<std::size_t> sizes{2, 3, 4};
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(d.merges[k].height, brute[k].height, 1e-14);
        EXPECT_EQ(d.merges[k].size, sizes[k]);
    }
    // {0,1} at 4/35, then {3} joins at 11/35, then {2} at 192/105.
    EXPECT_EQ(d.merges[0].left, 0u);
    EXPECT_EQ(d.merges[0].right, 1u);
    EXPECT_EQ(d.merges[1].left, 3u);
    EXPECT_EQ(d.merges[1].right, 4u);
    EXPECT_EQ(d.merges[2].left, 2u);
    EXPECT_EQ(d.merges[2].right, 5u);
    EXPECT_NEAR(d.merges[1].height, 11.0 / 35, 1e-15);
    EXPECT_NEAR(d.merges[2].height, 192.0 / 105, 1e-15);
    EXPECT_EQ(brute[1].left, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(brute[1].right, (std::vector<std::size_t>{3}));
    EXPECT_EQ(d.leaf_order, (std::vector<std::size_t>{2, 3, 0, 1}));
}

TEST(Clustering, RandomMatricesMatchBruteForce) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + trial % 7;
        std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = u(rng);
        auto fast = average_linkage(d);
        auto brute = oracle::brute_force_average_linkage(d);
        ASSERT_EQ(fast.size(), brute.size());
        for (std::size_t k = 0; k < fast.size(); ++k) {
            EXPECT_NEAR(fast[k].height, brute[k].height, 1e-12);
            EXPECT_EQ(fast[k].size, brute[k].left.size() + brute[k].right.size());
        }
    }
}

TEST(Kendall, DistanceMatchesOracle) {
    std::mt19937_64 rng(5);
    std::vector<double> a(12), b(12);
    std::iota(a.begin(), a.end(), 1.0);
    std::iota(b.begin(), b.end(), 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(b.begin(), b.end(), rng);
        EXPECT_NEAR(kendall_distance(from_ranks("a", a), from_ranks("b", b)), oracle::kendall_no_ties(a, b), 1e-15);
    }
    EXPECT_EQ(kendall_distance(from_ranks("a", a), from_ranks("a", a)), 0.0);
    std::vector<double> rev(a.rbegin(), a.rend());
    EXPECT_EQ(kendall_distance(from_ranks("a", a), from_ranks("r", rev)), 1.0);
}

TEST(Sensitivity, BaselineGammaSweepAndSmallWeightShifts) {
    auto catalog = two_attribute_catalog();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<double, double>> means;
    for (int k = 0; k < 40; ++k) means.emplace_back(100 + 50 * u(rng), 0.1 + 2 * u(rng));
    auto p = profiles(means);
    auto ranges = attributes::impact_ranges(p, catalog);
    const StakeholderPreferences prefs[] = {{"s", {{"cost", 0.6}, {"diversity", 0.4}}, {}, 0.2, {}}};

    SensitivitySpec none;
    none.tracked = {"A0000"};
    auto rows = sensitivity(prefs, p, catalog, ranges, none);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].kendall_distance, 0.0);

    SensitivitySpec spec;
    spec.gammas = {0.0, 0.2, 1.0};
    spec.weight_delta = 1e-9;
    spec.tracked = {"A0000"};
    rows = sensitivity(prefs, p, catalog, ranges, spec);
    ASSERT_EQ(rows.size(), 1u + 3u + 4u);
    const auto baseline = rank(p, prefs[0], catalog, ranges);
    for (std::size_t k = 1; k <= 3; ++k) {
        StakeholderPreferences g = prefs[0];
        g.gamma = spec.gammas[k - 1];
        EXPECT_EQ(rows[k].kendall_distance, kendall_distance(baseline, rank(p, g, catalog, ranges)));
    }
    EXPECT_EQ(rows[2].kendall_distance, 0.0);  // gamma 0.2 is the baseline
    for (std::size_t k = 4; k < rows.size(); ++k) EXPECT_EQ(rows[k].top_alternative, rows[0].top_alternative);
    EXPECT_EQ(rows[0].tracked_ranks[0], baseline.rank_of("A0000"));
}

TEST(PreferencesJson, RatingsOrderDeclinedAndRoundTrip) {
    auto catalog = two_attribute_catalog();
    nlohmann::json doc = {{"stakeholders",
                           {{{"id", "SH1"}, {"ratings", {{"cost", 100}}}, {"compensation", {"rejected", "rejected"}}},
                            {{"id", "SH2"},
                             {"ratings", {{"cost", 50}, {"diversity", 100}}},
                             {"value_functions", {{"diversity", {{"shape", "exponential"}, {"points", {{{"z", 0.25}, {"value", 0.5}}}}}}}},
                             {"gamma", 1.0}}}}};
    auto prefs = preferences_from_json(doc, catalog);
    ASSERT_EQ(prefs.size(), 2u);
    EXPECT_EQ(prefs[0].weights.at("cost"), 1.0);
    EXPECT_EQ(prefs[0].weights.at("diversity"), 0.0);
    EXPECT_EQ(prefs[0].notes, (std::vector<std::string>{"declined: diversity"}));
    EXPECT_EQ(prefs[0].gamma, 0.2);
    EXPECT_NEAR(prefs[1].weights.at("diversity"), 2.0 / 3, 1e-15);
    EXPECT_EQ(prefs[1].gamma, 1.0);

    auto again = preferences_from_json(to_json(std::span<const StakeholderPreferences>(prefs)), catalog);
    EXPECT_EQ(to_json(std::span<const StakeholderPreferences>(again)), to_json(std::span<const StakeholderPreferences>(prefs)));
}

TEST(PreferencesJson, RejectsInvalidDocuments) {
    auto catalog = two_attribute_catalog();
    auto load = [&](nlohmann::json s) { return preferences_from_json({{"stakeholders", {s}}}, catalog); };
    EXPECT_THROW(load({{"id", "a"}, {"weights", {{"cost", 0.5}}}}), ValidationError);
    EXPECT_THROW(load({{"id", "a"}, {"weights", {{"nope", 1.0}}}}), ValidationError);
    EXPECT_THROW(load({{"id", "a"}, {"ratings", {{"cost", 90}}}}), ValidationError);
    EXPECT_THROW(load({{"id", "a"}}), ValidationError);
    EXPECT_THROW(load({{"id", "a"}, {"weights", {{"cost", 1.0}}}, {"gamma", -1}}), ValidationError);
    EXPECT_THROW(load({{"id", "a"}, {"weights", {{"cost", 1.0}}}, {"compensation", {"maybe"}}}), ValidationError);
    EXPECT_THROW(load({{"id", "a"}, {"weights", {{"cost", 1.0}}}, {"colour", "red"}}), ValidationError);
    EXPECT_THROW(load({{"id", "a"},
                       {"weights", {{"cost", 1.0}}},
                       {"value_functions", {{"cost", {{"shape", "exponential"}}}}}}),
                 ValidationError);
    EXPECT_THROW(load({{"id", "a"},
                       {"weights", {{"cost", 1.0}}},
                       {"value_functions",
                        {{"cost", {{"shape", "piecewise"}, {"points", {{{"z", 0.5}, {"value", 0.6}}, {{"z", 0.6}, {"value", 0.4}}}}}}}}}),
                 ValidationError);
    try {
        (void)preferences_from_json({{"stakeholders", {{{"id", "a"}, {"weights", {{"cost", "x"}}}}}}}, catalog);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("$.stakeholders[0].weights.cost"), std::string::npos) << e.what();
    }
}

}  // namespace
