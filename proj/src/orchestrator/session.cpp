#include "vfmga/orchestrator/session.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace vfmga::orchestrator {

using nlohmann::json;

std::string_view to_string(Phase p) noexcept {
    switch (p) {
        case Phase::kSwingRanking: return "swing-ranking";
        case Phase::kSwingRating: return "swing-rating";
        case Phase::kSavfBisection: return "savf-bisection";
        case Phase::kCompensation: return "compensation-check";
        case Phase::kComplete: return "complete";
    }
    return "?";
}

ElicitationSession::ElicitationSession(std::string id, std::string stakeholder,
                                       const attributes::AttributeCatalog& catalog,
                                       std::vector<attributes::ImpactRange> ranges, SessionSettings settings)
    : id_(std::move(id)),
      stakeholder_(std::move(stakeholder)),
      catalog_(&catalog),
      ranges_(std::move(ranges)),
      settings_(settings) {
    if (ranges_.size() != catalog.attributes.size())
        throw ValidationError(fmt::format("{} impact ranges for {} attributes", ranges_.size(), catalog.attributes.size()));
    if (stakeholder_.empty()) throw ValidationError("a session needs a stakeholder id");
}

std::size_t ElicitationSession::index(const std::string& attr) const { return catalog_->index_of(attr); }

const attributes::AttributeSpec& ElicitationSession::spec(const std::string& attr) const {
    return catalog_->attribute(attr);
}

double ElicitationSession::target(std::size_t step) const {
    // Breadth-first dyadic points: 1/2, 1/4, 3/4, 1/8, 3/8, ...
    std::size_t level = 0;
    while ((std::size_t{2} << level) <= step + 1) ++level;
    const std::size_t pos = step + 1 - (std::size_t{1} << level);
    return static_cast<double>(2 * pos + 1) / static_cast<double>(std::size_t{2} << level);
}

std::pair<double, double> ElicitationSession::bounds(std::size_t attribute, double t) const {
    const auto& range = ranges_[index(designated_[attribute])];
    double lower = range.worst, upper = range.best, lo_t = 0.0, hi_t = 1.0;
    for (const Elicited& e : elicited_[attribute]) {
        if (e.target < t && e.target > lo_t) lo_t = e.target, lower = e.state;
        if (e.target > t && e.target < hi_t) hi_t = e.target, upper = e.state;
    }
    return {lower, upper};
}

json ElicitationSession::question() const {
    switch (phase_) {
        case Phase::kSwingRanking: {
            json attrs = json::array();
            for (std::size_t j = 0; j < catalog_->attributes.size(); ++j) {
                const auto& a = catalog_->attributes[j];
                attrs.push_back({{"id", a.id}, {"name", a.name}, {"unit", a.unit}, {"objective", a.objective},
                                 {"worst", ranges_[j].worst}, {"best", ranges_[j].best}});
            }
            return {{"type", "rank-order"},
                    {"phase", to_string(phase_)},
                    {"attributes", std::move(attrs)},
                    {"prompt", "All attributes start at their worst level. Order the attributes by how much you "
                               "would value moving each one from worst to best, most valuable first."}};
        }
        case Phase::kSwingRating:
            return {{"type", "ratings"},
                    {"phase", to_string(phase_)},
                    {"order", order_},
                    {"prompt", fmt::format("Rate each swing relative to '{}' at 100. Ratings may not increase along "
                                           "your order; rate 0 to leave an attribute out.", order_.front())}};
        case Phase::kSavfBisection: {
            const std::string& attr = designated_[current_];
            const std::size_t step = elicited_[current_].size();
            const double t = target(step);
            const auto [lower, upper] = bounds(current_, t);
            const auto& range = ranges_[index(attr)];
            const auto& a = spec(attr);
            return {{"type", "bisection"},
                    {"phase", to_string(phase_)},
                    {"attribute", attr},
                    {"name", a.name},
                    {"unit", a.unit},
                    {"worst", range.worst},
                    {"best", range.best},
                    {"target", t},
                    {"lower", lower},
                    {"upper", upper},
                    {"step", step + 1},
                    {"steps", settings_.bisection_depth},
                    {"prompt", fmt::format("Which level of '{}' between {} and {} is worth {} of the improvement "
                                           "from worst to best?", a.name.empty() ? attr : a.name, lower, upper, t)}};
        }
        case Phase::kCompensation: {
            const auto& [first, second] = probes_[responses_.size()];
            const double w1 = weights_.at(first), w2 = weights_.at(second);
            const double x = w2 / (w1 + w2);
            const auto& r1 = ranges_[index(first)];
            const auto& r2 = ranges_[index(second)];
            auto level = [x](const attributes::ImpactRange& r) { return r.worst + x * (r.best - r.worst); };
            return {{"type", "compensation"},
                    {"phase", to_string(phase_)},
                    {"probe", responses_.size() + 1},
                    {"probes", probes_.size()},
                    {"attributes", {first, second}},
                    {"option_a", {{first, r1.worst}, {second, r2.best}}},
                    {"option_b", {{first, level(r1)}, {second, level(r2)}}},
                    {"prompt", fmt::format("Everything else equal, an additive model rates option A ('{}' at worst, "
                                           "'{}' at best) and option B (both {:.0f}% of the way from worst to best) "
                                           "as equally good. Do you accept that?", first, second, 100 * x)}};
        }
        case Phase::kComplete: break;
    }
    throw Error("session '" + id_ + "' is complete");
}

void ElicitationSession::submit(const json& answer) {
    if (complete()) throw Error("session '" + id_ + "' is complete");
    if (!answer.is_object()) throw ValidationError("an answer must be a JSON object");
    ElicitationSession next = *this;
    switch (phase_) {
        case Phase::kSwingRanking: next.accept_order(answer); break;
        case Phase::kSwingRating: next.accept_ratings(answer); break;
        case Phase::kSavfBisection: next.accept_bisection(answer); break;
        case Phase::kCompensation: next.accept_compensation(answer); break;
        case Phase::kComplete: break;
    }
    next.answers_.push_back(answer);
    *this = std::move(next);
}

void ElicitationSession::accept_order(const json& answer) {
    if (!answer.contains("order") || !answer["order"].is_array())
        throw ValidationError("expected {\"order\": [attribute ids]}");
    std::vector<std::string> order;
    for (const json& x : answer["order"]) {
        if (!x.is_string()) throw ValidationError("the order must list attribute ids");
        order.push_back(x.get<std::string>());
    }
    std::set<std::string> given(order.begin(), order.end()), expected;
    for (const auto& a : catalog_->attributes) expected.insert(a.id);
    if (given != expected || order.size() != expected.size())
        throw ValidationError("the order must list every attribute exactly once");
    order_ = std::move(order);
    phase_ = Phase::kSwingRating;
}

void ElicitationSession::accept_ratings(const json& answer) {
    if (!answer.contains("ratings") || !answer["ratings"].is_object())
        throw ValidationError("expected {\"ratings\": {attribute: rating}}");
    const json& r = answer["ratings"];
    std::vector<std::pair<std::string, double>> ratings;
    for (const std::string& attr : order_) {
        if (!r.contains(attr) || !r[attr].is_number())
            throw ValidationError("rate every attribute, using 0 to leave one out; missing '" + attr + "'");
        ratings.emplace_back(attr, r[attr].get<double>());
    }
    if (r.size() != order_.size()) throw ValidationError("ratings name unknown attributes");
    weights_ = mavt::swing_weights(ratings);
    ratings_ = std::move(ratings);
    enter_bisection();
}

void ElicitationSession::enter_bisection() {
    // The most important attribute of each objective, objectives in catalog order.
    std::vector<std::string> objectives;
    for (const auto& a : catalog_->attributes)
        if (std::find(objectives.begin(), objectives.end(), a.objective) == objectives.end()) objectives.push_back(a.objective);
    designated_.clear();
    for (const std::string& objective : objectives) {
        const attributes::AttributeSpec* best = nullptr;
        for (const auto& a : catalog_->attributes)
            if (a.objective == objective && (!best || weights_.at(a.id) > weights_.at(best->id))) best = &a;
        const auto& range = ranges_[index(best->id)];
        if (weights_.at(best->id) > 0.0 && range.worst != range.best) designated_.push_back(best->id);
    }
    elicited_.assign(designated_.size(), {});
    current_ = 0;
    if (designated_.empty() || settings_.bisection_depth == 0) {
        enter_compensation();
    } else {
        phase_ = Phase::kSavfBisection;
    }
}

void ElicitationSession::accept_bisection(const json& answer) {
    if (!answer.contains("state") || !answer["state"].is_number()) throw ValidationError("expected {\"state\": number}");
    const double state = answer["state"].get<double>();
    const double t = target(elicited_[current_].size());
    const auto [lower, upper] = bounds(current_, t);
    if (!std::isfinite(state) || !(std::min(lower, upper) < state && state < std::max(lower, upper)))
        throw ValidationError(fmt::format("the level must lie strictly between {} and {}", lower, upper));
    elicited_[current_].push_back({t, state});
    if (elicited_[current_].size() == settings_.bisection_depth && ++current_ == designated_.size()) enter_compensation();
}

void ElicitationSession::enter_compensation() {
    std::vector<std::string> ranked;
    for (const auto& [attr, r] : ratings_)
        if (r > 0.0) ranked.push_back(attr);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](const std::string& a, const std::string& b) { return weights_.at(a) > weights_.at(b); });
    probes_.clear();
    if (ranked.size() >= 2) {
        for (std::size_t i = 0; i < ranked.size() && probes_.size() < settings_.compensation_probes; ++i)
            for (std::size_t j = i + 1; j < ranked.size() && probes_.size() < settings_.compensation_probes; ++j)
                probes_.emplace_back(ranked[i], ranked[j]);
        // Two attributes only: ask again with the roles swapped.
        while (probes_.size() < settings_.compensation_probes) probes_.emplace_back(ranked[1], ranked[0]);
    }
    if (probes_.empty()) {
        finish();
    } else {
        phase_ = Phase::kCompensation;
    }
}

void ElicitationSession::accept_compensation(const json& answer) {
    if (!answer.contains("response") || !answer["response"].is_string())
        throw ValidationError("expected {\"response\": \"accepted\" | \"rejected\" | \"strongly-rejected\"}");
    responses_.push_back(mavt::parse_compensation(answer["response"].get<std::string>()));
    if (responses_.size() == probes_.size()) finish();
}

void ElicitationSession::finish() {
    mavt::StakeholderPreferences p;
    p.id = stakeholder_;
    p.weights = weights_;
    for (std::size_t k = 0; k < designated_.size(); ++k) {
        const auto& range = ranges_[index(designated_[k])];
        mavt::SavfSpec s;
        s.shape = mavt::Shape::kExponential;
        for (const Elicited& e : elicited_[k])
            s.points.push_back({(e.state - range.worst) / (range.best - range.worst), e.target});
        std::sort(s.points.begin(), s.points.end(), [](const auto& a, const auto& b) { return a.z < b.z; });
        p.value_functions[designated_[k]] = std::move(s);
    }
    p.gamma = mavt::gamma_from_compensation(responses_);
    for (const auto& [attr, r] : ratings_)
        if (r == 0.0) p.notes.push_back("declined: " + attr);
    p.validate(*catalog_);
    result_ = std::move(p);
    phase_ = Phase::kComplete;
}

json ElicitationSession::to_json() const {
    json j = {{"id", id_},
              {"stakeholder", stakeholder_},
              {"phase", to_string(phase_)},
              {"settings", {{"bisection_depth", settings_.bisection_depth}, {"compensation_probes", settings_.compensation_probes}}},
              {"answers", answers_}};
    j["preferences"] = result_ ? mavt::to_json(*result_) : json(nullptr);
    return j;
}

ElicitationSession ElicitationSession::from_json(const json& j, const attributes::AttributeCatalog& catalog,
                                                 std::vector<attributes::ImpactRange> ranges) {
    try {
        SessionSettings settings;
        settings.bisection_depth = j.at("settings").at("bisection_depth").get<std::size_t>();
        settings.compensation_probes = j.at("settings").at("compensation_probes").get<std::size_t>();
        ElicitationSession s(j.at("id").get<std::string>(), j.at("stakeholder").get<std::string>(), catalog,
                             std::move(ranges), settings);
        for (const json& answer : j.at("answers")) s.submit(answer);
        return s;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed session record: ") + e.what());
    }
}

}  // namespace vfmga::orchestrator
