#include "vfmga/orchestrator/api.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "vfmga/esm/system_json.hpp"
#include "vfmga/json_read.hpp"
#include "vfmga/orchestrator/artifacts.hpp"

namespace vfmga::orchestrator {

namespace fs = std::filesystem;
using nlohmann::json;

RunData load_run(const RunConfig& config, const fs::path& run_dir) {
    RunData d;
    d.model = esm::load_system(config.system);
    d.catalog = attributes::load_catalog(run_dir / "catalog.json");
    d.alternatives = alternatives_from_json(json_read::parse_file(run_dir / "alternatives.json"), d.model);
    std::ifstream profiles(run_dir / "profiles.csv");
    if (!profiles) throw Error("cannot read " + (run_dir / "profiles.csv").string());
    d.profiles = read_profiles_csv(profiles, d.catalog);
    if (d.profiles.size() != d.alternatives.size())
        throw ValidationError("profiles.csv and alternatives.json list different alternatives");
    for (std::size_t i = 0; i < d.profiles.size(); ++i)
        if (d.profiles[i].alternative != d.alternatives[i].id)
            throw ValidationError("profiles.csv and alternatives.json list different alternatives");
    d.ranges = ranges_from_json(json_read::parse_file(run_dir / "ranges.json"), d.catalog);
    if (fs::exists(run_dir / "preferences.json"))
        d.preferences = mavt::load_preferences((run_dir / "preferences.json").string(), d.catalog);
    d.analysis = config.analysis;
    return d;
}

namespace {

ApiResponse error(int status, std::string_view message) { return {status, {{"error", message}}}; }

std::vector<std::string> segments(std::string_view path) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < path.size()) {
        const std::size_t end = std::min(path.find('/', start), path.size());
        if (end > start) out.emplace_back(path.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

json entry_json(const mavt::RankedAlternative& e) { return {{"alternative", e.alternative}, {"value", e.value}, {"rank", e.rank}}; }

}  // namespace

ApiService::ApiService(RunData data, fs::path run_dir, Execution exec)
    : data_(std::move(data)), run_dir_(std::move(run_dir)), exec_(exec) {
    const fs::path dir = run_dir_ / "sessions";
    if (fs::exists(dir)) {
        std::vector<fs::path> files;
        for (const auto& f : fs::directory_iterator(dir))
            if (f.path().extension() == ".json") files.push_back(f.path());
        std::sort(files.begin(), files.end());
        for (const fs::path& f : files) {
            auto s = ElicitationSession::from_json(json_read::parse_file(f), data_.catalog, data_.ranges);
            if (s.complete()) adopt(*s.preferences());
            const std::string id = s.id();
            if (id.starts_with("session-")) {
                std::size_t n = 0;
                std::from_chars(id.data() + 8, id.data() + id.size(), n);
                next_session_ = std::max(next_session_, n + 1);
            }
            sessions_.emplace(id, std::unique_ptr<SessionEntry>(new SessionEntry{{}, std::move(s)}));
        }
    }
    refresh();
}

void ApiService::adopt(const mavt::StakeholderPreferences& prefs) {
    auto it = std::find_if(data_.preferences.begin(), data_.preferences.end(),
                           [&](const auto& p) { return p.id == prefs.id; });
    if (it == data_.preferences.end()) {
        data_.preferences.push_back(prefs);
    } else {
        *it = prefs;
    }
}

void ApiService::refresh() {
    rankings_ = mavt::rank_all(data_.profiles, data_.preferences, data_.catalog, data_.ranges, exec_);
    classification_.reset();
}

std::size_t ApiService::stakeholder_index(const std::string& id) const {
    for (std::size_t k = 0; k < data_.preferences.size(); ++k)
        if (data_.preferences[k].id == id) return k;
    return data_.preferences.size();
}

void ApiService::persist(const ElicitationSession& s) const {
    fs::create_directories(run_dir_ / "sessions");
    write_file(run_dir_ / "sessions" / (s.id() + ".json"), dump(s.to_json()));
}

ApiService::SessionEntry& ApiService::entry(const std::string& id) {
    std::lock_guard lock(sessions_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw std::out_of_range("unknown session '" + id + "'");
    return *it->second;
}

ApiResponse ApiService::handle(std::string_view method, std::string_view path,
                               const std::map<std::string, std::string>& query, std::string_view body) {
    const auto seg = segments(path);
    auto parse_body = [&]() {
        if (body.empty()) return json::object();
        return json::parse(body);
    };
    try {
        const bool get = method == "GET", post = method == "POST";
        if (seg.size() == 1 && seg[0] == "healthz") return get ? healthz() : error(405, "use GET");
        if (seg.size() == 1 && seg[0] == "sessions") return post ? create_session(parse_body()) : error(405, "use POST");
        if (seg.size() == 2 && seg[0] == "sessions") return get ? session_status(seg[1]) : error(405, "use GET");
        if (seg.size() == 3 && seg[0] == "sessions" && seg[2] == "question")
            return get ? session_question(seg[1]) : error(405, "use GET");
        if (seg.size() == 3 && seg[0] == "sessions" && seg[2] == "answer")
            return post ? session_answer(seg[1], parse_body()) : error(405, "use POST");
        if (seg.size() == 1 && seg[0] == "alternatives") return get ? alternatives(query) : error(405, "use GET");
        if (seg.size() == 2 && seg[0] == "rankings") return get ? ranking(seg[1]) : error(405, "use GET");
        if (seg.size() == 2 && seg[0] == "analysis" && seg[1] == "classification")
            return get ? classification() : error(405, "use GET");
        if (seg.size() == 2 && seg[0] == "analysis" && seg[1] == "clustering")
            return get ? clustering() : error(405, "use GET");
        if (seg.size() == 1 && seg[0] == "whatif") return post ? whatif(parse_body()) : error(405, "use POST");
        return error(404, fmt::format("no route for {} {}", method, path));
    } catch (const json::parse_error& e) {
        return error(400, std::string("request body is not JSON: ") + e.what());
    } catch (const ValidationError& e) {
        return error(422, e.what());
    } catch (const std::out_of_range& e) {
        return error(404, e.what());
    } catch (const std::exception& e) {
        return error(500, e.what());
    }
}

ApiResponse ApiService::healthz() {
    std::lock_guard lock(state_mutex_);
    return {200, {{"status", "ok"}, {"alternatives", data_.alternatives.size()}, {"stakeholders", data_.preferences.size()}}};
}

ApiResponse ApiService::create_session(const json& body) {
    namespace jr = json_read;
    jr::expect_object(body, "$");
    jr::allowed_keys(body, "$", {"stakeholder", "bisection_depth", "compensation_probes"});
    SessionSettings settings;
    auto count = [&](std::string_view key, std::size_t fallback) {
        const double v = jr::number_or(body, "$", key, static_cast<double>(fallback));
        if (!(v >= 0 && v <= 16) || v != std::floor(v)) jr::fail(jr::child("$", key), "expected an integer in [0, 16]");
        return static_cast<std::size_t>(v);
    };
    settings.bisection_depth = count("bisection_depth", settings.bisection_depth);
    settings.compensation_probes = count("compensation_probes", settings.compensation_probes);
    const std::string stakeholder = jr::string(body, "$", "stakeholder");

    std::lock_guard lock(sessions_mutex_);
    const std::string id = fmt::format("session-{:04}", next_session_);
    ElicitationSession s(id, stakeholder, data_.catalog, data_.ranges, settings);
    persist(s);
    ++next_session_;
    json out = {{"session", id}, {"stakeholder", stakeholder}, {"phase", to_string(s.phase())}, {"question", s.question()}};
    sessions_.emplace(id, std::unique_ptr<SessionEntry>(new SessionEntry{{}, std::move(s)}));
    return {201, std::move(out)};
}

ApiResponse ApiService::session_status(const std::string& id) {
    SessionEntry& e = entry(id);
    std::lock_guard lock(e.mutex);
    const auto& s = e.session;
    return {200,
            {{"session", s.id()},
             {"stakeholder", s.stakeholder()},
             {"phase", to_string(s.phase())},
             {"complete", s.complete()},
             {"answers", s.to_json()["answers"].size()},
             {"preferences", s.complete() ? mavt::to_json(*s.preferences()) : json(nullptr)}}};
}

ApiResponse ApiService::session_question(const std::string& id) {
    SessionEntry& e = entry(id);
    std::lock_guard lock(e.mutex);
    const auto& s = e.session;
    return {200, {{"session", s.id()}, {"phase", to_string(s.phase())}, {"question", s.complete() ? json(nullptr) : s.question()}}};
}

ApiResponse ApiService::session_answer(const std::string& id, const json& body) {
    SessionEntry& e = entry(id);
    std::lock_guard lock(e.mutex);
    auto& s = e.session;
    if (s.complete()) return error(409, "session '" + id + "' is complete");
    try {
        s.submit(body);
    } catch (const ValidationError& ex) {
        // The stakeholder answers the same question again.
        return {422, {{"error", ex.what()}, {"session", s.id()}, {"phase", to_string(s.phase())}, {"question", s.question()}}};
    }
    persist(s);
    json out = {{"session", s.id()}, {"phase", to_string(s.phase())}, {"question", s.complete() ? json(nullptr) : s.question()}};
    if (s.complete()) {
        std::lock_guard state(state_mutex_);
        adopt(*s.preferences());
        refresh();
        out["preferences"] = mavt::to_json(*s.preferences());
    }
    return {200, std::move(out)};
}

ApiResponse ApiService::alternatives(const std::map<std::string, std::string>& query) {
    std::lock_guard lock(state_mutex_);
    const auto stakeholder_it = query.find("stakeholder");
    const auto top_it = query.find("top");
    for (const auto& [key, value] : query)
        if (key != "stakeholder" && key != "top") return error(400, "unknown query parameter '" + key + "'");

    // Rank entries drive the order when a stakeholder is named, the run order otherwise.
    std::vector<std::size_t> order(data_.alternatives.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const mavt::Ranking* ranking = nullptr;
    if (stakeholder_it != query.end()) {
        const std::size_t k = stakeholder_index(stakeholder_it->second);
        if (k == data_.preferences.size()) return error(404, "unknown stakeholder '" + stakeholder_it->second + "'");
        ranking = &rankings_[k];
        std::map<std::string, std::size_t> position;
        for (std::size_t i = 0; i < data_.alternatives.size(); ++i) position[data_.alternatives[i].id] = i;
        for (std::size_t r = 0; r < ranking->entries.size(); ++r) order[r] = position.at(ranking->entries[r].alternative);
    }
    std::optional<double> q;
    if (top_it != query.end()) {
        double v = 0.0;
        const std::string& text = top_it->second;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size() || !(v > 0.0 && v <= 1.0))
            return error(400, "top must be a fraction in (0, 1]");
        q = v;
    }
    if (q) {
        const std::size_t n = mavt::top_count(order.size(), *q);
        if (ranking) {
            order.resize(n);
        } else {
            // Without a stakeholder: the union of every stakeholder's top set, in run order.
            if (rankings_.empty()) return error(409, "no stakeholder preferences loaded");
            std::set<std::string> keep;
            for (const auto& r : rankings_)
                for (const auto& id : r.top(n)) keep.insert(id);
            std::erase_if(order, [&](std::size_t i) { return !keep.contains(data_.alternatives[i].id); });
        }
    }
    json list = json::array();
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const std::size_t i = order[pos];
        const auto& a = data_.alternatives[i];
        json attrs = json::object();
        for (std::size_t j = 0; j < data_.catalog.attributes.size(); ++j)
            attrs[data_.catalog.attributes[j].id] = data_.profiles[i].values[j].mean;
        json item = {{"id", a.id}, {"total_cost", a.costs.total}, {"slack_used", a.slack_used}, {"attributes", std::move(attrs)}};
        if (ranking) {
            item["value"] = ranking->entries[pos].value;
            item["rank"] = ranking->entries[pos].rank;
        }
        list.push_back(std::move(item));
    }
    json out = {{"count", list.size()}, {"alternatives", std::move(list)}};
    out["stakeholder"] = ranking ? json(ranking->stakeholder) : json(nullptr);
    out["top"] = q ? json(*q) : json(nullptr);
    return {200, std::move(out)};
}

ApiResponse ApiService::ranking(const std::string& stakeholder) {
    std::lock_guard lock(state_mutex_);
    const std::size_t k = stakeholder_index(stakeholder);
    if (k == data_.preferences.size()) return error(404, "unknown stakeholder '" + stakeholder + "'");
    json entries = json::array();
    for (const auto& e : rankings_[k].entries) entries.push_back(entry_json(e));
    return {200, {{"stakeholder", stakeholder}, {"gamma", data_.preferences[k].gamma}, {"entries", std::move(entries)}}};
}

ApiResponse ApiService::classification() {
    std::lock_guard lock(state_mutex_);
    if (rankings_.empty()) return error(409, "no stakeholder preferences loaded");
    if (!classification_) {
        const auto c = mavt::classify_technologies(data_.model, data_.alternatives, rankings_, data_.analysis);
        const auto o = mavt::occurrence_frequency(data_.model, data_.alternatives, rankings_, data_.analysis);
        classification_ = mavt::to_json(c, o);
    }
    return {200, *classification_};
}

ApiResponse ApiService::clustering() {
    std::lock_guard lock(state_mutex_);
    if (rankings_.size() < 2) return error(409, "clustering needs at least two stakeholders");
    return {200, mavt::to_json(mavt::cluster_stakeholders(rankings_), mavt::mean_rank_order(rankings_))};
}

ApiResponse ApiService::whatif(const json& body) {
    namespace jr = json_read;
    jr::expect_object(body, "$");
    jr::allowed_keys(body, "$", {"stakeholder", "weights", "gamma", "value_functions", "top"});
    const std::string stakeholder = jr::string(body, "$", "stakeholder");
    std::lock_guard lock(state_mutex_);
    const std::size_t k = stakeholder_index(stakeholder);
    if (k == data_.preferences.size()) return error(404, "unknown stakeholder '" + stakeholder + "'");

    // Overrides go through the regular preference loader, so they are validated the same way.
    json merged = mavt::to_json(data_.preferences[k]);
    for (const char* key : {"weights", "gamma", "value_functions"})
        if (body.contains(key)) merged[key] = body[key];
    const auto prefs = mavt::preferences_from_json({{"stakeholders", json::array({merged})}}, data_.catalog);
    const auto transient = mavt::rank(data_.profiles, prefs.front(), data_.catalog, data_.ranges);
    const double top = jr::number_or(body, "$", "top", 10.0);
    if (!(top >= 1.0) || top != std::floor(top)) jr::fail("$.top", "expected a positive integer");

    const double distance = mavt::kendall_distance(rankings_[k], transient);
    json entries = json::array();
    for (const auto& e : transient.entries) {
        if (entries.size() == static_cast<std::size_t>(top)) break;
        json item = entry_json(e);
        item["baseline_rank"] = rankings_[k].rank_of(e.alternative);
        entries.push_back(std::move(item));
    }
    return {200,
            {{"stakeholder", stakeholder},
             {"preferences", mavt::to_json(prefs.front())},
             {"kendall_distance", distance},
             {"kendall_tau", 1.0 - 2.0 * distance},
             {"entries", std::move(entries)}}};
}

}  // namespace vfmga::orchestrator
