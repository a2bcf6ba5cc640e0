#include "vfmga/json_read.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace vfmga::json_read {

void fail(std::string_view path, std::string_view what) {
    throw ValidationError(fmt::format("{}: {}", path.empty() ? "$" : path, what));
}

json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void expect_object(const json& j, std::string_view path) {
    if (!j.is_object()) fail(path, "expected an object");
}

void allowed_keys(const json& j, std::string_view path, std::initializer_list<std::string_view> keys) {
    expect_object(j, path);
    for (const auto& [k, v] : j.items())
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(path, "unknown key '" + k + "'");
}

const json& member(const json& j, std::string_view path, std::string_view key) {
    expect_object(j, path);
    auto it = j.find(key);
    if (it == j.end()) fail(path, fmt::format("missing required key '{}'", key));
    return *it;
}

double number(const json& j, std::string_view path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

double number(const json& j, std::string_view path, std::string_view key) {
    return number(member(j, path, key), child(path, key));
}

double number_or(const json& j, std::string_view path, std::string_view key, double fallback) {
    auto v = optional_number(j, path, key);
    return v ? *v : fallback;
}

std::optional<double> optional_number(const json& j, std::string_view path, std::string_view key) {
    expect_object(j, path);
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return number(*it, child(path, key));
}

std::string string(const json& j, std::string_view path, std::string_view key) {
    const json& v = member(j, path, key);
    if (!v.is_string()) fail(child(path, key), "expected a string");
    return v.get<std::string>();
}

std::string string_or(const json& j, std::string_view path, std::string_view key, std::string fallback) {
    expect_object(j, path);
    if (!j.contains(key)) return fallback;
    return string(j, path, key);
}

bool boolean_or(const json& j, std::string_view path, std::string_view key, bool fallback) {
    expect_object(j, path);
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) fail(child(path, key), "expected true or false");
    return it->get<bool>();
}

std::vector<double> numbers(const json& j, std::string_view path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], child(path, i)));
    return out;
}

std::vector<double> profile(const json& j, std::string_view path, std::size_t length) {
    if (j.is_number()) return std::vector<double>(length, number(j, path));
    std::vector<double> out = numbers(j, path);
    if (out.size() != length) fail(path, fmt::format("expected {} entries, found {}", length, out.size()));
    return out;
}

std::string child(std::string_view path, std::string_view key) {
    return fmt::format("{}.{}", path.empty() ? "$" : path, key);
}

std::string child(std::string_view path, std::size_t index) {
    return fmt::format("{}[{}]", path.empty() ? "$" : path, index);
}

}  // namespace vfmga::json_read
