#pragma once

#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vfmga/error.hpp"

// Small checked accessors shared by the JSON loaders. Every failure is a
// ValidationError that names the JSON path.
namespace vfmga::json_read {

using nlohmann::json;

[[noreturn]] void fail(std::string_view path, std::string_view what);

/// Parses a file; syntax errors become ValidationError.
[[nodiscard]] json parse_file(const std::filesystem::path& path);

void expect_object(const json& j, std::string_view path);
void allowed_keys(const json& j, std::string_view path, std::initializer_list<std::string_view> keys);

[[nodiscard]] const json& member(const json& j, std::string_view path, std::string_view key);
[[nodiscard]] double number(const json& j, std::string_view path);
[[nodiscard]] double number(const json& j, std::string_view path, std::string_view key);
[[nodiscard]] double number_or(const json& j, std::string_view path, std::string_view key, double fallback);
[[nodiscard]] std::optional<double> optional_number(const json& j, std::string_view path, std::string_view key);
[[nodiscard]] std::string string(const json& j, std::string_view path, std::string_view key);
[[nodiscard]] std::string string_or(const json& j, std::string_view path, std::string_view key,
                                    std::string fallback);
[[nodiscard]] bool boolean_or(const json& j, std::string_view path, std::string_view key, bool fallback);
[[nodiscard]] std::vector<double> numbers(const json& j, std::string_view path);
/// A scalar is broadcast to `length` entries; an array must have exactly `length`.
[[nodiscard]] std::vector<double> profile(const json& j, std::string_view path, std::size_t length);

[[nodiscard]] std::string child(std::string_view path, std::string_view key);
[[nodiscard]] std::string child(std::string_view path, std::size_t index);

}  // namespace vfmga::json_read
