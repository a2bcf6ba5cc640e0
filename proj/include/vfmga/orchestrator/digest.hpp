#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace vfmga::orchestrator {

/// Lowercase hex SHA-256.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);
/// Throws Error when the file cannot be read.
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);
[[nodiscard]] std::string read_file(const std::filesystem::path& path);

}  // namespace vfmga::orchestrator
