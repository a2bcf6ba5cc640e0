#pragma once

#include <filesystem>

#include <json.hpp>

#include "vfmga/esm/system_model.hpp"

namespace vfmga::esm {

/// Reads the `system.json` layout. Profiles (`availability`, `cop`) accept a
/// scalar for a flat profile or one number per slice. Unknown keys are
/// rejected. Throws ValidationError with the offending path.
[[nodiscard]] SystemModel system_from_json(const nlohmann::json& doc);
[[nodiscard]] SystemModel load_system(const std::filesystem::path& path);

}  // namespace vfmga::esm
