#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "vfmga/lp/linear_program.hpp"

namespace vfmga::lp {

/// Writes `lp` in fixed-column MPS layout. Columns and rows are renamed to
/// 8-character codes (C0000001, R0000001, ...) so every field fits its fixed
/// column range; a leading comment block maps the codes back to the original
/// ids. Numbers use the shortest %g form that fits the 12-character field.
void write_mps(const LinearProgram& lp, std::ostream& out, std::string_view name = "VFMGA");

void write_mps_file(const LinearProgram& lp, const std::filesystem::path& path,
                    std::string_view name = "VFMGA");

/// Formats a value for a 12-character numeric MPS field.
[[nodiscard]] std::string mps_number(double value);

}  // namespace vfmga::lp
