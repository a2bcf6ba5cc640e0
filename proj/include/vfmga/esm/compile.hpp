#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vfmga/esm/system_model.hpp"
#include "vfmga/lp/linear_program.hpp"
#include "vfmga/lp/simplex.hpp"

namespace vfmga::esm {

/// Total supply of a carrier cannot cover its demand in some slice, even with
/// every technology at full availability and maximum investment.
class InfeasibleModelError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DimensionMismatchError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// The cost-minimisation LP plus the map from technologies to its variables.
/// Variable ids are `gen[<tech>@<slice>]` and `inv[<tech>]`; only technologies
/// with a positive investment limit get an `inv` variable.
struct CompiledSystem {
    lp::LinearProgram program;
    std::vector<std::vector<lp::VarId>> generation;  ///< [technology][slice]
    std::vector<std::optional<lp::VarId>> investment;  ///< [technology]
};

[[nodiscard]] CompiledSystem compile(const SystemModel& model);

struct CostBreakdown {
    double total = 0.0;
    double invest = 0.0;
    double fixed_om = 0.0;
    double variable_om = 0.0;
    double fuel = 0.0;
    double auxiliary = 0.0;

    /// O&M in the broad sense used by the O&M cost attribute: everything except investment.
    [[nodiscard]] double operating() const noexcept { return fixed_om + variable_om + fuel + auxiliary; }
};

struct Decomposition {
    CostBreakdown costs;
    std::vector<double> annual_generation;  ///< MWh per technology
    std::vector<double> invested_capacity;  ///< MW per technology
};

/// Throws DimensionMismatchError when `values` does not have one entry per
/// variable of `compiled.program`, or `compiled` does not belong to `model`.
[[nodiscard]] Decomposition decompose(const SystemModel& model, const CompiledSystem& compiled,
                                      std::span<const double> values);

[[nodiscard]] inline Decomposition decompose(const SystemModel& model, const CompiledSystem& compiled,
                                             const lp::LpSolution& sol) {
    return decompose(model, compiled, std::span<const double>(sol.values));
}

/// Per-slice generation of one technology.
[[nodiscard]] std::vector<double> generation_profile(const CompiledSystem& compiled, std::size_t tech,
                                                     std::span<const double> values);

/// Supply minus consumption minus demand for every (carrier, slice), in
/// `model.carriers` order, slices innermost.
[[nodiscard]] std::vector<double> balance_residuals(const SystemModel& model, const CompiledSystem& compiled,
                                                    std::span<const double> values);

/// Same system on one slice of weight `hours_per_year`: demands summed,
/// availability and COP averaged with slice weights.
[[nodiscard]] SystemModel collapse_to_single_slice(const SystemModel& model);

}  // namespace vfmga::esm
