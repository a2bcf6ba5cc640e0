#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "vfmga/lp/linear_program.hpp"

namespace vfmga::lp {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded };

enum class BasisStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

/// Simplex basis over structural columns and row logicals. A basis taken from
/// a program with fewer rows is accepted as a warm start for a program that
/// appends rows: the missing row logicals enter the basis.
struct Basis {
    std::vector<BasisStatus> columns;
    std::vector<BasisStatus> rows;
};

struct LpSolution {
    SolveStatus status = SolveStatus::kInfeasible;
    std::vector<double> values;  ///< one entry per variable, in declaration order
    double objective = 0.0;      ///< includes Objective::constant
    std::size_t iterations = 0;
    Basis basis;

    [[nodiscard]] double value(VarId v) const { return values.at(v.index); }
    [[nodiscard]] bool optimal() const noexcept { return status == SolveStatus::kOptimal; }
};

/// Fixed tolerances. Changing them changes which vertex degenerate problems
/// return, and with it the MGA alternative counts after deduplication.
struct Tolerances {
    double primal_feasibility = 1e-7;  ///< relative to max(1, |bound|)
    double optimality = 1e-9;          ///< relative to max(1, max |c_j|)
    double pivot = 1e-9;
    double residual = 1e-7;            ///< relative row residual accepted at exit
};

struct SolveOptions {
    Tolerances tolerances;
    std::size_t max_iterations = 200000;
    std::size_t refactor_interval = 200;
    /// Consecutive degenerate pivots tolerated before switching to Bland's rule.
    std::size_t degenerate_limit = 50;
    std::optional<Basis> warm_start;
};

/// Residuals stayed above tolerance after refactorisation, or the iteration
/// limit was hit.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Bounded-variable revised simplex (dense basis inverse, Dantzig pricing with
/// lowest-index ties, Bland fallback on stalling). Deterministic: identical
/// programs and options give bitwise-identical solutions.
[[nodiscard]] LpSolution solve(const LinearProgram& lp, const SolveOptions& options = {});

[[nodiscard]] std::string_view to_string(SolveStatus s) noexcept;

}  // namespace vfmga::lp
