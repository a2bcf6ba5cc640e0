#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vfmga/esm/compile.hpp"
#include "vfmga/execution.hpp"
#include "vfmga/lp/simplex.hpp"
#include "vfmga/mga/alternative.hpp"
#include "vfmga/mga/groups.hpp"

namespace vfmga::mga {

enum class Scheme { kExtreme, kMultiExtreme };

/// Weights are +1 (minimise the group) or -1 (maximise it).
struct WeightVector {
    std::string id;
    Scheme scheme = Scheme::kExtreme;
    Strategy strategy = Strategy::kBenchmark;
    std::string direction;
    std::vector<std::pair<std::string, int>> weights;  ///< group id -> weight
};

/// Extreme: "<group>/min" and "<group>/max" for every group. Multi-extreme:
/// for every (strategy, attribute) with both a driver and an avoider group,
/// "me:<strategy>:<attr>/min-driver" (+1 driver, -1 avoider) and
/// "/max-driver" (-1 driver, +1 avoider). Extreme vectors come first.
[[nodiscard]] std::vector<WeightVector> build_weight_vectors(std::span<const MgaGroup> groups,
                                                             std::span<const Scheme> schemes);

/// Solves  min  mga'x + rho * c'x / |f*|   s.t.  original rows,  c'x + k <= (1 + slack) f*
/// where c, k are the program's objective terms and constant. The augmentation
/// term steers ties toward lower cost. Throws ValidationError for slack < 0.
[[nodiscard]] lp::LpSolution augmented_solve(const lp::LinearProgram& program, double f_star,
                                             std::span<const lp::Term> mga_terms, double slack, double rho = 1e-4,
                                             const lp::SolveOptions& options = {});

struct MgaSettings {
    double rho = 1e-4;
    /// Start every MGA solve from the optimum's basis.
    bool warm_start = true;
    /// Invested capacity beyond this multiple of the capacity the alternative
    /// actually uses flags it as a capacity artefact.
    double artefact_factor = 1.5;
    lp::SolveOptions solve;
};

/// The compiled system plus its cost optimum; shared read-only by every run.
class MgaContext {
public:
    /// Throws Error when the cost-minimisation problem is not optimal.
    explicit MgaContext(esm::SystemModel model, MgaSettings settings = {});

    [[nodiscard]] const esm::SystemModel& model() const noexcept { return model_; }
    [[nodiscard]] const esm::CompiledSystem& compiled() const noexcept { return compiled_; }
    [[nodiscard]] const lp::LpSolution& optimum() const noexcept { return optimum_; }
    [[nodiscard]] double f_star() const noexcept { return optimum_.objective; }
    [[nodiscard]] const MgaSettings& settings() const noexcept { return settings_; }

    /// The cost optimum as alternative "A0000".
    [[nodiscard]] Alternative optimum_alternative() const;

    /// Objective terms of a weight vector: each group's generation (summed
    /// over slices) or invested capacity, scaled by the group weight.
    [[nodiscard]] std::vector<lp::Term> mga_terms(const WeightVector& w, std::span<const MgaGroup> groups) const;

    /// One MGA run. Throws Error if the run is not optimal.
    [[nodiscard]] Alternative solve(const WeightVector& w, std::span<const MgaGroup> groups, double slack) const;

    /// Builds the alternative record for any solution of the compiled program.
    [[nodiscard]] Alternative make_alternative(std::span<const double> values) const;

private:
    esm::SystemModel model_;
    MgaSettings settings_;
    esm::CompiledSystem compiled_;
    lp::LpSolution optimum_;
};

struct RunFailure {
    std::size_t run_index = 0;
    std::string weight_vector;
    double slack = 0.0;
    std::string message;
};

struct SweepResult {
    double f_star = 0.0;
    std::size_t runs = 0;              ///< weight vectors x slacks
    std::size_t raw_alternatives = 0;  ///< successful runs plus the optimum, before deduplication
    std::vector<Alternative> alternatives;  ///< deduplicated, optimum first, ascending id
    std::vector<RunFailure> failures;
};

struct SweepOptions {
    /// Values are rounded to this fraction of each technology's scale (maximum
    /// annual supply for generation, maximum investment for capacity) before
    /// comparing alternatives.
    double dedup_tolerance = 1e-6;
};

/// Run k (1-based) solves vectors[(k-1) % V] at slacks[(k-1) / V] and yields
/// alternative "A%04d" of k. Failed runs are collected, not thrown. Serial and
/// parallel execution give identical results.
[[nodiscard]] SweepResult generate_all(const MgaContext& context, std::span<const MgaGroup> groups,
                                       std::span<const WeightVector> vectors, std::span<const double> slacks,
                                       const SweepOptions& options = {}, Execution exec = Execution::kParallel);

/// Merges alternatives whose rounded generation and investment vectors agree;
/// the lowest id survives and collects the others' provenance.
[[nodiscard]] std::vector<Alternative> deduplicate(std::vector<Alternative> alts, const esm::SystemModel& model,
                                                   double tolerance);

[[nodiscard]] std::string alternative_id(std::size_t run_index);
[[nodiscard]] std::string_view to_string(Scheme s) noexcept;
[[nodiscard]] Scheme parse_scheme(std::string_view name);

}  // namespace vfmga::mga
