#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vfmga/error.hpp"

namespace vfmga::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Index of a declared variable. Only meaningful for the program that issued it
/// (and copies of that program).
struct VarId {
    std::size_t index = 0;
    auto operator<=>(const VarId&) const = default;
};

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct Term {
    VarId var;
    double coeff = 0.0;
};

struct Variable {
    std::string id;
    double lower = 0.0;
    double upper = kInfinity;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    Relation relation = Relation::kLessEqual;
    double rhs = 0.0;
};

/// Minimisation objective. Maximisation is expressed with negated coefficients.
/// `constant` is carried through to LpSolution::objective and never affects the
/// optimal point.
struct Objective {
    std::vector<Term> terms;
    double constant = 0.0;
};

class UnknownVariableError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Bounded-variable linear program `min c'x + k  s.t.  rows, l <= x <= u`.
///
/// Terms are normalised on insertion: repeated variables within one row are
/// summed and exact zeros are dropped, so `constraint(i).terms` lists each
/// variable at most once in ascending index order.
class LinearProgram {
public:
    /// Throws ValidationError on duplicate id, NaN bounds, or lower > upper.
    VarId add_variable(std::string id, double lower = 0.0, double upper = kInfinity);

    /// Builder form: appends in place. Throws UnknownVariableError if a term
    /// references an index that was never declared.
    void append_constraint(Constraint c);

    void set_objective(Objective objective);

    [[nodiscard]] std::size_t num_variables() const noexcept { return variables_.size(); }
    [[nodiscard]] std::size_t num_constraints() const noexcept { return constraints_.size(); }

    [[nodiscard]] const Variable& variable(VarId v) const { return variables_.at(v.index); }
    [[nodiscard]] const std::vector<Variable>& variables() const noexcept { return variables_; }
    [[nodiscard]] const Constraint& constraint(std::size_t i) const { return constraints_.at(i); }
    [[nodiscard]] const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    [[nodiscard]] const Objective& objective() const noexcept { return objective_; }

    [[nodiscard]] std::optional<VarId> find(std::string_view id) const;
    /// Like find() but throws UnknownVariableError.
    [[nodiscard]] VarId at(std::string_view id) const;

private:
    std::vector<Term> normalise(std::vector<Term> terms, std::string_view where) const;

    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    Objective objective_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Returns a copy of `lp` with exactly one more constraint; `lp` is untouched.
[[nodiscard]] LinearProgram add_constraint(const LinearProgram& lp, Constraint c);

/// Name-based term construction; throws UnknownVariableError.
[[nodiscard]] Term term(const LinearProgram& lp, std::string_view id, double coeff);

[[nodiscard]] std::string_view to_string(Relation r) noexcept;

}  // namespace vfmga::lp
