#include "vfmga/lp/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vfmga::lp {

VarId LinearProgram::add_variable(std::string id, double lower, double upper) {
    if (std::isnan(lower) || std::isnan(upper))
        throw ValidationError("variable '" + id + "': NaN bound");
    if (lower > upper)
        throw ValidationError("variable '" + id + "': lower bound exceeds upper bound");
    if (lower == kInfinity || upper == -kInfinity)
        throw ValidationError("variable '" + id + "': bound on the wrong side of infinity");
    if (index_.contains(id)) throw ValidationError("duplicate variable id '" + id + "'");
    VarId v{variables_.size()};
    index_.emplace(id, v.index);
    variables_.push_back(Variable{std::move(id), lower, upper});
    return v;
}

std::vector<Term> LinearProgram::normalise(std::vector<Term> terms, std::string_view where) const {
    for (const Term& t : terms) {
        if (t.var.index >= variables_.size())
            throw UnknownVariableError(std::string(where) + ": reference to undeclared variable #" +
                                       std::to_string(t.var.index));
        if (!std::isfinite(t.coeff))
            throw ValidationError(std::string(where) + ": non-finite coefficient");
    }
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const Term& t : terms) {
        if (!out.empty() && out.back().var == t.var)
            out.back().coeff += t.coeff;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const Term& t) { return t.coeff == 0.0; });
    return out;
}

void LinearProgram::append_constraint(Constraint c) {
    if (!std::isfinite(c.rhs)) throw ValidationError("constraint '" + c.name + "': non-finite rhs");
    c.terms = normalise(std::move(c.terms), "constraint '" + c.name + "'");
    constraints_.push_back(std::move(c));
}

void LinearProgram::set_objective(Objective objective) {
    if (!std::isfinite(objective.constant)) throw ValidationError("objective: non-finite constant");
    objective.terms = normalise(std::move(objective.terms), "objective");
    objective_ = std::move(objective);
}

std::optional<VarId> LinearProgram::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return VarId{it->second};
}

VarId LinearProgram::at(std::string_view id) const {
    if (auto v = find(id)) return *v;
    throw UnknownVariableError("unknown variable '" + std::string(id) + "'");
}

LinearProgram add_constraint(const LinearProgram& lp, Constraint c) {
    LinearProgram out = lp;
    out.append_constraint(std::move(c));
    return out;
}

Term term(const LinearProgram& lp, std::string_view id, double coeff) { return Term{lp.at(id), coeff}; }

std::string_view to_string(Relation r) noexcept {
    switch (r) {
        case Relation::kLessEqual: return "<=";
        case Relation::kGreaterEqual: return ">=";
        case Relation::kEqual: return "=";
    }
    return "?";
}

}  // namespace vfmga::lp
