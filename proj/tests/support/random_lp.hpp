#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "vfmga/lp/linear_program.hpp"

namespace vfmga::testing {

// Random bounded program with up to 5 variables and 4 rows. Rows are built
// around a random point so most instances are feasible, but not all.
inline lp::LinearProgram random_program(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    std::uniform_int_distribution<int> nvars(2, 5), nrows(1, 4), rel(0, 2);
    std::uniform_real_distribution<double> lo(-3.0, 0.0), width(0.5, 5.0), slack(-0.5, 2.0);
    lp::LinearProgram lp;
    const int n = nvars(rng);
    std::vector<double> anchor;
    std::vector<lp::Term> obj;
    for (int j = 0; j < n; ++j) {
        const double l = lo(rng);
        const double u = l + width(rng);
        lp::VarId v = lp.add_variable("x" + std::to_string(j), l, u);
        anchor.push_back(l + 0.5 * (u - l));
        obj.push_back({v, coef(rng)});
    }
    const int m = nrows(rng);
    for (int i = 0; i < m; ++i) {
        lp::Constraint c;
        c.name = "r" + std::to_string(i);
        double at = 0.0;
        for (int j = 0; j < n; ++j) {
            const double a = std::round(coef(rng) * 4.0) / 4.0;
            c.terms.push_back({lp::VarId{static_cast<std::size_t>(j)}, a});
            at += a * anchor[static_cast<std::size_t>(j)];
        }
        switch (rel(rng)) {
            case 0: c.relation = lp::Relation::kLessEqual; c.rhs = at + slack(rng); break;
            case 1: c.relation = lp::Relation::kGreaterEqual; c.rhs = at - slack(rng); break;
            default: c.relation = lp::Relation::kEqual; c.rhs = at + 0.25 * slack(rng); break;
        }
        lp.append_constraint(c);
    }
    lp.set_objective({obj, 0.0});
    return lp;
}

}  // namespace vfmga::testing
