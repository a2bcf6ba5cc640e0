#include "oracle/vertex_enumeration.hpp"

#include <algorithm>
#include <cmath>

namespace vfmga::oracle {
namespace {

struct Row {
    std::vector<double> a;
    double b;
};

// Solves the square system in place; false when (numerically) singular.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        if (std::abs(a[p][k]) < 1e-10) return false;
        std::swap(a[p], a[k]);
        std::swap(b[p], b[k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
        x[k] = s / a[k][k];
    }
    return true;
}

}  // namespace

std::optional<VertexOptimum> enumerate_vertices(const lp::LinearProgram& lp, double tol) {
    const std::size_t n = lp.num_variables();
    std::vector<Row> eq, ineq;  // ineq rows read a x <= b
    for (const auto& c : lp.constraints()) {
        Row r{std::vector<double>(n, 0.0), c.rhs};
        for (const auto& t : c.terms) r.a[t.var.index] = t.coeff;
        switch (c.relation) {
            case lp::Relation::kEqual: eq.push_back(r); break;
            case lp::Relation::kLessEqual: ineq.push_back(r); break;
            case lp::Relation::kGreaterEqual:
                for (double& v : r.a) v = -v;
                r.b = -r.b;
                ineq.push_back(r);
                break;
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        const auto& v = lp.variables()[j];
        if (std::isfinite(v.upper)) {
            Row r{std::vector<double>(n, 0.0), v.upper};
            r.a[j] = 1.0;
            ineq.push_back(r);
        }
        if (std::isfinite(v.lower)) {
            Row r{std::vector<double>(n, 0.0), -v.lower};
            r.a[j] = -1.0;
            ineq.push_back(r);
        }
    }
    if (eq.size() > n) return std::nullopt;
    const std::size_t pick = n - eq.size();

    std::vector<double> c(n, 0.0);
    for (const auto& t : lp.objective().terms) c[t.var.index] = t.coeff;

    auto feasible = [&](const std::vector<double>& x) {
        for (const Row& r : eq) {
            double s = 0.0, mag = 0.0;
            for (std::size_t j = 0; j < n; ++j) { s += r.a[j] * x[j]; mag += std::abs(r.a[j] * x[j]); }
            if (std::abs(s - r.b) > tol * std::max({1.0, std::abs(r.b), mag})) return false;
        }
        for (const Row& r : ineq) {
            double s = 0.0, mag = 0.0;
            for (std::size_t j = 0; j < n; ++j) { s += r.a[j] * x[j]; mag += std::abs(r.a[j] * x[j]); }
            if (s - r.b > tol * std::max({1.0, std::abs(r.b), mag})) return false;
        }
        return true;
    };

    std::optional<VertexOptimum> best;
    std::size_t count = 0;
    std::vector<std::size_t> chosen;
    std::vector<double> x;

    auto evaluate = [&] {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (const Row& r : eq) { a.push_back(r.a); b.push_back(r.b); }
        for (std::size_t k : chosen) { a.push_back(ineq[k].a); b.push_back(ineq[k].b); }
        if (!solve_square(std::move(a), std::move(b), x)) return;
        if (!feasible(x)) return;
        ++count;
        double obj = lp.objective().constant;
        for (std::size_t j = 0; j < n; ++j) obj += c[j] * x[j];
        if (!best || obj < best->objective) best = VertexOptimum{obj, x, 0};
    };

    // Iterative k-combination enumeration over ineq rows.
    if (pick > ineq.size()) return std::nullopt;
    chosen.resize(pick);
    for (std::size_t i = 0; i < pick; ++i) chosen[i] = i;
    while (true) {
        evaluate();
        std::size_t i = pick;
        while (i > 0 && chosen[i - 1] == ineq.size() - pick + (i - 1)) --i;
        if (i == 0) break;
        ++chosen[i - 1];
        for (std::size_t k = i; k < pick; ++k) chosen[k] = chosen[k - 1] + 1;
    }
    if (best) best->feasible_vertices = count;
    return best;
}

}  // namespace vfmga::oracle
