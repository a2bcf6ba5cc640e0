#include "vfmga/lp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace vfmga::lp {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Entry {
    std::size_t row;
    double value;
};

enum class PhaseResult { kOptimal, kUnbounded };

// Column layout: [0, n) structural, [n, n+m) row logicals, [n+m, ...) phase-one
// artificials. Row i reads  a_i x + r_i (+ s_i art_i) = b_i  where the logical
// r_i carries the relation through its bounds.
class Simplex {
public:
    Simplex(const LinearProgram& lp, const SolveOptions& options);

    LpSolution run();

private:
    [[nodiscard]] std::size_t total_columns() const noexcept { return n_ + m_ + art_row_.size(); }

    template <class F>
    void for_column(std::size_t j, F&& f) const {
        if (j < n_) {
            for (const Entry& e : cols_[j]) f(e.row, e.value);
        } else if (j < n_ + m_) {
            f(j - n_, 1.0);
        } else {
            const std::size_t k = j - n_ - m_;
            f(art_row_[k], art_sign_[k]);
        }
    }

    [[nodiscard]] double feas_tol(double bound) const noexcept {
        return opt_.tolerances.primal_feasibility * std::max(1.0, std::abs(bound));
    }

    void place_nonbasic_at_bound(std::size_t j);
    bool try_warm_start(const Basis& basis);
    void cold_start();
    bool refactor();
    void compute_primal();
    void compute_duals();
    [[nodiscard]] double max_primal_infeasibility() const;
    std::pair<std::size_t, int> choose_entering(bool bland) const;
    PhaseResult iterate();
    LpSolution extract(SolveStatus status) const;
    void check_residuals(const std::vector<double>& x) const;

    const LinearProgram& lp_;
    const SolveOptions& opt_;
    std::size_t m_ = 0;
    std::size_t n_ = 0;

    std::vector<std::vector<Entry>> cols_;
    std::vector<double> b_;
    std::vector<double> c_struct_;
    double opt_tol_ = 0.0;

    std::vector<std::size_t> art_row_;
    std::vector<double> art_sign_;

    std::vector<double> lower_, upper_, x_, cost_, d_;
    std::vector<BasisStatus> status_;
    std::vector<std::size_t> head_;  // basis position -> column
    std::vector<std::size_t> pos_;   // column -> basis position or kNone
    std::vector<double> binv_;       // m x m row-major

    std::size_t iterations_ = 0;
    std::size_t since_refactor_ = 0;
};

Simplex::Simplex(const LinearProgram& lp, const SolveOptions& options)
    : lp_(lp), opt_(options), m_(lp.num_constraints()), n_(lp.num_variables()) {
    cols_.resize(n_);
    b_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
        const Constraint& c = lp.constraint(i);
        b_[i] = c.rhs;
        for (const Term& t : c.terms) cols_[t.var.index].push_back(Entry{i, t.coeff});
    }
    c_struct_.assign(n_, 0.0);
    double cmax = 0.0;
    for (const Term& t : lp.objective().terms) {
        c_struct_[t.var.index] = t.coeff;
        cmax = std::max(cmax, std::abs(t.coeff));
    }
    opt_tol_ = opt_.tolerances.optimality * std::max(1.0, cmax);
}

void Simplex::place_nonbasic_at_bound(std::size_t j) {
    if (std::isfinite(lower_[j])) {
        status_[j] = BasisStatus::kAtLower;
        x_[j] = lower_[j];
    } else if (std::isfinite(upper_[j])) {
        status_[j] = BasisStatus::kAtUpper;
        x_[j] = upper_[j];
    } else {
        status_[j] = BasisStatus::kFree;
        x_[j] = 0.0;
    }
}

bool Simplex::refactor() {
    const std::size_t m = m_;
    std::vector<double> a(m * m, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        for_column(head_[r], [&](std::size_t row, double v) { a[row * m + r] = v; });
    std::vector<double> inv(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) inv[i * m + i] = 1.0;

    // Gauss-Jordan with partial pivoting; B is sparse so zero multipliers are skipped.
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t p = k;
        double best = std::abs(a[k * m + k]);
        for (std::size_t i = k + 1; i < m; ++i) {
            const double v = std::abs(a[i * m + k]);
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best < 1e-11) return false;
        if (p != k) {
            std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(p * m),
                             a.begin() + static_cast<std::ptrdiff_t>((p + 1) * m),
                             a.begin() + static_cast<std::ptrdiff_t>(k * m));
            std::swap_ranges(inv.begin() + static_cast<std::ptrdiff_t>(p * m),
                             inv.begin() + static_cast<std::ptrdiff_t>((p + 1) * m),
                             inv.begin() + static_cast<std::ptrdiff_t>(k * m));
        }
        const double piv = a[k * m + k];
        double* ak = &a[k * m];
        double* ik = &inv[k * m];
        for (std::size_t j = 0; j < m; ++j) {
            ak[j] /= piv;
            ik[j] /= piv;
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i == k) continue;
            const double f = a[i * m + k];
            if (f == 0.0) continue;
            double* ai = &a[i * m];
            double* ii = &inv[i * m];
            for (std::size_t j = k; j < m; ++j) ai[j] -= f * ak[j];
            for (std::size_t j = 0; j < m; ++j) ii[j] -= f * ik[j];
        }
    }
    binv_ = std::move(inv);
    since_refactor_ = 0;
    return true;
}

void Simplex::compute_primal() {
    std::vector<double> rhs = b_;
    for (std::size_t j = 0; j < total_columns(); ++j) {
        if (status_[j] == BasisStatus::kBasic || x_[j] == 0.0) continue;
        const double xj = x_[j];
        for_column(j, [&](std::size_t row, double v) { rhs[row] -= v * xj; });
    }
    for (std::size_t r = 0; r < m_; ++r) {
        const double* row = &binv_[r * m_];
        double s = 0.0;
        for (std::size_t i = 0; i < m_; ++i) s += row[i] * rhs[i];
        x_[head_[r]] = s;
    }
}

void Simplex::compute_duals() {
    std::vector<double> y(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
        const double cb = cost_[head_[r]];
        if (cb == 0.0) continue;
        const double* row = &binv_[r * m_];
        for (std::size_t i = 0; i < m_; ++i) y[i] += cb * row[i];
    }
    for (std::size_t j = 0; j < total_columns(); ++j) {
        if (status_[j] == BasisStatus::kBasic) {
            d_[j] = 0.0;
            continue;
        }
        double s = cost_[j];
        for_column(j, [&](std::size_t row, double v) { s -= y[row] * v; });
        d_[j] = s;
    }
}

double Simplex::max_primal_infeasibility() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
        const std::size_t j = head_[r];
        const double lo = lower_[j] - x_[j];
        const double hi = x_[j] - upper_[j];
        if (lo > feas_tol(lower_[j])) worst = std::max(worst, lo);
        if (hi > feas_tol(upper_[j])) worst = std::max(worst, hi);
    }
    return worst;
}

void Simplex::cold_start() {
    const std::size_t n = n_, m = m_;
    lower_.assign(n + m, 0.0);
    upper_.assign(n + m, 0.0);
    x_.assign(n + m, 0.0);
    status_.assign(n + m, BasisStatus::kAtLower);
    art_row_.clear();
    art_sign_.clear();
    for (std::size_t j = 0; j < n; ++j) {
        lower_[j] = lp_.variables()[j].lower;
        upper_[j] = lp_.variables()[j].upper;
        place_nonbasic_at_bound(j);
    }
    std::vector<double> residual = b_;
    for (std::size_t j = 0; j < n; ++j)
        for (const Entry& e : cols_[j]) residual[e.row] -= e.value * x_[j];

    head_.assign(m, kNone);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t logical = n + i;
        switch (lp_.constraint(i).relation) {
            case Relation::kLessEqual: lower_[logical] = 0.0; upper_[logical] = kInfinity; break;
            case Relation::kGreaterEqual: lower_[logical] = -kInfinity; upper_[logical] = 0.0; break;
            case Relation::kEqual: lower_[logical] = 0.0; upper_[logical] = 0.0; break;
        }
        const double r = residual[i];
        if (r >= lower_[logical] && r <= upper_[logical]) {
            head_[i] = logical;
            status_[logical] = BasisStatus::kBasic;
            x_[logical] = r;
        } else {
            // Logical parks at the bound nearest the residual; the artificial
            // absorbs what is left and starts basic at a non-negative value.
            const bool at_upper = r > upper_[logical];
            x_[logical] = at_upper ? upper_[logical] : lower_[logical];
            status_[logical] = at_upper ? BasisStatus::kAtUpper : BasisStatus::kAtLower;
            art_row_.push_back(i);
            art_sign_.push_back((r - x_[logical]) >= 0.0 ? 1.0 : -1.0);
        }
    }
    const std::size_t k = art_row_.size();
    lower_.resize(n + m + k, 0.0);
    upper_.resize(n + m + k, kInfinity);
    x_.resize(n + m + k, 0.0);
    status_.resize(n + m + k, BasisStatus::kBasic);
    for (std::size_t a = 0; a < k; ++a) {
        const std::size_t i = art_row_[a];
        const std::size_t col = n + m + a;
        lower_[col] = 0.0;
        upper_[col] = kInfinity;
        x_[col] = std::abs(residual[i] - x_[n + i]);
        status_[col] = BasisStatus::kBasic;
        head_[i] = col;
    }
    pos_.assign(total_columns(), kNone);
    for (std::size_t r = 0; r < m; ++r) pos_[head_[r]] = r;

    binv_.assign(m * m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        double v = 1.0;
        for_column(head_[r], [&](std::size_t, double val) { v = val; });
        binv_[r * m + r] = 1.0 / v;
    }
    since_refactor_ = 0;
}

bool Simplex::try_warm_start(const Basis& basis) {
    const std::size_t n = n_, m = m_;
    if (basis.columns.size() != n || basis.rows.size() > m) return false;
    art_row_.clear();
    art_sign_.clear();
    lower_.assign(n + m, 0.0);
    upper_.assign(n + m, 0.0);
    x_.assign(n + m, 0.0);
    status_.assign(n + m, BasisStatus::kBasic);
    for (std::size_t j = 0; j < n; ++j) {
        lower_[j] = lp_.variables()[j].lower;
        upper_[j] = lp_.variables()[j].upper;
    }
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t logical = n + i;
        switch (lp_.constraint(i).relation) {
            case Relation::kLessEqual: lower_[logical] = 0.0; upper_[logical] = kInfinity; break;
            case Relation::kGreaterEqual: lower_[logical] = -kInfinity; upper_[logical] = 0.0; break;
            case Relation::kEqual: lower_[logical] = 0.0; upper_[logical] = 0.0; break;
        }
    }
    head_.clear();
    for (std::size_t j = 0; j < n + m; ++j) {
        BasisStatus s = BasisStatus::kBasic;
        if (j < n) s = basis.columns[j];
        else if (j - n < basis.rows.size()) s = basis.rows[j - n];
        status_[j] = s;
        switch (s) {
            case BasisStatus::kBasic: head_.push_back(j); break;
            case BasisStatus::kAtLower:
                if (!std::isfinite(lower_[j])) return false;
                x_[j] = lower_[j];
                break;
            case BasisStatus::kAtUpper:
                if (!std::isfinite(upper_[j])) return false;
                x_[j] = upper_[j];
                break;
            case BasisStatus::kFree:
                if (std::isfinite(lower_[j]) || std::isfinite(upper_[j])) return false;
                x_[j] = 0.0;
                break;
        }
    }
    if (head_.size() != m) return false;
    pos_.assign(n + m, kNone);
    for (std::size_t r = 0; r < m; ++r) pos_[head_[r]] = r;
    if (!refactor()) return false;
    compute_primal();
    return max_primal_infeasibility() == 0.0;
}

std::pair<std::size_t, int> Simplex::choose_entering(bool bland) const {
    std::size_t best_j = kNone;
    int best_dir = 0;
    double best_score = 0.0;
    for (std::size_t j = 0; j < total_columns(); ++j) {
        const BasisStatus s = status_[j];
        if (s == BasisStatus::kBasic || lower_[j] == upper_[j]) continue;
        const double dj = d_[j];
        int dir = 0;
        if (s == BasisStatus::kAtLower && dj < -opt_tol_) dir = 1;
        else if (s == BasisStatus::kAtUpper && dj > opt_tol_) dir = -1;
        else if (s == BasisStatus::kFree && std::abs(dj) > opt_tol_) dir = dj < 0.0 ? 1 : -1;
        if (dir == 0) continue;
        if (bland) return {j, dir};
        const double score = std::abs(dj);
        if (score > best_score) {
            best_score = score;
            best_j = j;
            best_dir = dir;
        }
    }
    return {best_j, best_dir};
}

PhaseResult Simplex::iterate() {
    const std::size_t m = m_;
    std::vector<double> alpha(m);
    std::vector<double> rowr(m);
    std::size_t degenerate_run = 0;
    bool bland = false;
    bool verified = false;

    while (true) {
        if (iterations_ >= opt_.max_iterations)
            throw NumericalError("simplex iteration limit reached (" + std::to_string(iterations_) + ")");
        if (since_refactor_ >= opt_.refactor_interval) {
            if (!refactor()) throw NumericalError("basis became singular during refactorisation");
            compute_primal();
            compute_duals();
        }

        auto [q, dir] = choose_entering(bland);
        if (q == kNone) {
            if (verified) return PhaseResult::kOptimal;
            // Confirm optimality on a fresh factorisation before accepting it.
            if (!refactor()) throw NumericalError("basis became singular during refactorisation");
            compute_primal();
            compute_duals();
            verified = true;
            continue;
        }
        verified = false;

        std::fill(alpha.begin(), alpha.end(), 0.0);
        for_column(q, [&](std::size_t row, double v) {
            for (std::size_t r = 0; r < m; ++r) alpha[r] += binv_[r * m + row] * v;
        });

        // Ratio test. Near-ties prefer the larger pivot magnitude, or under
        // Bland's rule the lower column index.
        double t_best = upper_[q] - lower_[q];
        std::size_t leave = kNone;
        double leave_mag = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            const double a = alpha[r];
            if (std::abs(a) <= opt_.tolerances.pivot) continue;
            const double delta = dir * a;
            const std::size_t j = head_[r];
            double ratio;
            if (delta > 0.0) {
                if (!std::isfinite(lower_[j])) continue;
                ratio = (x_[j] - lower_[j]) / delta;
            } else {
                if (!std::isfinite(upper_[j])) continue;
                ratio = (upper_[j] - x_[j]) / -delta;
            }
            ratio = std::max(ratio, 0.0);
            const double tie = 1e-12 * std::max(1.0, ratio);
            if (ratio < t_best - tie) {
                t_best = ratio;
                leave = r;
                leave_mag = std::abs(a);
            } else if (leave != kNone && ratio <= t_best + tie) {
                const bool better = bland ? j < head_[leave] : std::abs(a) > leave_mag;
                if (better) {
                    t_best = std::min(t_best, ratio);
                    leave = r;
                    leave_mag = std::abs(a);
                }
            }
        }
        if (!std::isfinite(t_best)) return PhaseResult::kUnbounded;

        ++iterations_;
        const double step = t_best;
        if (step <= 1e-12) {
            if (++degenerate_run > opt_.degenerate_limit) bland = true;
        } else {
            degenerate_run = 0;
            bland = false;
        }

        for (std::size_t r = 0; r < m; ++r)
            if (alpha[r] != 0.0) x_[head_[r]] -= dir * step * alpha[r];

        if (leave == kNone) {
            // Bound flip: entering variable crosses to its other bound.
            if (dir > 0) {
                x_[q] = upper_[q];
                status_[q] = BasisStatus::kAtUpper;
            } else {
                x_[q] = lower_[q];
                status_[q] = BasisStatus::kAtLower;
            }
            continue;
        }

        x_[q] += dir * step;
        const std::size_t p = head_[leave];
        const double delta = dir * alpha[leave];
        if (delta > 0.0) {
            x_[p] = lower_[p];
            status_[p] = BasisStatus::kAtLower;
        } else {
            x_[p] = upper_[p];
            status_[p] = BasisStatus::kAtUpper;
        }
        head_[leave] = q;
        pos_[q] = leave;
        pos_[p] = kNone;
        status_[q] = BasisStatus::kBasic;

        // Product-form update of the explicit inverse.
        const double piv = alpha[leave];
        double* lrow = &binv_[leave * m];
        for (std::size_t i = 0; i < m; ++i) lrow[i] /= piv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == leave || alpha[r] == 0.0) continue;
            const double f = alpha[r];
            double* row = &binv_[r * m];
            for (std::size_t i = 0; i < m; ++i) row[i] -= f * lrow[i];
        }
        ++since_refactor_;

        // Reduced costs via the new pivot row.
        std::copy(lrow, lrow + m, rowr.begin());
        const double dq = d_[q];
        for (std::size_t j = 0; j < total_columns(); ++j) {
            if (status_[j] == BasisStatus::kBasic) continue;
            double arj = 0.0;
            for_column(j, [&](std::size_t row, double v) { arj += rowr[row] * v; });
            d_[j] -= dq * arj;
        }
        d_[q] = 0.0;
    }
}

void Simplex::check_residuals(const std::vector<double>& x) const {
    const double tol = opt_.tolerances.residual;
    for (std::size_t i = 0; i < m_; ++i) {
        const Constraint& c = lp_.constraint(i);
        double lhs = 0.0, mag = 0.0;
        for (const Term& t : c.terms) {
            lhs += t.coeff * x[t.var.index];
            mag += std::abs(t.coeff * x[t.var.index]);
        }
        double viol = 0.0;
        switch (c.relation) {
            case Relation::kLessEqual: viol = lhs - c.rhs; break;
            case Relation::kGreaterEqual: viol = c.rhs - lhs; break;
            case Relation::kEqual: viol = std::abs(lhs - c.rhs); break;
        }
        const double scale = std::max({1.0, std::abs(c.rhs), mag});
        if (viol > tol * scale)
            throw NumericalError("row '" + c.name + "' residual " + std::to_string(viol) +
                                 " exceeds tolerance after refinement");
    }
}

LpSolution Simplex::extract(SolveStatus status) const {
    LpSolution sol;
    sol.status = status;
    sol.iterations = iterations_;
    sol.values.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    if (status == SolveStatus::kOptimal) {
        for (std::size_t j = 0; j < n_; ++j) {
            double& v = sol.values[j];
            const Variable& var = lp_.variables()[j];
            if (v < var.lower) {
                if (var.lower - v > feas_tol(var.lower))
                    throw NumericalError("variable '" + var.id + "' below its lower bound");
                v = var.lower;
            } else if (v > var.upper) {
                if (v - var.upper > feas_tol(var.upper))
                    throw NumericalError("variable '" + var.id + "' above its upper bound");
                v = var.upper;
            }
        }
        check_residuals(sol.values);
    }
    double obj = lp_.objective().constant;
    for (std::size_t j = 0; j < n_; ++j) obj += c_struct_[j] * sol.values[j];
    sol.objective = obj;
    sol.basis.columns.assign(status_.begin(), status_.begin() + static_cast<std::ptrdiff_t>(n_));
    sol.basis.rows.assign(status_.begin() + static_cast<std::ptrdiff_t>(n_),
                          status_.begin() + static_cast<std::ptrdiff_t>(n_ + m_));
    return sol;
}

LpSolution Simplex::run() {
    bool warm = opt_.warm_start && try_warm_start(*opt_.warm_start);
    if (!warm) {
        cold_start();
        if (!art_row_.empty()) {
            cost_.assign(total_columns(), 0.0);
            for (std::size_t a = 0; a < art_row_.size(); ++a) cost_[n_ + m_ + a] = 1.0;
            d_.assign(total_columns(), 0.0);
            compute_duals();
            const double saved_tol = opt_tol_;
            opt_tol_ = opt_.tolerances.optimality;
            iterate();
            opt_tol_ = saved_tol;
            double infeas = 0.0;
            for (std::size_t a = 0; a < art_row_.size(); ++a) infeas += x_[n_ + m_ + a];
            double bmax = 1.0;
            for (double v : b_) bmax = std::max(bmax, std::abs(v));
            if (infeas > opt_.tolerances.primal_feasibility * bmax) return extract(SolveStatus::kInfeasible);
            for (std::size_t a = 0; a < art_row_.size(); ++a) upper_[n_ + m_ + a] = 0.0;
        }
    }
    cost_.assign(total_columns(), 0.0);
    std::copy(c_struct_.begin(), c_struct_.end(), cost_.begin());
    d_.assign(total_columns(), 0.0);
    compute_duals();
    if (iterate() == PhaseResult::kUnbounded) return extract(SolveStatus::kUnbounded);
    if (max_primal_infeasibility() > 0.0)
        throw NumericalError("primal infeasibility persists after refactorisation");
    return extract(SolveStatus::kOptimal);
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolveOptions& options) {
    Simplex simplex(lp, options);
    return simplex.run();
}

std::string_view to_string(SolveStatus s) noexcept {
    switch (s) {
        case SolveStatus::kOptimal: return "optimal";
        case SolveStatus::kInfeasible: return "infeasible";
        case SolveStatus::kUnbounded: return "unbounded";
    }
    return "?";
}

}  // namespace vfmga::lp
