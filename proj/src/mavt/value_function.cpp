#include "vfmga/mavt/value_function.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "vfmga/error.hpp"

namespace vfmga::mavt {

namespace {

constexpr double kMaxCurvature = 700.0;  // e^700 is still finite

std::vector<ValuePoint> checked(std::vector<ValuePoint> points) {
    std::sort(points.begin(), points.end(), [](const ValuePoint& a, const ValuePoint& b) { return a.z < b.z; });
    for (std::size_t i = 0; i < points.size(); ++i) {
        const ValuePoint& p = points[i];
        if (!(p.z > 0.0 && p.z < 1.0))
            throw ValidationError(fmt::format("elicited state must lie strictly between worst and best (z = {})", p.z));
        if (!(p.value > 0.0 && p.value < 1.0))
            throw ValidationError(fmt::format("elicited value must lie in (0, 1), got {}", p.value));
        if (i > 0 && !(p.z > points[i - 1].z && p.value > points[i - 1].value))
            throw ValidationError("elicited points are not monotone");
    }
    return points;
}

}  // namespace

double exponential_value(double z, double c) noexcept {
    if (std::abs(c) < 1e-8) return z + 0.5 * c * z * (1.0 - z);
    return std::expm1(-c * z) / std::expm1(-c);
}

ValueFunction ValueFunction::linear(double worst, double best) { return exponential(worst, best, 0.0); }

ValueFunction ValueFunction::exponential(double worst, double best, double c) {
    if (!std::isfinite(worst) || !std::isfinite(best) || !std::isfinite(c))
        throw ValidationError("value function parameters must be finite");
    ValueFunction f;
    f.shape_ = c == 0.0 ? Shape::kLinear : Shape::kExponential;
    f.worst_ = worst;
    f.best_ = best;
    f.c_ = c;
    return f;
}

ValueFunction ValueFunction::piecewise(double worst, double best, std::vector<ValuePoint> points) {
    ValueFunction f = linear(worst, best);
    f.points_ = checked(std::move(points));
    f.shape_ = Shape::kPiecewise;
    return f;
}

double ValueFunction::normalise(double state) const noexcept {
    if (worst_ == best_) return 1.0;
    return std::clamp((state - worst_) / (best_ - worst_), 0.0, 1.0);
}

double ValueFunction::at(double z) const noexcept {
    z = std::clamp(z, 0.0, 1.0);
    if (z == 0.0) return 0.0;
    if (z == 1.0) return 1.0;
    if (shape_ != Shape::kPiecewise) return exponential_value(z, c_);
    double z0 = 0.0, v0 = 0.0;
    for (const ValuePoint& p : points_) {
        if (z <= p.z) return v0 + (p.value - v0) * (z - z0) / (p.z - z0);
        z0 = p.z;
        v0 = p.value;
    }
    return v0 + (1.0 - v0) * (z - z0) / (1.0 - z0);
}

double fit_curvature(std::span<const ValuePoint> input) {
    const std::vector<ValuePoint> points = checked({input.begin(), input.end()});
    if (points.empty()) return 0.0;

    if (points.size() == 1) {
        const ValuePoint p = points.front();
        auto residual = [&](double c) { return exponential_value(p.z, c) - p.value; };
        if (residual(0.0) == 0.0) return 0.0;
        // v(z; c) increases with c, and v(z; 0) = z.
        const double lo = residual(0.0) < 0.0 ? 0.0 : -kMaxCurvature;
        const double hi = residual(0.0) < 0.0 ? kMaxCurvature : 0.0;
        if (residual(lo) * residual(hi) > 0.0)
            throw ValidationError(fmt::format("no exponential value function passes through ({}, {})", p.z, p.value));
        std::uintmax_t iterations = 200;
        auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi,
                                                        boost::math::tools::eps_tolerance<double>(52), iterations);
        return 0.5 * (a + b);
    }

    auto sse = [&](double c) {
        double s = 0.0;
        for (const ValuePoint& p : points) s += std::pow(exponential_value(p.z, c) - p.value, 2);
        return s;
    };
    // Coarse scan, then Brent around the best grid point.
    constexpr double kRange = 100.0, kStep = 0.05;
    double best_c = 0.0, best = sse(0.0);
    for (double c = -kRange; c <= kRange; c += kStep) {
        const double s = sse(c);
        if (s < best) best = s, best_c = c;
    }
    auto [c, value] = boost::math::tools::brent_find_minima(sse, best_c - kStep, best_c + kStep, 52);
    return value <= best ? c : best_c;
}

ValueFunction fit_savf(double worst, double best, std::span<const Midpoint> midpoints) {
    if (midpoints.empty()) return ValueFunction::linear(worst, best);
    if (worst == best) throw ValidationError("cannot fit a value function over an empty range");
    std::vector<ValuePoint> points;
    for (const Midpoint& m : midpoints) points.push_back({(m.state - worst) / (best - worst), m.value});
    return ValueFunction::exponential(worst, best, fit_curvature(points));
}

std::string_view to_string(Shape s) noexcept {
    switch (s) {
        case Shape::kLinear: return "linear";
        case Shape::kExponential: return "exponential";
        case Shape::kPiecewise: return "piecewise";
    }
    return "?";
}

Shape parse_shape(std::string_view name) {
    if (name == "linear") return Shape::kLinear;
    if (name == "exponential") return Shape::kExponential;
    if (name == "piecewise") return Shape::kPiecewise;
    throw ValidationError("unknown value function shape '" + std::string(name) + "'");
}

}  // namespace vfmga::mavt
