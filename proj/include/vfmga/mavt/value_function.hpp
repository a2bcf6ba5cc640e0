#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace vfmga::mavt {

enum class Shape { kLinear, kExponential, kPiecewise };

/// A point of an elicited value function in normalised coordinates:
/// z = 0 at the worst state, 1 at the best.
struct ValuePoint {
    double z = 0.0;
    double value = 0.0;
};

/// Single-attribute value function mapping a state to [0, 1], with
/// v(worst) = 0 and v(best) = 1. `best < worst` is allowed (lower is better).
/// States outside [worst, best] are clamped.
class ValueFunction {
public:
    ValueFunction() = default;

    [[nodiscard]] static ValueFunction linear(double worst, double best);
    /// v(z) = (1 - e^{-cz}) / (1 - e^{-c}); c > 0 is concave, c = 0 linear.
    [[nodiscard]] static ValueFunction exponential(double worst, double best, double c);
    /// Linear interpolation through (0,0), the points, and (1,1). Points must
    /// be strictly increasing in z and value, inside the open unit square.
    [[nodiscard]] static ValueFunction piecewise(double worst, double best, std::vector<ValuePoint> points);

    [[nodiscard]] double operator()(double state) const noexcept { return at(normalise(state)); }
    /// Value at normalised position z in [0, 1].
    [[nodiscard]] double at(double z) const noexcept;
    /// (state - worst) / (best - worst) clamped to [0, 1]. A degenerate range
    /// (worst == best) maps every state to 1: nothing distinguishes alternatives.
    [[nodiscard]] double normalise(double state) const noexcept;

    [[nodiscard]] Shape shape() const noexcept { return shape_; }
    [[nodiscard]] double worst() const noexcept { return worst_; }
    [[nodiscard]] double best() const noexcept { return best_; }
    [[nodiscard]] double curvature() const noexcept { return c_; }
    [[nodiscard]] const std::vector<ValuePoint>& points() const noexcept { return points_; }

private:
    Shape shape_ = Shape::kLinear;
    double worst_ = 0.0;
    double best_ = 1.0;
    double c_ = 0.0;
    std::vector<ValuePoint> points_;
};

/// The exponential SAVF shape; numerically stable near c = 0.
[[nodiscard]] double exponential_value(double z, double c) noexcept;

/// Curvature through the points. One point is solved exactly; several are
/// fitted by least squares. No points gives 0. Throws ValidationError when
/// the points are outside the open unit square or not strictly increasing.
[[nodiscard]] double fit_curvature(std::span<const ValuePoint> points);

/// An elicited state (in attribute units) and the value the stakeholder assigned to it.
struct Midpoint {
    double state = 0.0;
    double value = 0.0;
};

/// Exponential SAVF through the elicited midpoints; linear without any.
[[nodiscard]] ValueFunction fit_savf(double worst, double best, std::span<const Midpoint> midpoints);

[[nodiscard]] std::string_view to_string(Shape s) noexcept;
[[nodiscard]] Shape parse_shape(std::string_view name);

}  // namespace vfmga::mavt
