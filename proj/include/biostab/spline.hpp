#pragma once

#include <vector>

namespace biostab {

/// Cubic interpolating spline with not-a-knot end conditions.
/// Exact at nodes; reproduces linear data exactly.
class CubicSpline {
public:
    CubicSpline() = default;
    /// x strictly increasing, size >= 4.
    CubicSpline(std::vector<double> x, std::vector<double> y);

    /// Throws DomainError outside [x_front, x_back].
    double value(double x) const;
    double derivative(double x) const;

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    int interval(double x) const;

    std::vector<double> x_, y_, m_;  // m_ = second derivatives at nodes
};

}  // namespace biostab
