#pragma once

#include <vector>

namespace dacspec {

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson tangents).
/// Passes through every node exactly; monotone data yield a monotone curve.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double eval(double x) const;
    double derivative(double x) const;

    const std::vector<double>& nodes_x() const { return x_; }
    const std::vector<double>& nodes_y() const { return y_; }
    bool empty() const { return x_.empty(); }

private:
    size_t interval(double x) const;

    std::vector<double> x_, y_, m_;  // nodes and tangents
};

}  // namespace dacspec
