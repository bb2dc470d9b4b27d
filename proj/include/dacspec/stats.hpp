#pragma once

#include <vector>

namespace dacspec {

// Two-sided normal 95% quantile, used to scale fit standard errors.
inline constexpr double kZ95 = 1.959963984540054;

struct MeasurementStat {
    double mean = 0.0;
    double half_width_95 = 0.0;
    int n = 1;
};

/// Arithmetic mean with a Student-t confidence half-width,
/// t_{n-1,1-(1-level)/2} * s / sqrt(n). A single value carries no
/// dispersion estimate (half-width 0).
MeasurementStat mean_with_ci(const std::vector<double>& values, double level = 0.95);

// Student-t two-sided quantile helper (exposed for tests).
double student_t_quantile(int dof, double prob);

}  // namespace dacspec
