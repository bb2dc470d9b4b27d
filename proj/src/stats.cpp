#include "dacspec/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "dacspec/error.hpp"

namespace dacspec {

double student_t_quantile(int dof, double prob) {
    if (dof < 1) throw Error(errc::invalid_argument, "t quantile needs dof >= 1");
    boost::math::students_t dist(static_cast<double>(dof));
    return boost::math::quantile(dist, prob);
}

MeasurementStat mean_with_ci(const std::vector<double>& values, double level) {
    if (values.empty()) throw Error(errc::invalid_argument, "mean_with_ci: empty input");
    if (!(level > 0.0 && level < 1.0))
        throw Error(errc::invalid_argument, "confidence level must be in (0,1)");

    double sum = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) throw Error(errc::invalid_argument, "non-finite value");
        sum += v;
    }
    const int n = static_cast<int>(values.size());
    MeasurementStat stat;
    stat.n = n;
    stat.mean = sum / n;
    if (n == 1) return stat;  // no dispersion estimate from a single value

    double ss = 0.0;
    for (double v : values) ss += (v - stat.mean) * (v - stat.mean);
    const double s = std::sqrt(ss / (n - 1));
    const double t = student_t_quantile(n - 1, 1.0 - (1.0 - level) / 2.0);
    stat.half_width_95 = t * s / std::sqrt(static_cast<double>(n));
    return stat;
}

}  // namespace dacspec
