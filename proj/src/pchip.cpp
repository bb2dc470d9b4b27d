#include "dacspec/pchip.hpp"

#include <algorithm>
#include <cmath>

#include "dacspec/error.hpp"

namespace dacspec {

namespace {

// Endpoint tangent: non-centered three-point estimate, clamped so the
// first/last segment stays monotone (the matlab pchip rule).
double endpoint_tangent(double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0)
        m = 0.0;
    else if (d0 * d1 < 0.0 && std::fabs(m) > 3.0 * std::fabs(d0))
        m = 3.0 * d0;
    return m;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw Error(errc::invalid_argument, "interpolant needs >= 2 matching nodes");
    for (size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw Error(errc::invalid_argument, "interpolant nodes must be strictly increasing");

    std::vector<double> h(n - 1), d(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        d[i] = (y_[i + 1] - y_[i]) / h[i];
    }

    m_.assign(n, 0.0);
    if (n == 2) {
        m_[0] = m_[1] = d[0];
    } else {
        m_[0] = endpoint_tangent(h[0], h[1], d[0], d[1]);
        m_[n - 1] = endpoint_tangent(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
        for (size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                m_[i] = 0.0;
            } else {
                // weighted harmonic mean of the neighboring secants
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
    }
}

size_t MonotoneCubic::interval(double x) const {
    // index i with x in [x_i, x_{i+1}]; queries outside use the edge segment
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    size_t i = static_cast<size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double MonotoneCubic::eval(double x) const {
    if (empty()) throw Error(errc::invalid_argument, "empty interpolant");
    const size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
    if (empty()) throw Error(errc::invalid_argument, "empty interpolant");
    const size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double dh00 = (6.0 * t2 - 6.0 * t) / h;
    const double dh10 = 3.0 * t2 - 4.0 * t + 1.0;
    const double dh01 = (-6.0 * t2 + 6.0 * t) / h;
    const double dh11 = 3.0 * t2 - 2.0 * t;
    return dh00 * y_[i] + dh10 * m_[i] + dh01 * y_[i + 1] + dh11 * m_[i + 1];
}

}  // namespace dacspec
