#include "dacspec/peakfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dacspec/error.hpp"
#include "dacspec/kvdoc.hpp"

namespace dacspec::peakfit {

namespace {

// --- tiny dense symmetric solver (k <= 7) ---------------------------------

// In-place Cholesky of a row-major symmetric matrix; false if not SPD.
bool cholesky(std::vector<double>& a, size_t k) {
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j <= i; ++j) {
            double sum = a[i * k + j];
            for (size_t m = 0; m < j; ++m) sum -= a[i * k + m] * a[j * k + m];
            if (i == j) {
                if (!(sum > 0.0)) return false;
                a[i * k + i] = std::sqrt(sum);
            } else {
                a[i * k + j] = sum / a[j * k + j];
            }
        }
    }
    return true;
}

void chol_solve(const std::vector<double>& l, size_t k, std::vector<double>& b) {
    for (size_t i = 0; i < k; ++i) {
        double sum = b[i];
        for (size_t j = 0; j < i; ++j) sum -= l[i * k + j] * b[j];
        b[i] = sum / l[i * k + i];
    }
    for (size_t ii = k; ii-- > 0;) {
        double sum = b[ii];
        for (size_t j = ii + 1; j < k; ++j) sum -= l[j * k + ii] * b[j];
        b[ii] = sum / l[ii * k + ii];
    }
}

// Inverse from the Cholesky factor, row-major symmetric output.
bool sym_inverse(std::vector<double> a, size_t k, std::vector<double>& inv) {
    if (!cholesky(a, k)) return false;
    inv.assign(k * k, 0.0);
    std::vector<double> e(k);
    for (size_t c = 0; c < k; ++c) {
        std::fill(e.begin(), e.end(), 0.0);
        e[c] = 1.0;
        chol_solve(a, k, e);
        for (size_t r = 0; r < k; ++r) inv[r * k + c] = e[r];
    }
    // symmetrize against round-off
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < i; ++j) {
            const double v = 0.5 * (inv[i * k + j] + inv[j * k + i]);
            inv[i * k + j] = inv[j * k + i] = v;
        }
    return true;
}

// --- internal parameter vector [b, c, logG, logA, ...] --------------------

struct Model {
    std::vector<LorentzianParams> peaks;
    double baseline = 0.0;

    static Model from_theta(const std::vector<double>& th) {
        Model m;
        m.baseline = th[0];
        const size_t n = (th.size() - 1) / 3;
        m.peaks.resize(n);
        for (size_t k = 0; k < n; ++k) {
            m.peaks[k].center = th[1 + 3 * k];
            m.peaks[k].fwhm = std::exp(th[1 + 3 * k + 1]);
            m.peaks[k].amplitude = std::exp(th[1 + 3 * k + 2]);
        }
        return m;
    }

    std::vector<double> to_theta() const {
        std::vector<double> th(1 + 3 * peaks.size());
        th[0] = baseline;
        for (size_t k = 0; k < peaks.size(); ++k) {
            th[1 + 3 * k] = peaks[k].center;
            th[1 + 3 * k + 1] = std::log(peaks[k].fwhm);
            th[1 + 3 * k + 2] = std::log(peaks[k].amplitude);
        }
        return th;
    }
};

double cost_of(const Model& m, const Spectrum& s) {
    double c = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
        const double r = multi_lorentzian(m.peaks, m.baseline, s.axis[i]) - s.intensity[i];
        c += r * r;
    }
    return c;
}

// J^T J and J^T r in the internal (log-width/log-amplitude) coordinates.
void normal_equations(const Model& m, const Spectrum& s, std::vector<double>& jtj,
                      std::vector<double>& jtr) {
    const size_t k = 1 + 3 * m.peaks.size();
    jtj.assign(k * k, 0.0);
    jtr.assign(k, 0.0);
    std::vector<double> row(k);
    for (size_t i = 0; i < s.size(); ++i) {
        const double x = s.axis[i];
        row[0] = 1.0;
        double y = m.baseline;
        for (size_t p = 0; p < m.peaks.size(); ++p) {
            const auto& pk = m.peaks[p];
            const double w = 0.5 * pk.fwhm;
            const double d = x - pk.center;
            const double den = d * d + w * w;
            const double L = w * w / den;
            y += pk.amplitude * L;
            row[1 + 3 * p] = pk.amplitude * 2.0 * d * w * w / (den * den);
            // d/d logG = G * d/dG; d/d logA = A * d/dA
            row[1 + 3 * p + 1] = pk.amplitude * pk.fwhm * w * d * d / (den * den);
            row[1 + 3 * p + 2] = pk.amplitude * L;
        }
        const double r = y - s.intensity[i];
        for (size_t a = 0; a < k; ++a) {
            jtr[a] += row[a] * r;
            for (size_t b = 0; b <= a; ++b) jtj[a * k + b] += row[a] * row[b];
        }
    }
    for (size_t a = 0; a < k; ++a)
        for (size_t b = a + 1; b < k; ++b) jtj[a * k + b] = jtj[b * k + a];
}

double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return (n % 2) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Half-max crossing distances on each side of the crest at imax; NaN when
// a side never crosses.
std::pair<double, double> half_widths(const Spectrum& s, size_t imax, double baseline,
                                      double amp) {
    const double half = baseline + 0.5 * amp;
    const double c = s.axis[imax];
    double left = std::numeric_limits<double>::quiet_NaN();
    for (size_t i = imax; i-- > 0;) {
        if (s.intensity[i] < half) {
            const double t = (half - s.intensity[i]) / (s.intensity[i + 1] - s.intensity[i]);
            left = c - (s.axis[i] + t * (s.axis[i + 1] - s.axis[i]));
            break;
        }
    }
    double right = std::numeric_limits<double>::quiet_NaN();
    for (size_t i = imax + 1; i < s.size(); ++i) {
        if (s.intensity[i] < half) {
            const double t = (s.intensity[i - 1] - half) / (s.intensity[i - 1] - s.intensity[i]);
            right = (s.axis[i - 1] + t * (s.axis[i] - s.axis[i - 1])) - c;
            break;
        }
    }
    return {left, right};
}

// Envelope FWHM (sum of both flanks); initializes single-line fits.
double width_from_half_max(const Spectrum& s, size_t imax, double baseline, double amp) {
    const auto [left, right] = half_widths(s, imax, baseline, amp);
    const double span = s.axis.back() - s.axis.front();
    double w;
    if (!std::isnan(left) && !std::isnan(right)) w = left + right;
    else if (!std::isnan(left)) w = 2.0 * left;
    else if (!std::isnan(right)) w = 2.0 * right;
    else w = span / 6.0;
    const double step = span / static_cast<double>(s.size() - 1);
    return std::max(w, step);  // never narrower than one grid step
}

// Core FWHM from the narrower flank: a blended doublet inflates the
// envelope width, but its outer flank still tracks one component.
double core_width(const Spectrum& s, size_t imax, double baseline, double amp) {
    const auto [left, right] = half_widths(s, imax, baseline, amp);
    const double span = s.axis.back() - s.axis.front();
    const double step = span / static_cast<double>(s.size() - 1);
    if (!std::isnan(left) && !std::isnan(right))
        return std::max(2.0 * std::min(left, right), step);
    return width_from_half_max(s, imax, baseline, amp);
}

}  // namespace

double FitResult::center_sigma(size_t peak) const {
    const size_t idx = 1 + 3 * peak;
    return std::sqrt(std::max(0.0, cov(idx, idx)));
}

InitialGuess initial_guess(const Spectrum& s, int n_peaks) {
    validate(s);
    if (n_peaks != 1 && n_peaks != 2)
        throw Error(errc::invalid_argument, "n_peaks must be 1 or 2");

    const double baseline = percentile(s.intensity, 0.05);

    const auto imax_it = std::max_element(s.intensity.begin(), s.intensity.end());
    const size_t imax = static_cast<size_t>(imax_it - s.intensity.begin());
    const double amp = *imax_it - baseline;

    const double med = median_of(s.intensity);
    std::vector<double> dev(s.intensity.size());
    for (size_t i = 0; i < dev.size(); ++i) dev[i] = std::fabs(s.intensity[i] - med);
    const double mad = median_of(dev);
    if (amp <= 3.0 * mad)
        throw Error(errc::no_peak, "no peak rises above the intensity floor");

    InitialGuess g;
    g.baseline = baseline;
    LorentzianParams first;
    first.center = s.axis[imax];
    first.amplitude = amp;
    first.fwhm = (n_peaks == 1) ? width_from_half_max(s, imax, baseline, amp)
                                : core_width(s, imax, baseline, amp);
    g.peaks.push_back(first);
    if (n_peaks == 1) return g;

    // second component: largest residual maximum at least one fwhm away
    double best_r = -std::numeric_limits<double>::infinity();
    size_t best_i = imax;
    bool found = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (std::fabs(s.axis[i] - first.center) < first.fwhm) continue;
        const double r = s.intensity[i] - lorentzian_eval(first, g.baseline, s.axis[i]);
        if (r > best_r) {
            best_r = r;
            best_i = i;
            found = true;
        }
    }
    LorentzianParams second = first;
    if (found && best_r > 0.0) {
        second.center = s.axis[best_i];
        second.amplitude = std::max(best_r, 0.05 * amp);
    } else {
        // fall back to a shoulder next to the main line
        const double c2 = first.center + first.fwhm;
        second.center = (c2 <= s.axis.back()) ? c2 : first.center - first.fwhm;
        second.amplitude = 0.1 * amp;
    }
    g.peaks.push_back(second);
    return g;
}

FitResult fit_peaks(const Spectrum& s, int n_peaks, const std::optional<InitialGuess>& init,
                    const FitOptions& opts) {
    validate(s);
    if (s.axis_unit != AxisUnit::electronvolt)
        throw Error(errc::invalid_argument, "fits require an energy (eV) axis");
    if (n_peaks != 1 && n_peaks != 2)
        throw Error(errc::invalid_argument, "n_peaks must be 1 or 2");

    InitialGuess g = init ? *init : initial_guess(s, n_peaks);
    if (static_cast<int>(g.peaks.size()) != n_peaks)
        throw Error(errc::invalid_argument, "initial guess has wrong peak count");
    for (const auto& p : g.peaks) validate(p);

    Model model{g.peaks, g.baseline};
    std::vector<double> theta = model.to_theta();
    const size_t k = theta.size();
    const size_t npts = s.size();
    if (npts <= k)
        throw Error(errc::too_few_points, "more free parameters than samples");

    double cost = cost_of(model, s);
    double lambda = opts.lambda_init;
    int streak = 0;
    int stall = 0;
    int iterations = 0;

    // residuals at the double-precision floor of the model evaluation count
    // as an exact fit; noiseless synthetic data land here
    const double scale = *std::max_element(s.intensity.begin(), s.intensity.end());
    const double cost_floor =
        static_cast<double>(npts) * std::pow(1e-12 * std::max(scale, 1e-300), 2);
    bool converged = (cost <= cost_floor);

    std::vector<double> jtj, jtr, damped, step;
    while (!converged && iterations < opts.max_iterations) {
        normal_equations(model, s, jtj, jtr);
        double grad_inf = 0.0;
        for (double v : jtr) grad_inf = std::max(grad_inf, std::fabs(v));

        // one damping escalation per solve attempt, each counted as an iteration
        bool accepted = false;
        while (!converged && iterations < opts.max_iterations && lambda < 1e15) {
            ++iterations;
            damped = jtj;
            for (size_t j = 0; j < k; ++j) {
                const double d = jtj[j * k + j];
                damped[j * k + j] = d + lambda * (d > 0.0 ? d : 1.0);
            }
            step = jtr;
            if (cholesky(damped, k)) {
                chol_solve(damped, k, step);
                std::vector<double> trial(k);
                for (size_t j = 0; j < k; ++j) trial[j] = theta[j] - step[j];
                const Model tm = Model::from_theta(trial);
                const double tc = cost_of(tm, s);
                if (std::isfinite(tc) && tc < cost) {
                    const double rel_dec = (cost - tc) / std::max(cost, 1e-300);
                    theta = trial;
                    model = tm;
                    cost = tc;
                    lambda = std::max(lambda * opts.lambda_accept, 1e-12);
                    streak = (rel_dec < opts.cost_rel_tol || grad_inf < opts.grad_tol)
                                 ? streak + 1
                                 : 0;
                    if (streak >= 2 || cost <= cost_floor) converged = true;
                    accepted = true;
                    stall = 0;
                    break;
                }
                if (std::isfinite(tc) &&
                    tc - cost <= opts.cost_rel_tol * std::max(cost, 1e-300)) {
                    // step can neither improve nor meaningfully worsen the
                    // cost: we are sitting on the attainable minimum
                    if (++stall >= 2) converged = true;
                }
            }
            lambda *= opts.lambda_reject;
        }
        if (!accepted && !converged) break;  // damping exhausted
    }
    if (cost <= cost_floor) converged = true;

    FitResult out;
    out.baseline = model.baseline;
    out.peaks = model.peaks;
    out.n_iterations = iterations;
    out.rss = cost;
    out.n_points = npts;
    out.residual_rms = std::sqrt(cost / static_cast<double>(npts));
    out.converged = converged;

    // fitted centers must stay inside the data range to count as a fit
    for (const auto& p : out.peaks)
        if (p.center < s.axis.front() || p.center > s.axis.back()) out.converged = false;

    std::sort(out.peaks.begin(), out.peaks.end(),
              [](const LorentzianParams& a, const LorentzianParams& b) {
                  return a.center < b.center;
              });

    // covariance = s^2 (J^T J)^-1 in natural parameters at the solution
    std::vector<double> jtj_nat(k * k, 0.0), row(k);
    for (size_t i = 0; i < npts; ++i) {
        model_gradient(out.peaks, out.baseline, s.axis[i], row);
        for (size_t a = 0; a < k; ++a)
            for (size_t b = 0; b <= a; ++b) jtj_nat[a * k + b] += row[a] * row[b];
    }
    for (size_t a = 0; a < k; ++a)
        for (size_t b = a + 1; b < k; ++b) jtj_nat[a * k + b] = jtj_nat[b * k + a];

    std::vector<double> inv;
    if (sym_inverse(jtj_nat, k, inv)) {
        const double resvar = cost / static_cast<double>(npts - k);
        out.covariance.assign(k * k, 0.0);
        for (size_t i = 0; i < k * k; ++i) out.covariance[i] = resvar * inv[i];
    } else if (out.converged) {
        throw Error(errc::singular, "normal matrix singular at the solution");
    } else {
        out.covariance.assign(k * k, 0.0);
    }
    return out;
}

double bic(const FitResult& f) {
    const double n = static_cast<double>(f.n_points);
    // floor the RSS at the double-precision noise of the model evaluation,
    // so noiseless synthetic data cannot produce -inf or machine-noise wins
    double scale = std::fabs(f.baseline);
    for (const auto& p : f.peaks) scale = std::max(scale, p.amplitude);
    const double floor = n * std::pow(1e-10 * std::max(scale, 1.0), 2);
    const double rss = std::max(f.rss, floor);
    return n * std::log(rss / n) + static_cast<double>(f.n_free_params()) * std::log(n);
}

FitResult select_model(const Spectrum& s, const FitOptions& opts) {
    FitResult one = fit_peaks(s, 1, std::nullopt, opts);
    FitResult two;
    bool have_two = false;
    try {
        two = fit_peaks(s, 2, std::nullopt, opts);
        have_two = two.converged;
    } catch (const Error&) {
        have_two = false;  // collapsed/singular doublet: keep the single line
    }
    if (have_two && bic(two) < bic(one) - 10.0) return two;
    return one;
}

MeasurementStat center_energy(const FitResult& f) {
    if (!f.converged)
        throw Error(errc::not_converged, "center_energy requires a converged fit");
    MeasurementStat stat;
    stat.n = static_cast<int>(f.peaks.size());
    if (f.peaks.size() == 1) {
        stat.mean = f.peaks[0].center;
        stat.half_width_95 = kZ95 * f.center_sigma(0);
        return stat;
    }
    stat.mean = 0.5 * (f.peaks[0].center + f.peaks[1].center);
    const double v11 = f.cov(1, 1);
    const double v22 = f.cov(4, 4);
    const double v12 = f.cov(1, 4);
    const double var = 0.25 * (v11 + v22 + 2.0 * v12);
    stat.half_width_95 = kZ95 * std::sqrt(std::max(0.0, var));
    return stat;
}

void write_fit_result(const std::string& path, const FitResult& f) {
    KeyValueDoc doc;
    doc.set("n_peaks", std::to_string(f.peaks.size()));
    for (size_t i = 0; i < f.peaks.size(); ++i) {
        const std::string suffix = "_" + std::to_string(i + 1);
        doc.set_number("center" + suffix, f.peaks[i].center);
        doc.set_number("fwhm" + suffix, f.peaks[i].fwhm);
        doc.set_number("amplitude" + suffix, f.peaks[i].amplitude);
    }
    doc.set_number("baseline", f.baseline);
    doc.set_number("residual_rms", f.residual_rms);
    doc.set_number("rss", f.rss);
    doc.set("n_points", std::to_string(f.n_points));
    doc.set("n_iterations", std::to_string(f.n_iterations));
    doc.set("converged", f.converged ? "true" : "false");
    const size_t k = f.n_free_params();
    if (f.covariance.size() == k * k) {
        for (size_t i = 0; i < k; ++i) {
            std::vector<double> row(f.covariance.begin() + i * k,
                                    f.covariance.begin() + (i + 1) * k);
            doc.rows.push_back(std::move(row));
        }
    }
    write_kvdoc(path, doc);
}

FitResult read_fit_result(const std::string& path) {
    const KeyValueDoc doc = read_kvdoc(path);
    FitResult f;
    const int n = static_cast<int>(doc.require_number("n_peaks"));
    if (n < 1 || n > 2) throw Error(errc::parse_error, path + ": n_peaks must be 1 or 2");
    for (int i = 1; i <= n; ++i) {
        const std::string suffix = "_" + std::to_string(i);
        LorentzianParams p;
        p.center = doc.require_number("center" + suffix);
        p.fwhm = doc.require_number("fwhm" + suffix);
        p.amplitude = doc.require_number("amplitude" + suffix);
        f.peaks.push_back(p);
    }
    f.baseline = doc.require_number("baseline");
    f.residual_rms = doc.require_number("residual_rms");
    f.rss = doc.get_number("rss").value_or(0.0);
    f.n_points = static_cast<size_t>(doc.get_number("n_points").value_or(0.0));
    f.n_iterations = static_cast<int>(doc.get_number("n_iterations").value_or(0.0));
    const std::string conv = doc.require("converged");
    f.converged = (conv == "true" || conv == "1");
    const size_t k = f.n_free_params();
    if (!doc.rows.empty()) {
        if (doc.rows.size() != k)
            throw Error(errc::parse_error, path + ": covariance row count mismatch");
        for (const auto& row : doc.rows) {
            if (row.size() != k)
                throw Error(errc::parse_error, path + ": covariance column count mismatch");
            f.covariance.insert(f.covariance.end(), row.begin(), row.end());
        }
    }
    return f;
}

}  // namespace dacspec::peakfit
