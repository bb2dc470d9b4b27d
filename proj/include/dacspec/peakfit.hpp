#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dacspec/lorentzian.hpp"
#include "dacspec/spectrum.hpp"
#include "dacspec/stats.hpp"

namespace dacspec::peakfit {

struct FitOptions {
    int max_iterations = 200;
    double cost_rel_tol = 1e-10;   // relative cost decrease
    double grad_tol = 1e-8;        // gradient max-norm
    double lambda_init = 1e-3;     // LM damping schedule
    double lambda_accept = 0.3;
    double lambda_reject = 2.0;
};

struct InitialGuess {
    std::vector<LorentzianParams> peaks;
    double baseline = 0.0;
};

/// Least-squares fit output. Free parameters are ordered
/// [baseline, center_1, fwhm_1, amplitude_1, center_2, ...] with peaks
/// sorted by center; covariance is row-major over that ordering.
struct FitResult {
    std::vector<LorentzianParams> peaks;
    double baseline = 0.0;
    std::vector<double> covariance;  // k*k, k = 1 + 3*n_peaks
    double residual_rms = 0.0;
    int n_iterations = 0;
    bool converged = false;
    double rss = 0.0;
    size_t n_points = 0;

    size_t n_free_params() const { return 1 + 3 * peaks.size(); }
    double cov(size_t i, size_t j) const { return covariance[i * n_free_params() + j]; }
    double center_sigma(size_t peak) const;
};

// Baseline from the 5th intensity percentile, centers from (residual)
// maxima, widths from half-max crossings. Throws Error(no_peak) when the
// trace is flat (max - baseline below 3x the intensity MAD).
InitialGuess initial_guess(const Spectrum& s, int n_peaks);

// Damped Gauss-Newton / Levenberg-Marquardt with analytic Jacobians;
// fwhm and amplitude iterate in log space so positivity needs no
// constraints. An iteration cap returns converged = false rather than
// throwing; a singular normal matrix at a converged solution throws.
FitResult fit_peaks(const Spectrum& s, int n_peaks,
                    const std::optional<InitialGuess>& init = std::nullopt,
                    const FitOptions& opts = {});

// Fits one and two peaks and keeps the doublet only when
// BIC(2) < BIC(1) - 10; ties and failed two-peak fits fall back to one.
FitResult select_model(const Spectrum& s, const FitOptions& opts = {});

// PL center energy: single peak -> its center; doublet -> unweighted mean
// of the two centers with the uncertainty propagated from the covariance.
MeasurementStat center_energy(const FitResult& f);

double bic(const FitResult& f);

// Key-value fit document (17-significant-digit round trip); covariance is
// appended as k rows of k values.
void write_fit_result(const std::string& path, const FitResult& f);
FitResult read_fit_result(const std::string& path);

}  // namespace dacspec::peakfit
