#pragma once

#include <complex>
#include <vector>

#include "snrml/basis.h"
#include "snrml/channel.h"
#include "snrml/constellation.h"

namespace snrml {

// Degrees-of-freedom bookkeeping convention for the reference distribution
// of the known-symbol estimator. The residual and signal quadratic forms can
// be counted per complex sample (one dimension per complex observation) or
// per real component (two dimensions per complex observation).
//
// complex_dimensions counts each complex observation once and yields the
// halved-count closed forms; real_dimensions counts both real components,
// which is what matches Monte-Carlo at 1e5 trials (see the distribution
// tests) and what the estimator paths use internally for bias removal. Both
// are exposed so the discrepancy stays measurable instead of hidden.
enum class DofConvention { complex_dimensions, real_dimensions };

struct DaMoments {
    double mean = 0.0;
    double variance = 0.0;
    double bias = 0.0;               // mean - rho
    double unbiased_variance = 0.0;  // variance of the bias-corrected estimate
};

// Moments of the known-symbol estimate as a function of the true SNR rho,
// frame length n, antenna count n_r and fitting ratio eps = L / nbar.
// Requires n_r * n * (1 - eps) > 4.
DaMoments analytic_moments(double rho, int n, int n_r, double eps,
                           DofConvention conv = DofConvention::complex_dimensions);

// Bias-corrected estimate: scales by (n_r n (1 - eps) - 1)/(n_r n) and
// subtracts eps/2 (complex count) or eps (real count). No clamping.
double unbias(double rho_hat, int n, int n_r, double eps,
              DofConvention conv = DofConvention::complex_dimensions);

// Scaled noncentral-F description of the known-symbol estimate:
// estimate = scale * F(nu1, nu2, lambda).
struct NoncentralFParams {
    double nu1 = 0.0;
    double nu2 = 0.0;
    double lambda = 0.0;
    double scale = 0.0;
};

// nbar here is the fitted samples per window; requires the implied nu2 to
// exceed 4 so second moments exist.
NoncentralFParams f_params(int n, int nbar, int order, int n_r, double rho,
                           DofConvention conv = DofConvention::complex_dimensions);

// One per-window polynomial fit against known symbols.
struct DaWindowEstimate {
    int window_index = 0;
    int fitted_samples = 0;                     // rows entering the fit
    std::vector<std::complex<double>> coeff;    // n_r x order, row-major
    double resid_energy = 0.0;                  // sum_i ||y_i - fit_i||^2
    double sigma2 = 0.0;                        // resid / (2 * fitted * n_r)
};

// positions: global sample indices of the fitted rows (sorted);
// symbols_at: the known symbols at those positions; basis rows must match.
DaWindowEstimate fit_window(const SimoObservation& obs, const std::vector<int>& positions,
                            const std::vector<std::complex<double>>& symbols_at,
                            const TimeMatrix& basis, int window_index = 0);

struct DaSnrEstimate {
    std::vector<double> rho;                    // per antenna, uncorrected
    std::vector<double> rho_unbiased;           // bias-corrected (real-component count)
    double sigma2 = 0.0;                        // pooled noise estimate
    double epsilon = 0.0;                       // order / fitted samples per window
    int n = 0;
    int n_r = 0;
    std::vector<std::complex<double>> channel;  // n_r x n, gains rebuilt from the fits
    std::vector<DaWindowEstimate> windows;
};

// Known-symbol SNR estimation over a whole frame. With n_p > 1 only pilot
// positions are fitted and the symbol vector is read at those positions.
// Throws DegenerateNoiseEstimate when the pooled noise estimate collapses.
DaSnrEstimate estimate_da(const SimoObservation& obs, const PilotLayout& layout,
                          const std::vector<std::complex<double>>& symbols, int nbar, int order);

}  // namespace snrml
