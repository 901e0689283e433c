#pragma once

#include <complex>
#include <vector>

#include "snrml/basis.h"
#include "snrml/channel.h"
#include "snrml/constellation.h"
#include "snrml/da.h"

namespace snrml {

// How symbol decisions feed back into the iteration:
//   sd   soft posterior means throughout.
//   ihd  hard decisions on the soft symbols replace them inside the
//        coefficient update, every iteration.
//   fhd  iterations run exactly like sd; hard decisions are taken once at
//        convergence and only affect the final SNR numerator.
enum class DetectionMode { sd, ihd, fhd };

struct EmConfig {
    int nbar = 0;            // window length
    int order = 1;           // polynomial coefficients per window
    int max_iterations = 10;
    double tolerance = 1e-6; // relative change of the noise estimate
    DetectionMode mode = DetectionMode::sd;

    // Drop the posterior symbol-energy weights from the coefficient-update
    // normal equations. Exact only for unit-modulus alphabets; kept as a
    // switch because it is the cheaper classical form.
    bool unweighted_gram = false;

    // Evaluate the noise recursion at the just-updated coefficients instead
    // of the previous ones.
    bool fresh_noise_recursion = false;

    // Optional per-position symbol pinning: empty, or one entry per frame
    // position, -1 for unknown or a constellation index to clamp the
    // posterior one-hot. With every position pinned the iteration reproduces
    // the known-symbol fit.
    std::vector<int> known_symbols;
};

struct EmWindowResult {
    int window_index = 0;
    std::vector<std::complex<double>> coeff;  // n_r x order, row-major
    double sigma2 = 0.0;
    int iterations = 0;
    bool converged = false;

    // The soft-decision iteration must not decrease the observed
    // log-likelihood; a drop beyond 1e-8 is recorded here. Hard-decision
    // feedback has no such guarantee.
    bool non_monotone = false;
    double worst_decrease = 0.0;
    std::vector<double> llf_trace;     // observed log-likelihood per pass
    std::vector<double> sigma2_trace;  // noise estimate after each update

    // Final posterior state (refreshed at the converged parameters).
    std::vector<double> posteriors;               // M x nbar, row-major
    std::vector<std::complex<double>> soft_symbols;  // posterior means
    std::vector<int> hard_symbols;                // nearest point per soft symbol
    std::vector<double> symbol_energy;            // posterior mean |a|^2 per position
};

struct EmInitState {
    std::vector<std::vector<std::complex<double>>> coeff;  // per window, n_r x order
    double sigma2 = 0.0;
};

// Pilot fits expanded to the full frame and refitted per unknown-symbol
// window; the initial noise estimate is the pooled pilot one.
EmInitState init_hybrid(const SimoObservation& obs, const PilotLayout& layout,
                        const std::vector<std::complex<double>>& symbols, int nbar_da, int order_da,
                        int nbar_nda, int order_nda);

// Blind start: every coefficient 1 + 0j, noise at half the sample second
// moment.
EmInitState init_arbitrary(const SimoObservation& obs, int nbar_nda, int order_nda);

EmWindowResult em_window(const SimoObservation& obs, int window_start, const TimeMatrix& basis,
                         const Constellation& cons, const EmConfig& cfg,
                         const std::vector<std::complex<double>>& coeff0, double sigma2_0);

// Observed (marginalized over symbols) log-likelihood of one window at the
// given parameters. Positions pinned through cfg.known_symbols contribute
// their conditional term instead of the symbol average.
double observed_llf(const SimoObservation& obs, int window_start, const TimeMatrix& basis,
                    const Constellation& cons, const EmConfig& cfg,
                    const std::vector<std::complex<double>>& coeff, double sigma2);

struct NdaSnrEstimate {
    std::vector<double> rho;           // per antenna, uncorrected
    std::vector<double> rho_unbiased;  // bias-corrected (real-component count)
    double sigma2 = 0.0;               // pooled over windows
    double epsilon = 0.0;              // order / nbar
    int n = 0;
    int n_r = 0;
    bool non_monotone = false;         // any window flagged
    std::vector<std::complex<double>> channel;  // n_r x n from the final coefficients
    std::vector<EmWindowResult> windows;
};

NdaSnrEstimate run_em(const SimoObservation& obs, const Constellation& cons, const EmConfig& cfg,
                      const EmInitState& init);

}  // namespace snrml
