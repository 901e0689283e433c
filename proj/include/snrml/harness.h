#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace snrml {

// Window geometry recommended for a normalized Doppler value. Boundaries
// belong to the slower row (larger windows).
struct Table1Row {
    int row_index = 0;       // 1-based
    double fdts_max = 0.0;   // upper edge of the row's Doppler range
    int nbar_da = 0;
    int nbar_nda = 0;
    int order_da = 0;
    int order_nda = 0;
};

const std::vector<Table1Row>& doppler_window_table();
Table1Row table1_config(double fdts);

// mean (truth - estimate)^2 / gamma^2
double nmse(const std::vector<double>& estimates, const std::vector<double>& truths,
            double gamma_linear);

struct ExperimentConfig {
    std::string modulation = "qam:16";
    int n = 112;
    int n_p = 1;
    int n_r = 2;
    double fdts = 7e-3;
    std::string channel = "jakes";  // jakes | polynomial | constant
    int oscillator_count = 64;
    int poly_window = 0;  // polynomial channel; 0 follows the DA fitting window
    int poly_order = 0;
    int nbar_da = 0;      // 0 resolves from the Doppler window table
    int nbar_nda = 0;
    int order_da = 0;
    int order_nda = 0;
    std::vector<double> gamma_db = {0, 5, 10, 15, 20, 25, 30};
    int trials = 5000;
    std::vector<std::string> estimators = {"completely-DA"};
    std::uint64_t seed = 1;
    int report_antenna = 1;  // 1-based
    int em_max_iterations = 10;
    double em_tolerance = 1e-6;
    bool em_unweighted_gram = false;
    bool em_fresh_noise = false;
    bool keep_samples = false;
};

// Estimator names accepted in ExperimentConfig::estimators.
const std::vector<std::string>& known_estimators();

// Fills table-derived fields, applies polynomial-channel defaults and
// validates everything; throws ConfigError on bad content.
ExperimentConfig resolve_config(const ExperimentConfig& cfg);

struct SweepPoint {
    double gamma_db = 0.0;
    std::string estimator;
    double nmse = 0.0;
    double stderr_ = 0.0;  // standard error of the normalized squared error mean
    double ncrlb = 0.0;
    int trials = 0;  // attempted
    int errors = 0;  // trials that raised a library error
    bool failed = false;  // errors exceeded 1% of trials
    int monotonicity_violations = 0;  // soft-decision likelihood drops, summed over windows

    // Populated when keep_samples is set.
    std::vector<double> sample_estimates;
    std::vector<double> sample_truths;
    std::vector<double> sample_sq_err;   // normalized per-trial squared error
    std::vector<int> sample_iterations;  // per-window iteration counts (EM estimators)
};

struct NmseCurve {
    ExperimentConfig config;  // resolved
    std::vector<SweepPoint> points;
    std::vector<std::string> notes;
};

// Monte-Carlo sweep over the gamma grid. One channel/symbol/noise draw per
// (point, trial) is shared by every estimator in the set, so estimator
// comparisons are paired. Reruns with the same config are bit-identical.
NmseCurve run_sweep(const ExperimentConfig& cfg);

std::string curve_to_csv(const NmseCurve& curve);

// Single-trial deep dive: parameters, truths, estimates and per-window
// iteration diagnostics for one estimator at one SNR point.
struct TraceResult {
    ExperimentConfig config;  // resolved
    double gamma_db = 0.0;
    std::string estimator;
    double sigma2_true = 0.0;
    double sigma2_hat = 0.0;
    std::vector<double> rho_true;  // per antenna
    std::vector<double> rho_hat;   // per antenna
    std::vector<int> true_symbol_indices;
    std::vector<std::complex<double>> h_true;  // n_r x n
    std::vector<std::complex<double>> h_hat;   // n_r x n
    // EM-only diagnostics, empty for the known-symbol estimators.
    std::vector<std::vector<double>> llf_traces;
    std::vector<std::vector<double>> sigma2_traces;
    std::vector<int> iterations;
    std::vector<std::complex<double>> soft_symbols;
    std::vector<int> hard_symbols;
};

TraceResult run_trace(const ExperimentConfig& cfg, double gamma_db, const std::string& estimator);

}  // namespace snrml
