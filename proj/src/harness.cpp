#include "snrml/harness.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "snrml/crlb.h"
#include "snrml/da.h"
#include "snrml/em.h"
#include "snrml/errors.h"
#include "snrml/format.h"
#include "snrml/rng.h"

namespace snrml {

namespace {

// Compensated accumulation keeps the sweep reproducible to the last bit and
// the summation error structurally below the Monte-Carlo noise.
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

struct EstimatorKind {
    bool data_aided = false;   // known-symbol fit over pilots or all samples
    bool all_pilots = false;   // treat every position as known
    bool hybrid_init = false;  // pilot-based initialization (EM only)
    DetectionMode mode = DetectionMode::sd;
};

EstimatorKind classify_estimator(const std::string& name) {
    EstimatorKind k;
    if (name == "completely-DA") {
        k.data_aided = true;
        k.all_pilots = true;
    } else if (name == "pilot-only-DA") {
        k.data_aided = true;
    } else if (name == "hybrid-SD" || name == "hybrid-IHD" || name == "hybrid-FHD" ||
               name == "completely-NDA-SD" || name == "completely-NDA-IHD" ||
               name == "completely-NDA-FHD") {
        k.hybrid_init = name.rfind("hybrid-", 0) == 0;
        if (name.ends_with("-IHD")) k.mode = DetectionMode::ihd;
        else if (name.ends_with("-FHD")) k.mode = DetectionMode::fhd;
        else k.mode = DetectionMode::sd;
    } else {
        throw ConfigError("unknown estimator '" + name + "'");
    }
    return k;
}

FadingConfig fading_from(const ExperimentConfig& cfg) {
    FadingConfig f;
    f.n = cfg.n;
    f.n_r = cfg.n_r;
    if (cfg.channel == "jakes") {
        f.model = FadingModel::jakes;
        f.fdts = cfg.fdts;
        f.oscillator_count = cfg.oscillator_count;
    } else if (cfg.channel == "polynomial") {
        f.model = FadingModel::polynomial;
        f.poly_window = cfg.poly_window;
        f.poly_order = cfg.poly_order;
    } else if (cfg.channel == "constant") {
        f.model = FadingModel::constant;
    } else {
        throw ConfigError("unknown channel model '" + cfg.channel + "'");
    }
    return f;
}

}  // namespace

const std::vector<Table1Row>& doppler_window_table() {
    static const std::vector<Table1Row> rows = {
        {1, 7e-3, 112, 56, 4, 4},
        {2, 2e-2, 28, 28, 4, 4},
        {3, 3.5e-2, 28, 14, 4, 4},
        {4, std::numeric_limits<double>::infinity(), 14, 7, 2, 4},
    };
    return rows;
}

Table1Row table1_config(double fdts) {
    if (!(fdts >= 0.0)) throw ConfigError("table1_config: fdts must be nonnegative");
    for (const auto& row : doppler_window_table())
        if (fdts <= row.fdts_max) return row;
    return doppler_window_table().back();
}

double nmse(const std::vector<double>& estimates, const std::vector<double>& truths,
            double gamma_linear) {
    if (estimates.size() != truths.size() || estimates.empty())
        throw DimensionMismatch("nmse: need matching nonempty sample vectors");
    if (!(gamma_linear > 0.0)) throw ZeroNoise("nmse: gamma must be positive");
    KahanSum acc;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        double d = truths[i] - estimates[i];
        acc.add(d * d);
    }
    return acc.value() / static_cast<double>(estimates.size()) / (gamma_linear * gamma_linear);
}

const std::vector<std::string>& known_estimators() {
    static const std::vector<std::string> names = {
        "pilot-only-DA",      "completely-DA",      "hybrid-SD",
        "hybrid-IHD",         "hybrid-FHD",         "completely-NDA-SD",
        "completely-NDA-IHD", "completely-NDA-FHD",
    };
    return names;
}

ExperimentConfig resolve_config(const ExperimentConfig& cfg) {
    ExperimentConfig r = cfg;
    if (r.nbar_da == 0 || r.nbar_nda == 0 || r.order_da == 0 || r.order_nda == 0) {
        auto row = table1_config(r.fdts);
        if (r.nbar_da == 0) r.nbar_da = row.nbar_da;
        if (r.nbar_nda == 0) r.nbar_nda = row.nbar_nda;
        if (r.order_da == 0) r.order_da = row.order_da;
        if (r.order_nda == 0) r.order_nda = row.order_nda;
    }
    if (r.channel == "polynomial") {
        if (r.poly_window == 0) r.poly_window = r.nbar_da;
        if (r.poly_order == 0) r.poly_order = r.order_da;
    }

    if (r.n <= 0) throw ConfigError("config: n must be positive");
    if (r.n_p <= 0 || r.n % r.n_p != 0) throw ConfigError("config: n_p must divide n");
    if (r.n_r <= 0) throw ConfigError("config: n_r must be positive");
    if (r.n % r.nbar_da != 0) throw ConfigError("config: nbar_da must divide n");
    if (r.n % r.nbar_nda != 0) throw ConfigError("config: nbar_nda must divide n");
    if (r.order_da < 1 || r.order_da > r.nbar_da) throw ConfigError("config: bad order_da");
    if (r.order_nda < 1 || r.order_nda > r.nbar_nda) throw ConfigError("config: bad order_nda");
    if (r.channel != "jakes" && r.channel != "polynomial" && r.channel != "constant")
        throw ConfigError("config: unknown channel '" + r.channel + "'");
    if (r.channel == "polynomial" && r.n % r.poly_window != 0)
        throw ConfigError("config: poly_window must divide n");
    if (!(r.fdts >= 0.0)) throw ConfigError("config: fdts must be nonnegative");
    if (r.gamma_db.empty()) throw ConfigError("config: gamma_db grid is empty");
    if (r.trials <= 0) throw ConfigError("config: trials must be positive");
    if (r.estimators.empty()) throw ConfigError("config: estimator set is empty");
    for (const auto& e : r.estimators) classify_estimator(e);
    if (r.report_antenna < 1 || r.report_antenna > r.n_r)
        throw ConfigError("config: report_antenna out of range");
    if (r.em_max_iterations < 1) throw ConfigError("config: em_max_iterations must be positive");
    if (!(r.em_tolerance > 0.0)) throw ConfigError("config: em_tolerance must be positive");
    try {
        build_constellation(r.modulation);
    } catch (const UnsupportedOrder& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return r;
}

namespace {

struct TrialEstimate {
    double rho = 0.0;
    int windows_non_monotone = 0;
    std::vector<int> window_iterations;
};

// One estimator applied to one realized frame. Returns the reported
// antenna's estimate plus EM diagnostics.
TrialEstimate apply_estimator(const ExperimentConfig& cfg, const EstimatorKind& kind,
                              const SimoObservation& obs,
                              const std::vector<std::complex<double>>& symbols, int antenna,
                              NdaSnrEstimate* nda_out, DaSnrEstimate* da_out) {
    TrialEstimate out;
    if (kind.data_aided) {
        auto layout = pilot_layout(cfg.n, kind.all_pilots ? 1 : cfg.n_p);
        auto est = estimate_da(obs, layout, symbols, cfg.nbar_da, cfg.order_da);
        out.rho = kind.all_pilots ? est.rho_unbiased[antenna] : est.rho[antenna];
        if (da_out != nullptr) *da_out = std::move(est);
        return out;
    }

    EmConfig em;
    em.nbar = cfg.nbar_nda;
    em.order = cfg.order_nda;
    em.max_iterations = cfg.em_max_iterations;
    em.tolerance = cfg.em_tolerance;
    em.mode = kind.mode;
    em.unweighted_gram = cfg.em_unweighted_gram;
    em.fresh_noise_recursion = cfg.em_fresh_noise;

    EmInitState init;
    if (kind.hybrid_init) {
        auto layout = pilot_layout(cfg.n, cfg.n_p);
        init = init_hybrid(obs, layout, symbols, cfg.nbar_da, cfg.order_da, cfg.nbar_nda,
                           cfg.order_nda);
    } else {
        init = init_arbitrary(obs, cfg.nbar_nda, cfg.order_nda);
    }
    auto est = run_em(obs, build_constellation(cfg.modulation), em, init);
    out.rho = est.rho_unbiased[antenna];
    for (const auto& w : est.windows) {
        out.window_iterations.push_back(w.iterations);
        if (kind.mode == DetectionMode::sd && w.non_monotone) ++out.windows_non_monotone;
    }
    if (nda_out != nullptr) *nda_out = std::move(est);
    return out;
}

}  // namespace

NmseCurve run_sweep(const ExperimentConfig& raw) {
    ExperimentConfig cfg = resolve_config(raw);
    NmseCurve curve;
    curve.config = cfg;
    if (raw.nbar_da == 0 || raw.nbar_nda == 0)
        curve.notes.push_back("window sizes resolved from doppler table row " +
                              std::to_string(table1_config(cfg.fdts).row_index) +
                              " (range boundaries use the larger-window row)");

    auto cons = build_constellation(cfg.modulation);
    auto fading = fading_from(cfg);
    int antenna = cfg.report_antenna - 1;

    std::vector<EstimatorKind> kinds;
    kinds.reserve(cfg.estimators.size());
    for (const auto& name : cfg.estimators) kinds.push_back(classify_estimator(name));

    for (std::size_t p = 0; p < cfg.gamma_db.size(); ++p) {
        double gamma = std::pow(10.0, cfg.gamma_db[p] / 10.0);
        double sigma2 = 1.0 / (2.0 * gamma);

        std::vector<SweepPoint> pts(cfg.estimators.size());
        std::vector<KahanSum> sum_sq(cfg.estimators.size()), sum_sq2(cfg.estimators.size());
        std::vector<int> ok(cfg.estimators.size(), 0);
        for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
            pts[e].gamma_db = cfg.gamma_db[p];
            pts[e].estimator = cfg.estimators[e];
            pts[e].ncrlb = crlb_da(gamma, cfg.n, cfg.n_r).bound / (gamma * gamma);
            pts[e].trials = cfg.trials;
        }

        for (int trial = 0; trial < cfg.trials; ++trial) {
            std::uint64_t base = derive_seed(cfg.seed, p, static_cast<std::uint64_t>(trial));
            auto trace = generate_fading(fading, derive_seed(base, 1, 0));
            Rng sym_rng(derive_seed(base, 2, 0));
            auto idx = draw_symbol_indices(cons, cfg.n, sym_rng);
            auto symbols = symbols_from_indices(cons, idx);
            auto obs = transmit(trace, symbols, sigma2, derive_seed(base, 3, 0));
            auto rho_true = true_instantaneous_snr(trace, symbols, sigma2);

            for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
                try {
                    auto est = apply_estimator(cfg, kinds[e], obs, symbols, antenna, nullptr, nullptr);
                    double d = rho_true[antenna] - est.rho;
                    double sq = d * d / (gamma * gamma);
                    sum_sq[e].add(sq);
                    sum_sq2[e].add(sq * sq);
                    ++ok[e];
                    pts[e].monotonicity_violations += est.windows_non_monotone;
                    if (cfg.keep_samples) {
                        pts[e].sample_estimates.push_back(est.rho);
                        pts[e].sample_truths.push_back(rho_true[antenna]);
                        pts[e].sample_sq_err.push_back(sq);
                        for (int it : est.window_iterations) pts[e].sample_iterations.push_back(it);
                    }
                } catch (const Error&) {
                    ++pts[e].errors;
                }
            }
        }

        for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
            if (ok[e] > 0) {
                double mean = sum_sq[e].value() / ok[e];
                pts[e].nmse = mean;
                if (ok[e] > 1) {
                    double var = (sum_sq2[e].value() - ok[e] * mean * mean) / (ok[e] - 1);
                    pts[e].stderr_ = std::sqrt(std::max(var, 0.0) / ok[e]);
                }
            }
            pts[e].failed = pts[e].errors * 100 > cfg.trials;
            curve.points.push_back(std::move(pts[e]));
        }
    }
    return curve;
}

std::string curve_to_csv(const NmseCurve& curve) {
    std::string out = "gamma_db,estimator,nmse,stderr,ncrlb,trials,errors\n";
    for (const auto& pt : curve.points) {
        out += dtoa(pt.gamma_db);
        out += ',';
        out += pt.estimator;
        out += ',';
        out += dtoa(pt.nmse);
        out += ',';
        out += dtoa(pt.stderr_);
        out += ',';
        out += dtoa(pt.ncrlb);
        out += ',';
        out += std::to_string(pt.trials);
        out += ',';
        out += std::to_string(pt.errors);
        out += '\n';
    }
    return out;
}

TraceResult run_trace(const ExperimentConfig& raw, double gamma_db, const std::string& estimator) {
    ExperimentConfig cfg = resolve_config(raw);
    auto kind = classify_estimator(estimator);
    auto cons = build_constellation(cfg.modulation);
    auto fading = fading_from(cfg);

    TraceResult tr;
    tr.config = cfg;
    tr.gamma_db = gamma_db;
    tr.estimator = estimator;

    double gamma = std::pow(10.0, gamma_db / 10.0);
    tr.sigma2_true = 1.0 / (2.0 * gamma);

    std::uint64_t base = derive_seed(cfg.seed, 0, 0);
    auto trace = generate_fading(fading, derive_seed(base, 1, 0));
    Rng sym_rng(derive_seed(base, 2, 0));
    tr.true_symbol_indices = draw_symbol_indices(cons, cfg.n, sym_rng);
    auto symbols = symbols_from_indices(cons, tr.true_symbol_indices);
    auto obs = transmit(trace, symbols, tr.sigma2_true, derive_seed(base, 3, 0));

    tr.rho_true = true_instantaneous_snr(trace, symbols, tr.sigma2_true);
    tr.h_true = trace.h;

    NdaSnrEstimate nda;
    DaSnrEstimate da;
    apply_estimator(cfg, kind, obs, symbols, cfg.report_antenna - 1, &nda, &da);
    if (kind.data_aided) {
        tr.rho_hat = kind.all_pilots ? da.rho_unbiased : da.rho;
        tr.sigma2_hat = da.sigma2;
        tr.h_hat = da.channel;
    } else {
        tr.rho_hat = nda.rho_unbiased;
        tr.sigma2_hat = nda.sigma2;
        tr.h_hat = nda.channel;
        for (const auto& w : nda.windows) {
            tr.llf_traces.push_back(w.llf_trace);
            tr.sigma2_traces.push_back(w.sigma2_trace);
            tr.iterations.push_back(w.iterations);
            tr.soft_symbols.insert(tr.soft_symbols.end(), w.soft_symbols.begin(), w.soft_symbols.end());
            tr.hard_symbols.insert(tr.hard_symbols.end(), w.hard_symbols.begin(), w.hard_symbols.end());
        }
    }
    return tr;
}

}  // namespace snrml
