#include "snrml/em.h"

#include <cmath>

#include "snrml/errors.h"
#include "snrml/kernels.h"
#include "snrml/linalg.h"

namespace snrml {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// Split-complex scratch space for one window so the hot loops run on
// contiguous arrays.
struct Workspace {
    int nbar = 0, n_r = 0, m = 0;
    std::vector<double> yre, yim;    // n_r x nbar
    std::vector<double> gre, gim;    // n_r x nbar
    std::vector<double> dist;        // m x nbar, sum over antennas of |y - a g|^2
    std::vector<double> post;        // m x nbar
    std::vector<std::complex<double>> soft;  // nbar
    std::vector<int> hard;           // nbar
    std::vector<double> alpha;       // nbar
    const int* pinned = nullptr;     // window-local view into known_symbols, or null

    Workspace(const SimoObservation& obs, int start, int nbar_, int m_)
        : nbar(nbar_), n_r(obs.n_r), m(m_) {
        yre.resize(static_cast<std::size_t>(n_r) * nbar);
        yim.resize(yre.size());
        for (int i = 0; i < n_r; ++i)
            for (int t = 0; t < nbar; ++t) {
                auto v = obs.at(i, start + t);
                yre[static_cast<std::size_t>(i) * nbar + t] = v.real();
                yim[static_cast<std::size_t>(i) * nbar + t] = v.imag();
            }
        gre.resize(yre.size());
        gim.resize(yre.size());
        dist.resize(static_cast<std::size_t>(m) * nbar);
        post.resize(dist.size());
        soft.resize(nbar);
        hard.resize(nbar);
        alpha.resize(nbar);
    }
};

void eval_gains(Workspace& ws, const TimeMatrix& basis, const std::vector<std::complex<double>>& coeff) {
    int order = basis.cols;
    for (int i = 0; i < ws.n_r; ++i) {
        const std::complex<double>* c = &coeff[static_cast<std::size_t>(i) * order];
        for (int t = 0; t < ws.nbar; ++t) {
            const double* row = basis.row(t);
            std::complex<double> g{0.0, 0.0};
            for (int q = 0; q < order; ++q) g += row[q] * c[q];
            ws.gre[static_cast<std::size_t>(i) * ws.nbar + t] = g.real();
            ws.gim[static_cast<std::size_t>(i) * ws.nbar + t] = g.imag();
        }
    }
}

void fill_distances(Workspace& ws, const Constellation& cons) {
    const auto& k = active_kernels();
    std::fill(ws.dist.begin(), ws.dist.end(), 0.0);
    for (int i = 0; i < ws.n_r; ++i) {
        const double* yre = &ws.yre[static_cast<std::size_t>(i) * ws.nbar];
        const double* yim = &ws.yim[static_cast<std::size_t>(i) * ws.nbar];
        const double* gre = &ws.gre[static_cast<std::size_t>(i) * ws.nbar];
        const double* gim = &ws.gim[static_cast<std::size_t>(i) * ws.nbar];
        for (int m = 0; m < ws.m; ++m) {
            auto a = cons.points[m];
            k.acc_dist_abs2(yre, yim, gre, gim, ws.nbar, a.real(), a.imag(),
                            &ws.dist[static_cast<std::size_t>(m) * ws.nbar]);
        }
    }
}

// Posterior pass at the parameters baked into ws.dist. Returns the observed
// log-likelihood of the window.
double posterior_pass(Workspace& ws, const Constellation& cons, double sigma2) {
    if (!(sigma2 > 0.0)) throw DegenerateNoiseEstimate("posterior pass: sigma2 must be positive");
    double inv = 1.0 / (2.0 * sigma2);
    double log_m = std::log(static_cast<double>(ws.m));
    double llf = 0.0;
    std::vector<double> logw(ws.m);
    for (int t = 0; t < ws.nbar; ++t) {
        double mx = -1e300;
        for (int m = 0; m < ws.m; ++m) {
            logw[m] = -ws.dist[static_cast<std::size_t>(m) * ws.nbar + t] * inv;
            if (logw[m] > mx) mx = logw[m];
        }
        double z = 0.0;
        for (int m = 0; m < ws.m; ++m) z += std::exp(logw[m] - mx);
        double lse = mx + std::log(z);

        int pin = ws.pinned != nullptr ? ws.pinned[t] : -1;
        if (pin >= 0) {
            for (int m = 0; m < ws.m; ++m) ws.post[static_cast<std::size_t>(m) * ws.nbar + t] = 0.0;
            ws.post[static_cast<std::size_t>(pin) * ws.nbar + t] = 1.0;
            llf += logw[pin];
        } else {
            for (int m = 0; m < ws.m; ++m)
                ws.post[static_cast<std::size_t>(m) * ws.nbar + t] = std::exp(logw[m] - lse);
            llf += lse - log_m;
        }

        std::complex<double> mean{0.0, 0.0};
        double energy = 0.0;
        for (int m = 0; m < ws.m; ++m) {
            double p = ws.post[static_cast<std::size_t>(m) * ws.nbar + t];
            mean += p * cons.points[m];
            energy += p * std::norm(cons.points[m]);
        }
        ws.soft[t] = mean;
        ws.alpha[t] = cons.unit_modulus ? 1.0 : energy;
        ws.hard[t] = hard_detect(cons, mean);
    }
    llf -= static_cast<double>(ws.nbar) * ws.n_r * (kLog2Pi + std::log(sigma2));
    return llf;
}

// Posterior-weighted mean residual energy: sum over positions and points of
// post * dist, which equals the additive noise recursion evaluated at the
// parameters the distances were computed from.
double noise_numerator(const Workspace& ws) {
    double s = 0.0;
    for (std::size_t k = 0; k < ws.dist.size(); ++k) s += ws.post[k] * ws.dist[k];
    return s;
}

void update_coefficients(Workspace& ws, const TimeMatrix& basis, const Constellation& cons,
                         const EmConfig& cfg, std::vector<std::complex<double>>& coeff) {
    int order = basis.cols;
    bool weighted = !cfg.unweighted_gram;

    // Effective symbol per position for the correlation term: soft means, or
    // their hard decisions when decision feedback is on.
    std::vector<std::complex<double>> s(ws.nbar);
    for (int t = 0; t < ws.nbar; ++t)
        s[t] = cfg.mode == DetectionMode::ihd ? cons.points[ws.hard[t]] : ws.soft[t];

    const std::vector<double>* chol = &basis.chol;
    std::vector<double> gram, chol_local;
    bool uniform_weights = !weighted || cons.unit_modulus;
    if (!uniform_weights) {
        gram.assign(static_cast<std::size_t>(order) * order, 0.0);
        for (int t = 0; t < ws.nbar; ++t) {
            const double* row = basis.row(t);
            for (int i = 0; i < order; ++i)
                for (int j = i; j < order; ++j)
                    gram[static_cast<std::size_t>(i) * order + j] += ws.alpha[t] * row[i] * row[j];
        }
        for (int i = 0; i < order; ++i)
            for (int j = 0; j < i; ++j)
                gram[static_cast<std::size_t>(i) * order + j] = gram[static_cast<std::size_t>(j) * order + i];
        chol_local = cholesky(gram, order);
        chol = &chol_local;
    }

    std::vector<std::complex<double>> rhs(order);
    for (int i = 0; i < ws.n_r; ++i) {
        for (int c = 0; c < order; ++c) rhs[c] = {0.0, 0.0};
        const double* yre = &ws.yre[static_cast<std::size_t>(i) * ws.nbar];
        const double* yim = &ws.yim[static_cast<std::size_t>(i) * ws.nbar];
        for (int t = 0; t < ws.nbar; ++t) {
            std::complex<double> lam = std::conj(s[t]) * std::complex<double>{yre[t], yim[t]};
            const double* row = basis.row(t);
            for (int c = 0; c < order; ++c) rhs[c] += row[c] * lam;
        }
        cholesky_solve(*chol, order, rhs.data());
        for (int c = 0; c < order; ++c) coeff[static_cast<std::size_t>(i) * order + c] = rhs[c];
    }
}

}  // namespace

double observed_llf(const SimoObservation& obs, int window_start, const TimeMatrix& basis,
                    const Constellation& cons, const EmConfig& cfg,
                    const std::vector<std::complex<double>>& coeff, double sigma2) {
    Workspace ws(obs, window_start, basis.rows, static_cast<int>(cons.points.size()));
    if (!cfg.known_symbols.empty()) {
        if (static_cast<int>(cfg.known_symbols.size()) != obs.n)
            throw DimensionMismatch("observed_llf: known_symbols must cover the frame");
        ws.pinned = cfg.known_symbols.data() + window_start;
    }
    eval_gains(ws, basis, coeff);
    fill_distances(ws, cons);
    return posterior_pass(ws, cons, sigma2);
}

EmWindowResult em_window(const SimoObservation& obs, int window_start, const TimeMatrix& basis,
                         const Constellation& cons, const EmConfig& cfg,
                         const std::vector<std::complex<double>>& coeff0, double sigma2_0) {
    int nbar = basis.rows;
    int order = basis.cols;
    if (static_cast<int>(coeff0.size()) != obs.n_r * order)
        throw DimensionMismatch("em_window: initial coefficients must be n_r x order");
    if (!(sigma2_0 > 0.0)) throw DegenerateNoiseEstimate("em_window: initial sigma2 must be positive");

    Workspace ws(obs, window_start, nbar, static_cast<int>(cons.points.size()));
    if (!cfg.known_symbols.empty()) {
        if (static_cast<int>(cfg.known_symbols.size()) != obs.n)
            throw DimensionMismatch("em_window: known_symbols must cover the frame");
        ws.pinned = cfg.known_symbols.data() + window_start;
    }

    EmWindowResult res;
    res.coeff = coeff0;
    res.sigma2 = sigma2_0;

    double denom = 2.0 * nbar * obs.n_r;
    for (int q = 1; q <= cfg.max_iterations; ++q) {
        eval_gains(ws, basis, res.coeff);
        fill_distances(ws, cons);
        res.llf_trace.push_back(posterior_pass(ws, cons, res.sigma2));

        double sigma2_new;
        if (!cfg.fresh_noise_recursion) {
            // Noise first, at the previous coefficients, then coefficients.
            sigma2_new = noise_numerator(ws) / denom;
            update_coefficients(ws, basis, cons, cfg, res.coeff);
        } else {
            update_coefficients(ws, basis, cons, cfg, res.coeff);
            eval_gains(ws, basis, res.coeff);
            fill_distances(ws, cons);
            sigma2_new = noise_numerator(ws) / denom;
        }
        if (sigma2_new < 1e-15)
            throw DegenerateNoiseEstimate("em_window: noise recursion collapsed below 1e-15");

        double rel = std::abs(2.0 * sigma2_new - 2.0 * res.sigma2) / (2.0 * res.sigma2);
        res.sigma2 = sigma2_new;
        res.sigma2_trace.push_back(sigma2_new);
        res.iterations = q;
        if (rel < cfg.tolerance) {
            res.converged = true;
            break;
        }
    }

    // Refresh the posterior state at the final parameters; the extra pass
    // also extends the likelihood trace so the monotonicity scan covers the
    // last update.
    eval_gains(ws, basis, res.coeff);
    fill_distances(ws, cons);
    res.llf_trace.push_back(posterior_pass(ws, cons, res.sigma2));

    for (std::size_t k = 0; k + 1 < res.llf_trace.size(); ++k) {
        double drop = res.llf_trace[k] - res.llf_trace[k + 1];
        if (drop > res.worst_decrease) res.worst_decrease = drop;
    }
    if (res.worst_decrease > 1e-8) res.non_monotone = true;

    res.posteriors = ws.post;
    res.soft_symbols = ws.soft;
    res.hard_symbols = ws.hard;
    res.symbol_energy = ws.alpha;
    return res;
}

EmInitState init_hybrid(const SimoObservation& obs, const PilotLayout& layout,
                        const std::vector<std::complex<double>>& symbols, int nbar_da, int order_da,
                        int nbar_nda, int order_nda) {
    auto da = estimate_da(obs, layout, symbols, nbar_da, order_da);
    auto part = partition(obs.n, nbar_nda);
    TimeMatrix basis = window_basis(nbar_nda, order_nda);

    EmInitState init;
    init.sigma2 = da.sigma2;
    init.coeff.resize(part.count);
    std::vector<std::complex<double>> block(nbar_nda);
    for (int w = 0; w < part.count; ++w) {
        auto& c = init.coeff[w];
        c.assign(static_cast<std::size_t>(obs.n_r) * order_nda, {0.0, 0.0});
        for (int i = 0; i < obs.n_r; ++i) {
            for (int t = 0; t < nbar_nda; ++t)
                block[t] = da.channel[static_cast<std::size_t>(i) * obs.n + w * nbar_nda + t];
            auto fit = basis_fit(basis, block.data());
            for (int q = 0; q < order_nda; ++q) c[static_cast<std::size_t>(i) * order_nda + q] = fit[q];
        }
    }
    return init;
}

EmInitState init_arbitrary(const SimoObservation& obs, int nbar_nda, int order_nda) {
    auto part = partition(obs.n, nbar_nda);
    EmInitState init;
    init.coeff.assign(part.count,
                      std::vector<std::complex<double>>(static_cast<std::size_t>(obs.n_r) * order_nda,
                                                        {1.0, 0.0}));
    const auto& k = active_kernels();
    // Half the sample second moment: with unit-energy symbols the received
    // power splits between signal and the two noise components.
    std::vector<double> re(obs.n), im(obs.n);
    double power = 0.0;
    for (int i = 0; i < obs.n_r; ++i) {
        for (int t = 0; t < obs.n; ++t) {
            auto v = obs.at(i, t);
            re[t] = v.real();
            im[t] = v.imag();
        }
        power += k.sum_abs2(re.data(), im.data(), obs.n);
    }
    init.sigma2 = power / (static_cast<double>(obs.n) * obs.n_r) / 2.0;
    return init;
}

NdaSnrEstimate run_em(const SimoObservation& obs, const Constellation& cons, const EmConfig& cfg,
                      const EmInitState& init) {
    auto part = partition(obs.n, cfg.nbar);
    if (static_cast<int>(init.coeff.size()) != part.count)
        throw DimensionMismatch("run_em: initial state has wrong window count");
    TimeMatrix basis = window_basis(cfg.nbar, cfg.order);

    NdaSnrEstimate out;
    out.n = obs.n;
    out.n_r = obs.n_r;
    out.rho.assign(obs.n_r, 0.0);
    out.rho_unbiased.assign(obs.n_r, 0.0);
    out.channel.assign(static_cast<std::size_t>(obs.n_r) * obs.n, {0.0, 0.0});
    out.windows.reserve(part.count);
    out.epsilon = static_cast<double>(cfg.order) / cfg.nbar;

    const auto& k = active_kernels();
    std::vector<double> numerator(obs.n_r, 0.0);
    std::vector<double> weights(cfg.nbar), hre(cfg.nbar), him(cfg.nbar);
    double sigma2_sum = 0.0;

    for (int w = 0; w < part.count; ++w) {
        auto res = em_window(obs, w * cfg.nbar, basis, cons, cfg, init.coeff[w], init.sigma2);
        res.window_index = w;
        sigma2_sum += res.sigma2;
        if (res.non_monotone) out.non_monotone = true;

        bool hard_energy = cfg.mode != DetectionMode::sd;
        for (int t = 0; t < cfg.nbar; ++t)
            weights[t] = hard_energy ? std::norm(cons.points[res.hard_symbols[t]])
                                     : std::norm(res.soft_symbols[t]);
        for (int i = 0; i < obs.n_r; ++i) {
            const std::complex<double>* c = &res.coeff[static_cast<std::size_t>(i) * cfg.order];
            for (int t = 0; t < cfg.nbar; ++t) {
                const double* row = basis.row(t);
                std::complex<double> g{0.0, 0.0};
                for (int q = 0; q < cfg.order; ++q) g += row[q] * c[q];
                hre[t] = g.real();
                him[t] = g.imag();
                out.channel[static_cast<std::size_t>(i) * obs.n + w * cfg.nbar + t] = g;
            }
            numerator[i] += k.weighted_sum_abs2(weights.data(), hre.data(), him.data(), cfg.nbar);
        }
        out.windows.push_back(std::move(res));
    }

    out.sigma2 = sigma2_sum / part.count;
    if (out.sigma2 < 1e-15) throw DegenerateNoiseEstimate("run_em: pooled noise estimate below 1e-15");
    for (int i = 0; i < obs.n_r; ++i) {
        out.rho[i] = numerator[i] / (static_cast<double>(obs.n) * 2.0 * out.sigma2);
        out.rho_unbiased[i] = unbias(out.rho[i], obs.n, obs.n_r, out.epsilon, DofConvention::real_dimensions);
    }
    return out;
}

}  // namespace snrml
