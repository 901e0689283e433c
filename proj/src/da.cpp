#include "snrml/da.h"

#include <cmath>
#include <map>

#include "snrml/errors.h"
#include "snrml/kernels.h"
#include "snrml/linalg.h"

namespace snrml {

namespace {

double dof_d(int n, int n_r, double eps) {
    return static_cast<double>(n_r) * n * (1.0 - eps) - 1.0;
}

void check_moment_inputs(double rho, int n, int n_r, double eps) {
    if (n <= 0 || n_r <= 0) throw DimensionMismatch("moment inputs: n and n_r must be positive");
    if (rho < 0.0) throw ZeroNoise("moment inputs: rho must be nonnegative");
    if (!(eps >= 0.0 && eps < 1.0)) throw DimensionMismatch("moment inputs: eps must lie in [0, 1)");
    if (!(static_cast<double>(n_r) * n * (1.0 - eps) > 4.0))
        throw DegreesOfFreedomTooSmall("moment inputs: n_r * n * (1 - eps) must exceed 4");
}

}  // namespace

DaMoments analytic_moments(double rho, int n, int n_r, double eps, DofConvention conv) {
    check_moment_inputs(rho, n, n_r, eps);
    double nn = static_cast<double>(n_r) * n;
    double d = dof_d(n, n_r, eps);
    DaMoments m;
    if (conv == DofConvention::complex_dimensions) {
        m.mean = nn * (rho + eps / 2.0) / d;
        double bracket = rho * rho +
                         rho * (2.0 * n_r * (1.0 - eps) + eps - 2.0 / n) +
                         (n_r / 2.0 - 1.0 / (2.0 * n)) * eps -
                         (n_r / 2.0 - 0.25) * eps * eps;
        m.variance = nn * nn * bracket / (d * d * (d - 1.0));
        m.unbiased_variance = bracket / (d - 1.0);
    } else {
        double re = rho + eps;
        m.mean = nn * re / d;
        m.variance = (static_cast<double>(n_r) * n_r * n / (d * (d - 1.0))) *
                     (n * re * re / d + eps + 2.0 * rho);
        m.unbiased_variance = (re * re + d * (eps + 2.0 * rho) / n) / (d - 1.0);
    }
    m.bias = m.mean - rho;
    return m;
}

double unbias(double rho_hat, int n, int n_r, double eps, DofConvention conv) {
    if (n <= 0 || n_r <= 0) throw DimensionMismatch("unbias: n and n_r must be positive");
    if (!(eps >= 0.0 && eps < 1.0)) throw DimensionMismatch("unbias: eps must lie in [0, 1)");
    double d = dof_d(n, n_r, eps);
    if (!(d > 0.0)) throw DegreesOfFreedomTooSmall("unbias: nonpositive residual degrees of freedom");
    double scaled = d / (static_cast<double>(n_r) * n) * rho_hat;
    return conv == DofConvention::complex_dimensions ? scaled - eps / 2.0 : scaled - eps;
}

NoncentralFParams f_params(int n, int nbar, int order, int n_r, double rho, DofConvention conv) {
    auto part = partition(n, nbar);
    if (order < 1) throw DimensionMismatch("f_params: order must be at least 1");
    if (n_r <= 0) throw DimensionMismatch("f_params: n_r must be positive");
    if (rho < 0.0) throw ZeroNoise("f_params: rho must be nonnegative");
    double kl = static_cast<double>(part.count) * order;
    NoncentralFParams p;
    if (conv == DofConvention::complex_dimensions) {
        p.nu1 = kl;
        p.nu2 = static_cast<double>(n_r) * (n - kl);
        p.lambda = static_cast<double>(n) * rho;
    } else {
        p.nu1 = 2.0 * kl;
        p.nu2 = 2.0 * static_cast<double>(n_r) * (n - kl);
        p.lambda = 2.0 * static_cast<double>(n) * rho;
    }
    p.scale = kl / (static_cast<double>(n) - kl);
    if (!(p.nu2 > 4.0)) throw DegreesOfFreedomTooSmall("f_params: denominator degrees of freedom must exceed 4");
    return p;
}

DaWindowEstimate fit_window(const SimoObservation& obs, const std::vector<int>& positions,
                            const std::vector<std::complex<double>>& symbols_at,
                            const TimeMatrix& basis, int window_index) {
    int rows = static_cast<int>(positions.size());
    if (rows != basis.rows || rows != static_cast<int>(symbols_at.size()))
        throw DimensionMismatch("fit_window: rows, symbols and basis must agree");
    int order = basis.cols;
    const auto& k = active_kernels();

    // Symbol-energy weighted normal equations, shared across antennas.
    std::vector<double> gram(static_cast<std::size_t>(order) * order, 0.0);
    for (int r = 0; r < rows; ++r) {
        double w = std::norm(symbols_at[r]);
        const double* row = basis.row(r);
        for (int i = 0; i < order; ++i)
            for (int j = i; j < order; ++j) gram[static_cast<std::size_t>(i) * order + j] += w * row[i] * row[j];
    }
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < i; ++j) gram[static_cast<std::size_t>(i) * order + j] = gram[static_cast<std::size_t>(j) * order + i];
    auto chol = cholesky(gram, order);

    DaWindowEstimate est;
    est.window_index = window_index;
    est.fitted_samples = rows;
    est.coeff.assign(static_cast<std::size_t>(obs.n_r) * order, {0.0, 0.0});

    std::vector<double> yre(rows), yim(rows), pre(rows), pim(rows);
    std::vector<std::complex<double>> rhs(order);
    double resid = 0.0;
    for (int i = 0; i < obs.n_r; ++i) {
        for (int r = 0; r < rows; ++r) {
            auto v = obs.at(i, positions[r]);
            yre[r] = v.real();
            yim[r] = v.imag();
        }
        for (int c = 0; c < order; ++c) rhs[c] = {0.0, 0.0};
        for (int r = 0; r < rows; ++r) {
            std::complex<double> w = std::conj(symbols_at[r]) * std::complex<double>{yre[r], yim[r]};
            const double* row = basis.row(r);
            for (int c = 0; c < order; ++c) rhs[c] += row[c] * w;
        }
        cholesky_solve(chol, order, rhs.data());
        for (int c = 0; c < order; ++c) est.coeff[static_cast<std::size_t>(i) * order + c] = rhs[c];

        for (int r = 0; r < rows; ++r) {
            const double* row = basis.row(r);
            std::complex<double> g{0.0, 0.0};
            for (int c = 0; c < order; ++c) g += row[c] * rhs[c];
            auto p = symbols_at[r] * g;
            pre[r] = p.real();
            pim[r] = p.imag();
        }
        resid += k.sum_abs2_diff(yre.data(), yim.data(), pre.data(), pim.data(), rows);
    }
    est.resid_energy = resid;
    est.sigma2 = resid / (2.0 * rows * obs.n_r);
    return est;
}

DaSnrEstimate estimate_da(const SimoObservation& obs, const PilotLayout& layout,
                          const std::vector<std::complex<double>>& symbols, int nbar, int order) {
    if (layout.n != obs.n) throw DimensionMismatch("estimate_da: layout does not match observation");
    if (static_cast<int>(symbols.size()) != obs.n)
        throw DimensionMismatch("estimate_da: symbol count does not match observation");
    auto part = partition(obs.n, nbar);

    TimeMatrix full = window_basis(nbar, order);
    // Pilot patterns repeat across windows when n_p divides nbar; the cache
    // avoids rebuilding the same subsampled basis per window either way.
    std::map<std::vector<int>, TimeMatrix> sub_cache;

    DaSnrEstimate out;
    out.n = obs.n;
    out.n_r = obs.n_r;
    out.rho.assign(obs.n_r, 0.0);
    out.rho_unbiased.assign(obs.n_r, 0.0);
    out.channel.assign(static_cast<std::size_t>(obs.n_r) * obs.n, {0.0, 0.0});
    out.windows.reserve(part.count);

    std::vector<double> numerator(obs.n_r, 0.0);
    double sigma2_sum = 0.0;
    int total_fitted = 0;

    std::vector<int> local, positions;
    std::vector<std::complex<double>> sym_at;
    std::vector<double> weights, hre, him;
    for (int w = 0; w < part.count; ++w) {
        int start = w * nbar;
        local.clear();
        for (int l = 0; l < nbar; ++l)
            if ((start + l + 1) % layout.n_p == 0) local.push_back(l);
        positions.resize(local.size());
        sym_at.resize(local.size());
        for (std::size_t r = 0; r < local.size(); ++r) {
            positions[r] = start + local[r];
            sym_at[r] = symbols[positions[r]];
        }

        const TimeMatrix* basis = &full;
        if (static_cast<int>(local.size()) != nbar) {
            auto it = sub_cache.find(local);
            if (it == sub_cache.end()) it = sub_cache.emplace(local, subsampled_basis(nbar, order, local)).first;
            basis = &it->second;
        }

        auto est = fit_window(obs, positions, sym_at, *basis, w);
        sigma2_sum += est.sigma2;
        total_fitted += est.fitted_samples;

        // Signal energy at the fitted positions plus the reconstructed gain
        // over the whole window.
        int rows = est.fitted_samples;
        weights.resize(rows);
        hre.resize(rows);
        him.resize(rows);
        const auto& k = active_kernels();
        for (int i = 0; i < obs.n_r; ++i) {
            const std::complex<double>* c = &est.coeff[static_cast<std::size_t>(i) * order];
            for (int r = 0; r < rows; ++r) {
                const double* row = basis->row(r);
                std::complex<double> g{0.0, 0.0};
                for (int q = 0; q < order; ++q) g += row[q] * c[q];
                weights[r] = std::norm(sym_at[r]);
                hre[r] = g.real();
                him[r] = g.imag();
            }
            numerator[i] += k.weighted_sum_abs2(weights.data(), hre.data(), him.data(), rows);

            for (int l = 0; l < nbar; ++l) {
                const double* row = full.row(l);
                std::complex<double> g{0.0, 0.0};
                for (int q = 0; q < order; ++q) g += row[q] * c[q];
                out.channel[static_cast<std::size_t>(i) * obs.n + start + l] = g;
            }
        }
        out.windows.push_back(std::move(est));
    }

    out.sigma2 = sigma2_sum / part.count;
    if (out.sigma2 < 1e-15)
        throw DegenerateNoiseEstimate("estimate_da: pooled noise estimate below 1e-15");

    // Bias correction operates on the observed sample count: with pilots the
    // estimate is referenced to the pilot positions.
    int n_eff = total_fitted;
    double eps = static_cast<double>(part.count) * order / n_eff;
    out.epsilon = eps;
    for (int i = 0; i < obs.n_r; ++i) {
        out.rho[i] = numerator[i] / (static_cast<double>(layout.pilot_count) * 2.0 * out.sigma2);
        out.rho_unbiased[i] = unbias(out.rho[i], n_eff, obs.n_r, eps, DofConvention::real_dimensions);
    }
    return out;
}

}  // namespace snrml
