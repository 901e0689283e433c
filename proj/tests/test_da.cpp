#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "snrml/da.h"
#include "snrml/errors.h"
#include "snrml/rng.h"

using namespace snrml;
using cd = std::complex<double>;

namespace {

// Frame with a flat unit channel, drawn symbols and calibrated noise;
// the workhorse for the distribution checks below.
struct FlatFrame {
    ChannelTrace trace;
    std::vector<cd> symbols;
    SimoObservation obs;
};

FlatFrame flat_frame(int n, int n_r, const Constellation& cons, double sigma2, std::uint64_t seed) {
    FlatFrame f;
    FadingConfig cfg;
    cfg.model = FadingModel::polynomial;
    cfg.n = n;
    cfg.n_r = n_r;
    cfg.poly_coeffs.assign(n_r, {cd{1.0, 0.0}});
    f.trace = generate_fading(cfg, seed);
    Rng sym_rng(derive_seed(seed, 2, 0));
    f.symbols = symbols_from_indices(cons, draw_symbol_indices(cons, n, sym_rng));
    f.obs = transmit(f.trace, f.symbols, sigma2, derive_seed(seed, 3, 0));
    return f;
}

// Independent moment oracle: the estimate is a scaled F ratio, so its mean
// and variance follow from the standard noncentral-F moment formulas applied
// to the real-component parameter set.
void f_ratio_moments(const NoncentralFParams& p, double* mean, double* var) {
    double ef = p.nu2 * (p.nu1 + p.lambda) / (p.nu1 * (p.nu2 - 2.0));
    double ef2 = (p.nu2 / p.nu1) * (p.nu2 / p.nu1) *
                 ((p.nu1 + p.lambda) * (p.nu1 + p.lambda) + 2.0 * (p.nu1 + 2.0 * p.lambda)) /
                 ((p.nu2 - 2.0) * (p.nu2 - 4.0));
    *mean = p.scale * ef;
    *var = p.scale * p.scale * (ef2 - ef * ef);
}

}  // namespace

TEST_SUITE("da") {

TEST_CASE("window fit recovers exact polynomial gains") {
    Rng rng(41);
    int nbar = 16, order = 3, n_r = 2;
    auto cons = build_constellation("qam:16");
    auto basis = window_basis(nbar, order);

    std::vector<cd> coeff_true(static_cast<std::size_t>(n_r) * order);
    for (auto& c : coeff_true) c = {rng.gaussian(), rng.gaussian()};

    SimoObservation obs;
    obs.n_r = n_r;
    obs.n = nbar;
    obs.sigma2 = 0.0;
    obs.y.resize(static_cast<std::size_t>(n_r) * nbar);
    std::vector<int> positions(nbar);
    std::vector<cd> symbols(nbar);
    Rng sym_rng(42);
    auto idx = draw_symbol_indices(cons, nbar, sym_rng);
    for (int t = 0; t < nbar; ++t) {
        positions[t] = t;
        symbols[t] = cons.points[idx[t]];
    }
    for (int i = 0; i < n_r; ++i)
        for (int t = 0; t < nbar; ++t) {
            const double* row = basis.row(t);
            cd g{0.0, 0.0};
            for (int q = 0; q < order; ++q) g += row[q] * coeff_true[i * order + q];
            obs.y[static_cast<std::size_t>(i) * nbar + t] = g * symbols[t];
        }

    auto est = fit_window(obs, positions, symbols, basis);
    for (std::size_t k = 0; k < coeff_true.size(); ++k)
        CHECK(std::abs(est.coeff[k] - coeff_true[k]) < 1e-10);
    CHECK(est.resid_energy < 1e-18);
    CHECK(est.fitted_samples == nbar);
}

TEST_CASE("all-zero symbols cannot be fitted") {
    SimoObservation obs;
    obs.n_r = 1;
    obs.n = 8;
    obs.y.assign(8, cd{1.0, 1.0});
    auto basis = window_basis(8, 2);
    std::vector<int> positions = {0, 1, 2, 3, 4, 5, 6, 7};
    std::vector<cd> zeros(8, cd{0.0, 0.0});
    CHECK_THROWS_AS(fit_window(obs, positions, zeros, basis, 0), IllConditioned);
}

TEST_CASE("noise variance estimate is calibrated") {
    auto cons = build_constellation("psk:4");
    double sigma2 = 0.5;
    int n = 28, n_r = 2, order = 4;
    // E{sigma2_hat} = sigma2 * (1 - eps); the residual has 2 n_r (n - L)
    // real degrees of freedom, so the trial-mean tolerance follows the
    // chi-square relative spread.
    const int trials = 2000;
    double acc = 0.0;
    auto layout = pilot_layout(n, 1);
    for (int trial = 0; trial < trials; ++trial) {
        auto f = flat_frame(n, n_r, cons, sigma2, derive_seed(60, 0, trial));
        acc += estimate_da(f.obs, layout, f.symbols, n, order).sigma2;
    }
    double mean = acc / trials;
    double expect = sigma2 * (1.0 - static_cast<double>(order) / n);
    double rel_sd = std::sqrt(2.0 / (2.0 * n_r * (n - order)));
    CHECK(std::abs(mean - expect) < 4.0 * expect * rel_sd / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("noiseless frames degenerate") {
    auto cons = build_constellation("psk:4");
    auto f = flat_frame(56, 2, cons, 0.0, 71);
    auto layout = pilot_layout(56, 1);
    CHECK_THROWS_AS(estimate_da(f.obs, layout, f.symbols, 56, 4), DegenerateNoiseEstimate);
}

TEST_CASE("halved-count moment formulas transcribe exactly") {
    // rho = 0, n = 112, n_r = 2, eps = 1/28: mean 4/215.
    auto m = analytic_moments(0.0, 112, 2, 1.0 / 28.0, DofConvention::complex_dimensions);
    CHECK(m.mean == doctest::Approx(4.0 / 215.0).epsilon(1e-14));
    CHECK(m.bias == doctest::Approx(4.0 / 215.0).epsilon(1e-14));

    // The corrected-estimate variance must equal the raw variance mapped
    // through the linear correction, in both conventions.
    for (auto conv : {DofConvention::complex_dimensions, DofConvention::real_dimensions}) {
        auto mm = analytic_moments(1.3, 56, 4, 1.0 / 14.0, conv);
        double d = 4.0 * 56.0 * (1.0 - 1.0 / 14.0) - 1.0;
        double mapped = mm.variance * d * d / (4.0 * 56.0 * 4.0 * 56.0);
        CHECK(mm.unbiased_variance == doctest::Approx(mapped).epsilon(1e-12));
    }

    CHECK_THROWS_AS(analytic_moments(1.0, 4, 1, 0.5, DofConvention::complex_dimensions),
                    DegreesOfFreedomTooSmall);
}

TEST_CASE("real-count moments match the F-ratio oracle") {
    for (double rho : {0.0, 0.5, 1.0, 10.0, 100.0}) {
        for (int n_r : {1, 2, 4}) {
            int n = 112, nbar = 28, order = 4;
            auto p = f_params(n, nbar, order, n_r, rho, DofConvention::real_dimensions);
            double mean = 0.0, var = 0.0;
            f_ratio_moments(p, &mean, &var);
            auto m = analytic_moments(rho, n, n_r, static_cast<double>(order) / nbar,
                                      DofConvention::real_dimensions);
            CHECK(m.mean == doctest::Approx(mean).epsilon(1e-10));
            CHECK(m.variance == doctest::Approx(var).epsilon(1e-10));
        }
    }
}

TEST_CASE("f_params fields under both conventions") {
    auto p = f_params(112, 112, 4, 2, 1.0, DofConvention::complex_dimensions);
    CHECK(p.nu1 == 4.0);
    CHECK(p.nu2 == 216.0);
    CHECK(p.lambda == 112.0);
    CHECK(p.scale == doctest::Approx(1.0 / 27.0).epsilon(1e-14));

    auto q = f_params(112, 112, 4, 2, 1.0, DofConvention::real_dimensions);
    CHECK(q.nu1 == 8.0);
    CHECK(q.nu2 == 432.0);
    CHECK(q.lambda == 224.0);
    CHECK(q.scale == doctest::Approx(1.0 / 27.0).epsilon(1e-14));

    CHECK_THROWS_AS(f_params(112, 112, 112, 2, 1.0, DofConvention::complex_dimensions),
                    DegreesOfFreedomTooSmall);
    CHECK_THROWS_AS(f_params(112, 13, 4, 2, 1.0, DofConvention::complex_dimensions), InvalidPartition);
}

TEST_CASE("unbias applies the linear correction") {
    double rho_hat = 2.0;
    int n = 112, n_r = 2;
    double eps = 1.0 / 28.0;
    double d = 2.0 * 112.0 * (27.0 / 28.0) - 1.0;
    CHECK(unbias(rho_hat, n, n_r, eps, DofConvention::complex_dimensions) ==
          doctest::Approx(d / 224.0 * 2.0 - eps / 2.0).epsilon(1e-14));
    CHECK(unbias(rho_hat, n, n_r, eps, DofConvention::real_dimensions) ==
          doctest::Approx(d / 224.0 * 2.0 - eps).epsilon(1e-14));
    // No clamping: strongly negative inputs stay negative.
    CHECK(unbias(-1.0, n, n_r, eps) < 0.0);
}

TEST_CASE("trial mean follows the real-count law, not the halved one") {
    // 20000 flat-channel trials at rho = 1. The real-component law predicts
    // the raw mean; the halved-count law sits several standard errors away.
    auto cons = build_constellation("psk:4");
    int n = 28, n_r = 2, order = 4;
    double rho = 1.0, sigma2 = 1.0 / (2.0 * rho);
    const int trials = 20000;
    auto layout = pilot_layout(n, 1);
    double acc = 0.0, acc2 = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        auto f = flat_frame(n, n_r, cons, sigma2, derive_seed(61, 1, trial));
        double v = estimate_da(f.obs, layout, f.symbols, n, order).rho[0];
        acc += v;
        acc2 += v * v;
    }
    double mean = acc / trials;
    double se = std::sqrt((acc2 / trials - mean * mean) / trials);
    double eps = static_cast<double>(order) / n;
    auto real_law = analytic_moments(rho, n, n_r, eps, DofConvention::real_dimensions);
    auto halved_law = analytic_moments(rho, n, n_r, eps, DofConvention::complex_dimensions);
    CHECK(std::abs(mean - real_law.mean) < 4.0 * se);
    CHECK(std::abs(mean - halved_law.mean) > 10.0 * se);

    // Trial variance agrees with the real-count prediction within the
    // chi-square sampling band (relative sd of a sample variance with
    // this skew stays below ~8% at 2e4 trials; allow 4 of those).
    double var = acc2 / trials - mean * mean;
    CHECK(std::abs(var - real_law.variance) < 0.12 * real_law.variance);
}

TEST_CASE("bias-corrected estimate centers on the true snr") {
    auto cons = build_constellation("qam:16");
    int n = 56, n_r = 2, order = 4;
    double gamma = std::pow(10.0, 0.5);  // 5 dB
    double sigma2 = 1.0 / (2.0 * gamma);
    const int trials = 20000;
    auto layout = pilot_layout(n, 1);
    double acc = 0.0, acc2 = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        auto f = flat_frame(n, n_r, cons, sigma2, derive_seed(62, 2, trial));
        auto est = estimate_da(f.obs, layout, f.symbols, n, order);
        auto truth = true_instantaneous_snr(f.trace, f.symbols, sigma2);
        double err = est.rho_unbiased[0] - truth[0];
        acc += err;
        acc2 += err * err;
    }
    double mean_err = acc / trials;
    double se = std::sqrt((acc2 / trials - mean_err * mean_err) / trials);
    CHECK(std::abs(mean_err) < 4.0 * se);
}

TEST_CASE("pilot-only fits reference the pilot positions") {
    auto cons = build_constellation("psk:4");
    int n = 112, n_p = 7, n_r = 2;
    double sigma2 = 0.005;  // 20 dB
    auto layout = pilot_layout(n, n_p);
    auto f = flat_frame(n, n_r, cons, sigma2, 81);
    auto est = estimate_da(f.obs, layout, f.symbols, 112, 4);

    CHECK(est.windows.size() == 1);
    CHECK(est.windows[0].fitted_samples == 16);
    CHECK(est.epsilon == doctest::Approx(4.0 / 16.0));
    // Flat unit channel at 20 dB. Referenced to the 16 pilots the raw
    // estimate centers near 139 with a standard deviation near 30, so this
    // band is only a sanity check, not a law check.
    CHECK(est.rho[0] > 50.0);
    CHECK(est.rho[0] < 400.0);
    // The reconstructed gain covers every sample, not only pilots.
    for (int t = 0; t < n; ++t) CHECK(std::abs(est.channel[t]) > 0.1);
}

TEST_CASE("dimension guards") {
    auto cons = build_constellation("psk:2");
    auto f = flat_frame(28, 1, cons, 0.1, 90);
    auto layout = pilot_layout(28, 1);
    CHECK_THROWS_AS(estimate_da(f.obs, layout, f.symbols, 13, 2), InvalidPartition);
    CHECK_THROWS_AS(estimate_da(f.obs, pilot_layout(56, 1), f.symbols, 28, 2), DimensionMismatch);
    std::vector<cd> short_symbols(10);
    CHECK_THROWS_AS(estimate_da(f.obs, layout, short_symbols, 28, 2), DimensionMismatch);
}

}  // TEST_SUITE
