#include "snrml/channel.h"

#include <cmath>

#include "snrml/basis.h"
#include "snrml/errors.h"
#include "snrml/rng.h"

namespace snrml {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void fill_jakes(ChannelTrace& trace, const FadingConfig& cfg, Rng& rng) {
    int m = cfg.oscillator_count;
    if (m < 8) throw ConfigError("jakes oscillator count must be at least 8");
    // Sum of equal-power sinusoids with arrival angles equally spaced over
    // the half circle and independent uniform phases per antenna. The half
    // circle keeps every Doppler shift distinct (the cosine is injective
    // there) and a random per-antenna grid offset keeps shifts distinct
    // across antennas too, so oscillator cross terms decay with the run
    // length: long-run time averages reproduce the classic Bessel
    // autocorrelation and antennas decorrelate per realization, not just in
    // the ensemble mean. Mean gain energy is exactly 1.
    std::vector<std::complex<double>> phasor(m), step(m);
    double amp = 1.0 / std::sqrt(static_cast<double>(m));
    for (int i = 0; i < cfg.n_r; ++i) {
        double offset = rng.uniform();
        for (int k = 0; k < m; ++k) {
            double angle = kTwoPi * (static_cast<double>(k) + offset) / (2.0 * m);
            double omega = kTwoPi * cfg.fdts * std::cos(angle);
            double phase = kTwoPi * rng.uniform();
            phasor[k] = {std::cos(phase), std::sin(phase)};
            step[k] = {std::cos(omega), std::sin(omega)};
        }
        for (int t = 0; t < cfg.n; ++t) {
            std::complex<double> s{0.0, 0.0};
            for (int k = 0; k < m; ++k) {
                s += phasor[k];
                phasor[k] *= step[k];
            }
            trace.h[static_cast<std::size_t>(i) * cfg.n + t] = amp * s;
        }
    }
}

void fill_polynomial(ChannelTrace& trace, const FadingConfig& cfg, Rng& rng) {
    if (!cfg.poly_coeffs.empty()) {
        // Explicit coefficients over global normalized time.
        if (static_cast<int>(cfg.poly_coeffs.size()) != cfg.n_r)
            throw DimensionMismatch("polynomial channel: need one coefficient vector per antenna");
        for (int i = 0; i < cfg.n_r; ++i) {
            const auto& c = cfg.poly_coeffs[i];
            if (c.empty()) throw DimensionMismatch("polynomial channel: empty coefficient vector");
            for (int t = 0; t < cfg.n; ++t) {
                double u = static_cast<double>(t) / cfg.n;
                std::complex<double> s{0.0, 0.0};
                double p = 1.0;
                for (const auto& ck : c) {
                    s += p * ck;
                    p *= u;
                }
                trace.h[static_cast<std::size_t>(i) * cfg.n + t] = s;
            }
        }
        return;
    }

    // Random mode: independent polynomial gains per window per antenna,
    // normalized so each window carries unit mean gain energy.
    int w = cfg.poly_window > 0 ? cfg.poly_window : cfg.n;
    auto part = partition(cfg.n, w);
    int order = cfg.poly_order;
    if (order < 1) throw ConfigError("polynomial channel: order must be at least 1");
    TimeMatrix basis = window_basis(w, order);
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    std::vector<std::complex<double>> coeff(order);
    for (int i = 0; i < cfg.n_r; ++i) {
        for (int win = 0; win < part.count; ++win) {
            for (int k = 0; k < order; ++k) coeff[k] = rng.cgaussian(inv_sqrt2);
            auto gains = basis_eval(basis, coeff);
            double energy = 0.0;
            for (const auto& g : gains) energy += std::norm(g);
            if (energy < 1e-30) {
                // Vanishing draw (probability zero in practice); fall back to
                // a flat unit gain so the window stays usable.
                for (auto& g : gains) g = {1.0, 0.0};
                energy = static_cast<double>(w);
            }
            double s = std::sqrt(static_cast<double>(w) / energy);
            for (int t = 0; t < w; ++t)
                trace.h[static_cast<std::size_t>(i) * cfg.n + win * w + t] = s * gains[t];
        }
    }
}

void fill_constant(ChannelTrace& trace, const FadingConfig& cfg, Rng& rng) {
    // Time-invariant unit-magnitude gain with a random phase per antenna.
    for (int i = 0; i < cfg.n_r; ++i) {
        double phase = kTwoPi * rng.uniform();
        std::complex<double> g{std::cos(phase), std::sin(phase)};
        for (int t = 0; t < cfg.n; ++t) trace.h[static_cast<std::size_t>(i) * cfg.n + t] = g;
    }
}

}  // namespace

ChannelTrace generate_fading(const FadingConfig& cfg, std::uint64_t seed) {
    if (cfg.n <= 0 || cfg.n_r <= 0) throw DimensionMismatch("generate_fading: dimensions must be positive");
    ChannelTrace trace;
    trace.n_r = cfg.n_r;
    trace.n = cfg.n;
    trace.config = cfg;
    trace.h.assign(static_cast<std::size_t>(cfg.n_r) * cfg.n, {0.0, 0.0});
    Rng rng(seed);
    switch (cfg.model) {
        case FadingModel::jakes: fill_jakes(trace, cfg, rng); break;
        case FadingModel::polynomial: fill_polynomial(trace, cfg, rng); break;
        case FadingModel::constant: fill_constant(trace, cfg, rng); break;
        default: throw UnsupportedModel("unknown fading model");
    }
    return trace;
}

SimoObservation transmit(const ChannelTrace& trace, const std::vector<std::complex<double>>& symbols,
                         double sigma2, std::uint64_t seed) {
    if (static_cast<int>(symbols.size()) != trace.n)
        throw DimensionMismatch("transmit: symbol count does not match trace length");
    if (sigma2 < 0.0) throw ZeroNoise("transmit: negative noise variance");
    SimoObservation obs;
    obs.n_r = trace.n_r;
    obs.n = trace.n;
    obs.sigma2 = sigma2;
    obs.y.resize(static_cast<std::size_t>(trace.n_r) * trace.n);
    Rng rng(seed);
    double sigma = std::sqrt(sigma2);
    for (int i = 0; i < trace.n_r; ++i)
        for (int t = 0; t < trace.n; ++t)
            obs.y[static_cast<std::size_t>(i) * trace.n + t] =
                trace.at(i, t) * symbols[t] + rng.cgaussian(sigma);
    return obs;
}

std::vector<double> true_instantaneous_snr(const ChannelTrace& trace,
                                           const std::vector<std::complex<double>>& symbols,
                                           double sigma2) {
    if (static_cast<int>(symbols.size()) != trace.n)
        throw DimensionMismatch("true_instantaneous_snr: symbol count mismatch");
    if (!(sigma2 > 0.0)) throw ZeroNoise("true_instantaneous_snr: sigma2 must be positive");
    std::vector<double> rho(trace.n_r, 0.0);
    for (int i = 0; i < trace.n_r; ++i) {
        double num = 0.0;
        for (int t = 0; t < trace.n; ++t) num += std::norm(trace.at(i, t) * symbols[t]);
        rho[i] = num / (static_cast<double>(trace.n) * 2.0 * sigma2);
    }
    return rho;
}

double doppler_to_velocity(double fd_hz, double carrier_hz) {
    if (!(carrier_hz > 0.0)) throw ConfigError("doppler_to_velocity: carrier frequency must be positive");
    return fd_hz * 3.0e8 / carrier_hz;
}

}  // namespace snrml
