#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "snrml/constellation.h"

namespace snrml {

enum class FadingModel { jakes, polynomial, constant };

struct FadingConfig {
    FadingModel model = FadingModel::jakes;
    int n_r = 1;
    int n = 0;

    // jakes: normalized Doppler F_D * T_s and the number of sum-of-sinusoid
    // oscillators.
    double fdts = 0.0;
    int oscillator_count = 64;

    // polynomial, explicit mode: one coefficient vector per antenna,
    // evaluated over global normalized time u = t / n. Empty means random
    // mode: each window of poly_window samples gets fresh complex-normal
    // coefficients of length poly_order, normalized to unit mean gain energy
    // inside the window. poly_window = 0 uses the whole frame as one window.
    std::vector<std::vector<std::complex<double>>> poly_coeffs;
    int poly_window = 0;
    int poly_order = 1;
};

struct ChannelTrace {
    int n_r = 0;
    int n = 0;
    std::vector<std::complex<double>> h;  // n_r x n, row-major
    FadingConfig config;

    std::complex<double> at(int antenna, int t) const {
        return h[static_cast<std::size_t>(antenna) * n + t];
    }
};

ChannelTrace generate_fading(const FadingConfig& cfg, std::uint64_t seed);

// One received frame: y_i(t) = h_i(t) a(t) + w_i(t), with w_i circular
// complex Gaussian, each real component of variance sigma2.
struct SimoObservation {
    int n_r = 0;
    int n = 0;
    double sigma2 = 0.0;
    std::vector<std::complex<double>> y;  // n_r x n, row-major

    std::complex<double> at(int antenna, int t) const {
        return y[static_cast<std::size_t>(antenna) * n + t];
    }
};

SimoObservation transmit(const ChannelTrace& trace, const std::vector<std::complex<double>>& symbols,
                         double sigma2, std::uint64_t seed);

// Per-antenna instantaneous SNR of a realized frame:
// sum_t |h_i(t) a(t)|^2 / (n * 2 sigma2).
std::vector<double> true_instantaneous_snr(const ChannelTrace& trace,
                                           const std::vector<std::complex<double>>& symbols,
                                           double sigma2);

// Mobile speed in m/s that produces Doppler fd_hz at carrier carrier_hz.
double doppler_to_velocity(double fd_hz, double carrier_hz);

}  // namespace snrml
