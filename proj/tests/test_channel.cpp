#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "snrml/channel.h"
#include "snrml/errors.h"

using namespace snrml;
using cd = std::complex<double>;

TEST_SUITE("channel") {

TEST_CASE("generation is deterministic in the seed") {
    FadingConfig cfg;
    cfg.model = FadingModel::jakes;
    cfg.n = 200;
    cfg.n_r = 2;
    cfg.fdts = 0.01;
    auto a = generate_fading(cfg, 77);
    auto b = generate_fading(cfg, 77);
    CHECK(a.h == b.h);
    auto c = generate_fading(cfg, 78);
    CHECK(a.h != c.h);
}

TEST_CASE("doppler spectrum: mean power and correlation shape") {
    FadingConfig cfg;
    cfg.model = FadingModel::jakes;
    cfg.n = 1200000;
    cfg.n_r = 1;
    cfg.fdts = 0.01;
    auto trace = generate_fading(cfg, 5);

    double power = 0.0;
    for (const auto& h : trace.h) power += std::norm(h);
    power /= cfg.n;
    CHECK(std::abs(power - 1.0) < 0.02);

    // Lagged products against the Bessel correlation of isotropic
    // scattering. The tolerance covers the Monte-Carlo error of the long
    // correlated record.
    for (int lag : {1, 2, 5, 10, 20}) {
        cd acc{0.0, 0.0};
        int count = cfg.n - lag;
        for (int t = 0; t < count; ++t) acc += trace.h[t + lag] * std::conj(trace.h[t]);
        double corr = (acc / static_cast<double>(count)).real();
        double expected = std::cyl_bessel_j(0.0, 2.0 * 3.14159265358979323846 * cfg.fdts * lag);
        CHECK(std::abs(corr - expected) < 0.05);
    }
}

TEST_CASE("antennas fade independently") {
    FadingConfig cfg;
    cfg.model = FadingModel::jakes;
    cfg.n = 400000;
    cfg.n_r = 2;
    cfg.fdts = 0.02;
    auto trace = generate_fading(cfg, 9);
    cd acc{0.0, 0.0};
    for (int t = 0; t < cfg.n; ++t) acc += trace.at(0, t) * std::conj(trace.at(1, t));
    CHECK(std::abs(acc / static_cast<double>(cfg.n)) < 0.05);
}

TEST_CASE("constant model holds magnitude one") {
    FadingConfig cfg;
    cfg.model = FadingModel::constant;
    cfg.n = 64;
    cfg.n_r = 3;
    auto trace = generate_fading(cfg, 13);
    for (int i = 0; i < 3; ++i) {
        auto first = trace.at(i, 0);
        CHECK(std::abs(std::abs(first) - 1.0) < 1e-14);
        for (int t = 1; t < 64; ++t) CHECK(std::abs(trace.at(i, t) - first) < 1e-14);
    }
    CHECK(std::abs(trace.at(0, 0) - trace.at(1, 0)) > 1e-6);  // phases differ
}

TEST_CASE("explicit polynomial gains") {
    FadingConfig cfg;
    cfg.model = FadingModel::polynomial;
    cfg.n = 10;
    cfg.n_r = 2;
    cfg.poly_coeffs = {{cd{2.0, 0.0}}, {cd{0.0, -1.0}}};
    auto trace = generate_fading(cfg, 1);
    for (int t = 0; t < 10; ++t) {
        CHECK(trace.at(0, t) == cd{2.0, 0.0});
        CHECK(trace.at(1, t) == cd{0.0, -1.0});
    }

    // Linear ramp over normalized global time.
    FadingConfig ramp;
    ramp.model = FadingModel::polynomial;
    ramp.n = 4;
    ramp.n_r = 1;
    ramp.poly_coeffs = {{cd{1.0, 0.0}, cd{4.0, 0.0}}};
    auto r = generate_fading(ramp, 1);
    CHECK(std::abs(r.at(0, 0) - cd{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(r.at(0, 2) - cd{3.0, 0.0}) < 1e-14);
}

TEST_CASE("random polynomial windows are energy normalized") {
    FadingConfig cfg;
    cfg.model = FadingModel::polynomial;
    cfg.n = 112;
    cfg.n_r = 2;
    cfg.poly_window = 28;
    cfg.poly_order = 4;
    auto trace = generate_fading(cfg, 21);
    for (int i = 0; i < 2; ++i)
        for (int w = 0; w < 4; ++w) {
            double e = 0.0;
            for (int t = 0; t < 28; ++t) e += std::norm(trace.at(i, w * 28 + t));
            CHECK(e == doctest::Approx(28.0).epsilon(1e-12));
        }
    // Windows hold different shapes.
    CHECK(std::abs(trace.at(0, 0) - trace.at(0, 28)) > 1e-9);

    FadingConfig bad = cfg;
    bad.poly_window = 30;
    CHECK_THROWS_AS(generate_fading(bad, 21), InvalidPartition);
}

TEST_CASE("transmit adds calibrated noise") {
    FadingConfig cfg;
    cfg.model = FadingModel::constant;
    cfg.n = 50000;
    cfg.n_r = 2;
    auto trace = generate_fading(cfg, 3);
    std::vector<cd> symbols(cfg.n, cd{1.0, 0.0});

    auto clean = transmit(trace, symbols, 0.0, 4);
    for (int t = 0; t < 100; ++t) CHECK(std::abs(clean.at(0, t) - trace.at(0, t)) < 1e-15);

    double sigma2 = 0.3;
    auto noisy = transmit(trace, symbols, sigma2, 4);
    double re2 = 0.0, im2 = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int t = 0; t < cfg.n; ++t) {
            cd w = noisy.at(i, t) - trace.at(i, t);
            re2 += w.real() * w.real();
            im2 += w.imag() * w.imag();
        }
    double n_samples = 2.0 * cfg.n;
    CHECK(re2 / n_samples == doctest::Approx(sigma2).epsilon(0.02));
    CHECK(im2 / n_samples == doctest::Approx(sigma2).epsilon(0.02));
}

TEST_CASE("instantaneous snr of a hand-built frame") {
    ChannelTrace trace;
    trace.n_r = 2;
    trace.n = 2;
    trace.h = {cd{1.0, 0.0}, cd{0.0, 2.0}, cd{1.0, 1.0}, cd{1.0, -1.0}};
    std::vector<cd> symbols = {cd{1.0, 0.0}, cd{0.0, 1.0}};
    double sigma2 = 0.25;
    auto rho = true_instantaneous_snr(trace, symbols, sigma2);
    // Antenna 0: (1 + 4) / (2 * 2 * 0.25) = 5, antenna 1: (2 + 2) / 1 = 4.
    CHECK(rho[0] == doctest::Approx(5.0));
    CHECK(rho[1] == doctest::Approx(4.0));
    CHECK_THROWS_AS(true_instantaneous_snr(trace, symbols, 0.0), ZeroNoise);
}

TEST_CASE("velocity conversion") {
    CHECK(doppler_to_velocity(100.0, 2.0e9) == doctest::Approx(15.0));
    CHECK_THROWS_AS(doppler_to_velocity(100.0, 0.0), ConfigError);
}

}  // TEST_SUITE
