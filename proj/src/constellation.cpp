#include "snrml/constellation.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snrml/errors.h"

namespace snrml {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

bool perfect_square(int m, int& side) {
    side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
    return side * side == m;
}

std::vector<std::complex<double>> psk_points(int m) {
    std::vector<std::complex<double>> pts(m);
    // M = 2 stays on the real axis; larger orders are rotated by half a
    // step so quadrature sets sit between the axes. Points are listed by
    // increasing angle.
    double offset = m == 2 ? 0.0 : kPi / m;
    for (int k = 0; k < m; ++k) {
        double a = offset + 2.0 * kPi * k / m;
        pts[k] = {std::cos(a), std::sin(a)};
    }
    return pts;
}

std::vector<std::complex<double>> qam_points(int m) {
    int side = 0;
    if (!perfect_square(m, side))
        throw UnsupportedOrder("qam order must be a perfect square, got " + std::to_string(m));
    // Integer grid on odd levels, traversed row-major from the top-left
    // corner, then scaled to unit average energy.
    std::vector<std::complex<double>> pts;
    pts.reserve(m);
    double energy = 0.0;
    for (int r = 0; r < side; ++r) {
        double im = static_cast<double>(side - 1 - 2 * r);
        for (int c = 0; c < side; ++c) {
            double re = static_cast<double>(2 * c - (side - 1));
            pts.push_back({re, im});
            energy += re * re + im * im;
        }
    }
    double s = std::sqrt(energy / m);
    for (auto& p : pts) p /= s;
    return pts;
}

std::vector<std::complex<double>> pam_points(int m) {
    std::vector<std::complex<double>> pts(m);
    double energy = 0.0;
    for (int k = 0; k < m; ++k) {
        double re = static_cast<double>(2 * k - (m - 1));
        pts[k] = {re, 0.0};
        energy += re * re;
    }
    double s = std::sqrt(energy / m);
    for (auto& p : pts) p /= s;
    return pts;
}

}  // namespace

Constellation build_constellation(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw UnsupportedOrder("constellation spec must look like family:order, got '" + spec + "'");
    std::string family = spec.substr(0, colon);
    int m = 0;
    try {
        m = std::stoi(spec.substr(colon + 1));
    } catch (const std::exception&) {
        throw UnsupportedOrder("bad constellation order in '" + spec + "'");
    }
    if (m < 2) throw UnsupportedOrder("constellation order must be at least 2");

    Constellation c;
    c.spec = spec;
    if (family == "psk") {
        c.points = psk_points(m);
        c.unit_modulus = true;
    } else if (family == "qam") {
        c.points = qam_points(m);
        c.unit_modulus = m == 4;  // qam:4 degenerates to a unit circle set
    } else if (family == "pam") {
        c.points = pam_points(m);
        c.unit_modulus = m == 2;
    } else {
        throw UnsupportedOrder("unknown constellation family '" + family + "'");
    }

    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.points.size(); ++i)
        for (std::size_t j = i + 1; j < c.points.size(); ++j)
            dmin = std::min(dmin, std::abs(c.points[i] - c.points[j]));
    c.min_distance = dmin;
    return c;
}

std::vector<int> draw_symbol_indices(const Constellation& c, int count, Rng& rng) {
    std::vector<int> idx(count);
    int m = static_cast<int>(c.points.size());
    for (int k = 0; k < count; ++k) idx[k] = rng.uniform_int(m);
    return idx;
}

std::vector<std::complex<double>> symbols_from_indices(const Constellation& c,
                                                       const std::vector<int>& idx) {
    std::vector<std::complex<double>> out(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) out[k] = c.points[idx[k]];
    return out;
}

int hard_detect(const Constellation& c, std::complex<double> z) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < c.points.size(); ++m) {
        double d = std::norm(z - c.points[m]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(m);
        }
    }
    return best;
}

PilotLayout pilot_layout(int n, int n_p) {
    if (n <= 0 || n_p <= 0) throw InvalidPartition("pilot_layout: lengths must be positive");
    if (n % n_p != 0)
        throw InvalidPartition("pilot spacing " + std::to_string(n_p) + " does not divide frame length " +
                               std::to_string(n));
    PilotLayout layout;
    layout.n = n;
    layout.n_p = n_p;
    layout.pilot_count = n / n_p;
    layout.pilot_indices.reserve(layout.pilot_count);
    for (int j = 0; j < n; ++j)
        if ((j + 1) % n_p == 0) layout.pilot_indices.push_back(j);
    return layout;
}

}  // namespace snrml
