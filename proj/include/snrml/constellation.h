#pragma once

#include <complex>
#include <string>
#include <vector>

#include "snrml/rng.h"

namespace snrml {

// A normalized symbol alphabet. Average symbol energy is exactly 1, so a
// transmit SNR of gamma corresponds to noise sigma^2 = 1/(2 gamma).
struct Constellation {
    std::string spec;                           // e.g. "qam:16"
    std::vector<std::complex<double>> points;
    bool unit_modulus = false;                  // every point on the unit circle
    double min_distance = 0.0;                  // smallest pairwise distance
};

// Families:
//   psk:M  phase points. M = 2 uses {+1, -1}; M >= 4 rotates the set by
//          pi/M so the points sit between the axes (psk:4 is {+-1 +-1j}/sqrt2),
//          ordered by increasing angle.
//   qam:M  square grid for perfect-square M, odd integer levels scaled to
//          unit average energy, row-major from the top-left corner
//          (imaginary part descending, real part ascending).
//   pam:M  real odd integer levels ascending, scaled to unit average energy.
Constellation build_constellation(const std::string& spec);

std::vector<int> draw_symbol_indices(const Constellation& c, int count, Rng& rng);

std::vector<std::complex<double>> symbols_from_indices(const Constellation& c,
                                                       const std::vector<int>& idx);

// Index of the nearest point; ties resolve to the lowest index.
int hard_detect(const Constellation& c, std::complex<double> z);

// Known-symbol positions inside a frame of n symbols spaced n_p apart:
// 0-based position j is a pilot when (j + 1) is a multiple of n_p. n_p = 1
// marks every position.
struct PilotLayout {
    int n = 0;
    int n_p = 1;
    std::vector<int> pilot_indices;
    int pilot_count = 0;  // n / n_p
};

PilotLayout pilot_layout(int n, int n_p);

}  // namespace snrml
