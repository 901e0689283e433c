#pragma once

#include <complex>
#include <vector>

namespace snrml {

enum class CrlbPath { closed_form, fim };

struct CrlbResult {
    double bound = 0.0;
    double rho = 0.0;
    int n = 0;
    int n_r = 0;
    CrlbPath path = CrlbPath::closed_form;
};

// Known-symbol estimation bound: (rho / n) * (2 + rho / n_r).
CrlbResult crlb_da(double rho, int n, int n_r);

// Same bound assembled from the Fisher information of the per-sample channel
// parameters and the shared noise variance. The block structure is exploited
// analytically; the full matrix is never formed. Returns one bound per
// antenna, each evaluated at that antenna's realized SNR. Throws SingularFim
// when every symbol is zero or sigma2 is not positive.
std::vector<CrlbResult> crlb_via_fim(const std::vector<std::complex<double>>& h, int n_r,
                                     const std::vector<std::complex<double>>& symbols, double sigma2);

}  // namespace snrml
