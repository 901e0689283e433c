#include "snrml/crlb.h"

#include <cmath>

#include "snrml/errors.h"

namespace snrml {

CrlbResult crlb_da(double rho, int n, int n_r) {
    if (n <= 0 || n_r <= 0) throw DimensionMismatch("crlb_da: n and n_r must be positive");
    if (rho < 0.0) throw ZeroNoise("crlb_da: rho must be nonnegative");
    CrlbResult r;
    r.bound = rho / n * (2.0 + rho / n_r);
    r.rho = rho;
    r.n = n;
    r.n_r = n_r;
    r.path = CrlbPath::closed_form;
    return r;
}

std::vector<CrlbResult> crlb_via_fim(const std::vector<std::complex<double>>& h, int n_r,
                                     const std::vector<std::complex<double>>& symbols, double sigma2) {
    if (n_r <= 0) throw DimensionMismatch("crlb_via_fim: n_r must be positive");
    if (h.size() != symbols.size() * static_cast<std::size_t>(n_r))
        throw DimensionMismatch("crlb_via_fim: channel matrix does not match symbol count");
    if (!(sigma2 > 0.0)) throw SingularFim("crlb_via_fim: sigma2 must be positive");
    int n = static_cast<int>(symbols.size());
    if (n == 0) throw DimensionMismatch("crlb_via_fim: empty frame");

    bool any_energy = false;
    for (const auto& a : symbols)
        if (std::norm(a) > 0.0) { any_energy = true; break; }
    if (!any_energy) throw SingularFim("crlb_via_fim: all symbols are zero, no channel information");

    // The information matrix is block diagonal: each real/imaginary channel
    // component at sample t carries |a(t)|^2 / sigma2, and the shared noise
    // variance carries n * n_r / sigma2^2. The SNR gradient only touches the
    // components of one antenna plus the noise term, so the quadratic form
    // g^T F^{-1} g reduces to two sums.
    std::vector<CrlbResult> out;
    out.reserve(n_r);
    double noise_info = static_cast<double>(n) * n_r / (sigma2 * sigma2);
    for (int i = 0; i < n_r; ++i) {
        double signal = 0.0;   // sum_t |h_i(t) a(t)|^2
        double channel_part = 0.0;
        for (int t = 0; t < n; ++t) {
            double w = std::norm(symbols[t]);
            if (w == 0.0) continue;  // sample carries no channel information and no gradient
            double h2 = std::norm(h[static_cast<std::size_t>(i) * n + t]);
            signal += h2 * w;
            // gradient wrt each component: component * w / (n sigma2);
            // information: w / sigma2. Quadratic form contribution:
            // h2 * w / (n^2 sigma2).
            channel_part += h2 * w / (static_cast<double>(n) * n * sigma2);
        }
        double rho = signal / (2.0 * n * sigma2);
        double noise_grad = -rho / sigma2;
        double noise_part = noise_grad * noise_grad / noise_info;
        CrlbResult r;
        r.bound = channel_part + noise_part;
        r.rho = rho;
        r.n = n;
        r.n_r = n_r;
        r.path = CrlbPath::fim;
        out.push_back(r);
    }
    return out;
}

}  // namespace snrml
