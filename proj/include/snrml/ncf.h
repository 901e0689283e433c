#pragma once

#include <cstddef>
#include <vector>

#include "snrml/da.h"

namespace snrml {

// Cumulative distribution of the noncentral F law with nu1/nu2 degrees of
// freedom and noncentrality lambda (lambda = 0 falls back to central F).
double noncentral_f_cdf(double x, double nu1, double nu2, double lambda);

struct KsResult {
    double statistic = 0.0;  // sup distance between empirical and model CDF
    double p_value = 0.0;
    std::size_t samples = 0;
};

// Survival function of the Kolmogorov statistic: asymptotic series with the
// standard small-sample effective-size correction.
double kolmogorov_p(double d, std::size_t n);

// One-sample KS test of raw estimates against the scaled noncentral-F law
// described by params (samples are divided by params.scale before the
// comparison). Throws TooFewSamples below 100 samples.
KsResult ks_noncentral_f(const std::vector<double>& samples, const NoncentralFParams& params);

}  // namespace snrml
