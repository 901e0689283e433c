#include "snrml/kernels.h"

#include <cstdlib>

namespace snrml {

namespace {

double sum_abs2_scalar(const double* re, const double* im, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += re[k] * re[k] + im[k] * im[k];
    return s;
}

double sum_abs2_diff_scalar(const double* xre, const double* xim,
                            const double* yre, const double* yim, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double dr = xre[k] - yre[k];
        double di = xim[k] - yim[k];
        s += dr * dr + di * di;
    }
    return s;
}

double weighted_sum_abs2_scalar(const double* w, const double* re, const double* im, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += w[k] * (re[k] * re[k] + im[k] * im[k]);
    return s;
}

void conj_dot_scalar(const double* are, const double* aim,
                     const double* bre, const double* bim, std::size_t n,
                     double* out_re, double* out_im) {
    double sr = 0.0, si = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sr += are[k] * bre[k] + aim[k] * bim[k];
        si += are[k] * bim[k] - aim[k] * bre[k];
    }
    *out_re = sr;
    *out_im = si;
}

void acc_dist_abs2_scalar(const double* yre, const double* yim,
                          const double* gre, const double* gim, std::size_t n,
                          double are, double aim, double* acc) {
    for (std::size_t k = 0; k < n; ++k) {
        double pr = are * gre[k] - aim * gim[k];
        double pi = are * gim[k] + aim * gre[k];
        double dr = yre[k] - pr;
        double di = yim[k] - pi;
        acc[k] += dr * dr + di * di;
    }
}

const Kernels kScalar = {
    sum_abs2_scalar,
    sum_abs2_diff_scalar,
    weighted_sum_abs2_scalar,
    conj_dot_scalar,
    acc_dist_abs2_scalar,
    "scalar",
};

bool avx2_usable() {
#if defined(SNRML_HAVE_AVX2_BUILD) && (defined(__GNUC__) || defined(__clang__))
    if (std::getenv("SNRML_FORCE_SCALAR") != nullptr) return false;
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

#if defined(SNRML_HAVE_AVX2_BUILD)
// Defined in kernels_avx2.cpp, which is the only translation unit compiled
// with AVX2 code generation.
const Kernels& avx2_kernels_impl();
#endif

const Kernels* avx2_kernels() {
#if defined(SNRML_HAVE_AVX2_BUILD)
    return &avx2_kernels_impl();
#else
    return nullptr;
#endif
}

const Kernels& active_kernels() {
    static const Kernels* chosen = [] {
        if (avx2_usable()) {
            const Kernels* v = avx2_kernels();
            if (v != nullptr) return v;
        }
        return &kScalar;
    }();
    return *chosen;
}

}  // namespace snrml
