// AVX2 + FMA variants of the split-complex kernels. This file is compiled
// with -mavx2 -mfma; nothing here runs unless the dispatcher verified CPU
// support first.

#include <immintrin.h>

#include "snrml/kernels.h"

namespace snrml {

namespace {

/* Horizontal sum of a 4-lane double register:
   https://stackoverflow.com/questions/49941645 */
inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double sum_abs2_avx2(const double* re, const double* im, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d r = _mm256_loadu_pd(re + k);
        __m256d i = _mm256_loadu_pd(im + k);
        acc = _mm256_fmadd_pd(r, r, acc);
        acc = _mm256_fmadd_pd(i, i, acc);
    }
    double s = hsum(acc);
    for (; k < n; ++k) s += re[k] * re[k] + im[k] * im[k];
    return s;
}

double sum_abs2_diff_avx2(const double* xre, const double* xim,
                          const double* yre, const double* yim, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d dr = _mm256_sub_pd(_mm256_loadu_pd(xre + k), _mm256_loadu_pd(yre + k));
        __m256d di = _mm256_sub_pd(_mm256_loadu_pd(xim + k), _mm256_loadu_pd(yim + k));
        acc = _mm256_fmadd_pd(dr, dr, acc);
        acc = _mm256_fmadd_pd(di, di, acc);
    }
    double s = hsum(acc);
    for (; k < n; ++k) {
        double dr = xre[k] - yre[k];
        double di = xim[k] - yim[k];
        s += dr * dr + di * di;
    }
    return s;
}

double weighted_sum_abs2_avx2(const double* w, const double* re, const double* im, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d r = _mm256_loadu_pd(re + k);
        __m256d i = _mm256_loadu_pd(im + k);
        __m256d m = _mm256_fmadd_pd(i, i, _mm256_mul_pd(r, r));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), m, acc);
    }
    double s = hsum(acc);
    for (; k < n; ++k) s += w[k] * (re[k] * re[k] + im[k] * im[k]);
    return s;
}

void conj_dot_avx2(const double* are, const double* aim,
                   const double* bre, const double* bim, std::size_t n,
                   double* out_re, double* out_im) {
    __m256d accr = _mm256_setzero_pd();
    __m256d acci = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d ar = _mm256_loadu_pd(are + k);
        __m256d ai = _mm256_loadu_pd(aim + k);
        __m256d br = _mm256_loadu_pd(bre + k);
        __m256d bi = _mm256_loadu_pd(bim + k);
        accr = _mm256_fmadd_pd(ar, br, accr);
        accr = _mm256_fmadd_pd(ai, bi, accr);
        acci = _mm256_fmadd_pd(ar, bi, acci);
        acci = _mm256_fnmadd_pd(ai, br, acci);
    }
    double sr = hsum(accr), si = hsum(acci);
    for (; k < n; ++k) {
        sr += are[k] * bre[k] + aim[k] * bim[k];
        si += are[k] * bim[k] - aim[k] * bre[k];
    }
    *out_re = sr;
    *out_im = si;
}

void acc_dist_abs2_avx2(const double* yre, const double* yim,
                        const double* gre, const double* gim, std::size_t n,
                        double are, double aim, double* acc) {
    __m256d var = _mm256_set1_pd(are);
    __m256d vai = _mm256_set1_pd(aim);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        __m256d gr = _mm256_loadu_pd(gre + k);
        __m256d gi = _mm256_loadu_pd(gim + k);
        __m256d pr = _mm256_fnmadd_pd(vai, gi, _mm256_mul_pd(var, gr));
        __m256d pi = _mm256_fmadd_pd(vai, gr, _mm256_mul_pd(var, gi));
        __m256d dr = _mm256_sub_pd(_mm256_loadu_pd(yre + k), pr);
        __m256d di = _mm256_sub_pd(_mm256_loadu_pd(yim + k), pi);
        __m256d d2 = _mm256_fmadd_pd(di, di, _mm256_mul_pd(dr, dr));
        _mm256_storeu_pd(acc + k, _mm256_add_pd(_mm256_loadu_pd(acc + k), d2));
    }
    for (; k < n; ++k) {
        double pr = are * gre[k] - aim * gim[k];
        double pi = are * gim[k] + aim * gre[k];
        double dr = yre[k] - pr;
        double di = yim[k] - pi;
        acc[k] += dr * dr + di * di;
    }
}

const Kernels kAvx2 = {
    sum_abs2_avx2,
    sum_abs2_diff_avx2,
    weighted_sum_abs2_avx2,
    conj_dot_avx2,
    acc_dist_abs2_avx2,
    "avx2",
};

}  // namespace

const Kernels& avx2_kernels_impl() { return kAvx2; }

}  // namespace snrml
