#pragma once

#include <cstddef>

namespace snrml {

// Hot inner loops operate on split real/imaginary arrays so the vector
// variants can load contiguous lanes. Every entry has a scalar reference
// implementation; an AVX2 build is selected at runtime when the CPU supports
// it. The two must agree to near machine precision (see the kernel tests).
struct Kernels {
    // sum |x|^2
    double (*sum_abs2)(const double* re, const double* im, std::size_t n);
    // sum |x - y|^2
    double (*sum_abs2_diff)(const double* xre, const double* xim,
                            const double* yre, const double* yim, std::size_t n);
    // sum w * |x|^2
    double (*weighted_sum_abs2)(const double* w, const double* re, const double* im, std::size_t n);
    // sum conj(a) * b, returned through out_re/out_im
    void (*conj_dot)(const double* are, const double* aim,
                     const double* bre, const double* bim, std::size_t n,
                     double* out_re, double* out_im);
    // acc[k] += |y_k - a * g_k|^2 for a fixed complex scalar a
    void (*acc_dist_abs2)(const double* yre, const double* yim,
                          const double* gre, const double* gim, std::size_t n,
                          double are, double aim, double* acc);
    const char* name;
};

const Kernels& scalar_kernels();

// Null when the binary was not built with the AVX2 translation unit.
const Kernels* avx2_kernels();

// Scalar unless an AVX2 build exists, the CPU reports support, and the
// SNRML_FORCE_SCALAR environment variable is unset.
const Kernels& active_kernels();

}  // namespace snrml
