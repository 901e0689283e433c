#include "snrml/linalg.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snrml/errors.h"

namespace snrml {

std::vector<double> cholesky(const std::vector<double>& a, int n, double eps_rel) {
    if (static_cast<int>(a.size()) != n * n) throw DimensionMismatch("cholesky: matrix size mismatch");
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a[i * n + i]));
    if (max_diag == 0.0) throw IllConditioned("cholesky: zero matrix");

    std::vector<double> l(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (int k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
        if (!(d > eps_rel * max_diag)) throw IllConditioned("cholesky: pivot collapsed");
        double lj = std::sqrt(d);
        l[j * n + j] = lj;
        for (int i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
            l[i * n + j] = s / lj;
        }
    }
    return l;
}

void cholesky_solve(const std::vector<double>& l, int n, double* b) {
    // Forward substitution L y = b.
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
        b[i] = s / l[i * n + i];
    }
    // Back substitution L^T x = y.
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= l[k * n + i] * b[k];
        b[i] = s / l[i * n + i];
    }
}

void cholesky_solve(const std::vector<double>& l, int n, std::complex<double>* b) {
    std::vector<double> part(n);
    for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < n; ++i) part[i] = pass == 0 ? b[i].real() : b[i].imag();
        cholesky_solve(l, n, part.data());
        for (int i = 0; i < n; ++i) {
            if (pass == 0) b[i] = {part[i], b[i].imag()};
            else b[i] = {b[i].real(), part[i]};
        }
    }
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
    if (static_cast<int>(a.size()) != n * n) throw DimensionMismatch("symmetric_eigenvalues: size mismatch");
    auto off = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
        return s;
    };
    // Cyclic Jacobi: rotate away each off-diagonal entry until the residual
    // is negligible relative to the diagonal scale.
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i * n + i]));
    scale = std::max(scale, 1e-300);
    for (int sweep = 0; sweep < 64 && off() > 1e-30 * scale * scale; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (apq == 0.0) continue;
                double app = a[p * n + p], aqq = a[q * n + q];
                double theta = 0.5 * (aqq - app) / apq;
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = a[i * n + i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

double symmetric_condition(const std::vector<double>& a, int n) {
    auto ev = symmetric_eigenvalues(a, n);
    double lo = ev.front(), hi = ev.back();
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

}  // namespace snrml
