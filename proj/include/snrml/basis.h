#pragma once

#include <complex>
#include <vector>

namespace snrml {

// Vandermonde-style basis over a window: row r is [1, u_r, u_r^2, ...] with
// u_r = node_r / scale. The Gram matrix and its Cholesky factor are built
// once at construction and reused by every fit against the same window
// geometry.
struct TimeMatrix {
    int rows = 0;
    int cols = 0;
    double scale = 1.0;
    std::vector<double> nodes;   // raw (unscaled) node values
    std::vector<double> m;       // rows x cols, row-major
    std::vector<double> gram;    // cols x cols, T^T T
    std::vector<double> chol;    // lower Cholesky factor of gram
    double condition = 0.0;      // spectral condition number of gram

    const double* row(int r) const { return &m[static_cast<std::size_t>(r) * cols]; }
};

// General constructor; throws RankDeficient when rows < cols or nodes repeat,
// IllConditioned when the Gram factorization collapses.
TimeMatrix time_matrix(const std::vector<double>& nodes, int order, double scale);

// Canonical window basis: nodes 0..nbar-1, scale nbar.
TimeMatrix window_basis(int nbar, int order);

// Rows of the canonical window basis restricted to a subset of local node
// indices (used when only pilot positions inside a window are observed).
// Scale stays nbar so coefficients live in the same parameterization.
TimeMatrix subsampled_basis(int nbar, int order, const std::vector<int>& local_nodes);

struct WindowPartition {
    int n = 0;
    int nbar = 0;
    int count = 0;
};

// Splits a frame of n samples into contiguous windows of nbar; throws
// InvalidPartition unless nbar divides n.
WindowPartition partition(int n, int nbar);

// Least-squares coefficients (T^T T)^{-1} T^T v for complex samples v taken
// at the matrix rows. v must have t.rows entries.
std::vector<std::complex<double>> basis_fit(const TimeMatrix& t, const std::complex<double>* v);

// Evaluate the polynomial with coefficients c at every row of t.
std::vector<std::complex<double>> basis_eval(const TimeMatrix& t,
                                             const std::vector<std::complex<double>>& c);

}  // namespace snrml
