#include "snrml/basis.h"

#include <cmath>
#include <limits>

#include "snrml/errors.h"
#include "snrml/linalg.h"

namespace snrml {

TimeMatrix time_matrix(const std::vector<double>& nodes, int order, double scale) {
    int rows = static_cast<int>(nodes.size());
    if (order < 1) throw RankDeficient("basis order must be at least 1");
    if (rows < order)
        throw RankDeficient("basis needs at least as many nodes (" + std::to_string(rows) +
                            ") as coefficients (" + std::to_string(order) + ")");
    if (!(scale > 0.0)) throw RankDeficient("basis scale must be positive");
    for (int i = 0; i < rows; ++i)
        for (int j = i + 1; j < rows; ++j)
            if (nodes[i] == nodes[j]) throw RankDeficient("repeated basis node");

    TimeMatrix t;
    t.rows = rows;
    t.cols = order;
    t.scale = scale;
    t.nodes = nodes;
    t.m.resize(static_cast<std::size_t>(rows) * order);
    for (int r = 0; r < rows; ++r) {
        double u = nodes[r] / scale;
        double p = 1.0;
        for (int c = 0; c < order; ++c) {
            t.m[static_cast<std::size_t>(r) * order + c] = p;
            p *= u;
        }
    }

    t.gram.assign(static_cast<std::size_t>(order) * order, 0.0);
    for (int r = 0; r < rows; ++r) {
        const double* row = t.row(r);
        for (int i = 0; i < order; ++i)
            for (int j = i; j < order; ++j) t.gram[static_cast<std::size_t>(i) * order + j] += row[i] * row[j];
    }
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < i; ++j)
            t.gram[static_cast<std::size_t>(i) * order + j] = t.gram[static_cast<std::size_t>(j) * order + i];

    t.chol = cholesky(t.gram, order);
    t.condition = symmetric_condition(t.gram, order);
    if (!std::isfinite(t.condition)) throw IllConditioned("basis Gram matrix is numerically singular");
    return t;
}

TimeMatrix window_basis(int nbar, int order) {
    std::vector<double> nodes(nbar);
    for (int r = 0; r < nbar; ++r) nodes[r] = static_cast<double>(r);
    return time_matrix(nodes, order, static_cast<double>(nbar));
}

TimeMatrix subsampled_basis(int nbar, int order, const std::vector<int>& local_nodes) {
    std::vector<double> nodes;
    nodes.reserve(local_nodes.size());
    for (int idx : local_nodes) {
        if (idx < 0 || idx >= nbar) throw DimensionMismatch("subsampled_basis: node outside window");
        nodes.push_back(static_cast<double>(idx));
    }
    return time_matrix(nodes, order, static_cast<double>(nbar));
}

WindowPartition partition(int n, int nbar) {
    if (n <= 0 || nbar <= 0) throw InvalidPartition("partition: lengths must be positive");
    if (n % nbar != 0)
        throw InvalidPartition("window length " + std::to_string(nbar) + " does not divide frame length " +
                               std::to_string(n));
    return {n, nbar, n / nbar};
}

std::vector<std::complex<double>> basis_fit(const TimeMatrix& t, const std::complex<double>* v) {
    std::vector<std::complex<double>> rhs(t.cols, {0.0, 0.0});
    for (int r = 0; r < t.rows; ++r) {
        const double* row = t.row(r);
        for (int c = 0; c < t.cols; ++c) rhs[c] += row[c] * v[r];
    }
    cholesky_solve(t.chol, t.cols, rhs.data());
    return rhs;
}

std::vector<std::complex<double>> basis_eval(const TimeMatrix& t,
                                             const std::vector<std::complex<double>>& c) {
    if (static_cast<int>(c.size()) != t.cols) throw DimensionMismatch("basis_eval: coefficient count mismatch");
    std::vector<std::complex<double>> out(t.rows, {0.0, 0.0});
    for (int r = 0; r < t.rows; ++r) {
        const double* row = t.row(r);
        std::complex<double> s{0.0, 0.0};
        for (int k = 0; k < t.cols; ++k) s += row[k] * c[k];
        out[r] = s;
    }
    return out;
}

}  // namespace snrml
