// shared test helpers: random instances and independent oracles
#ifndef GRAPHTV_TESTS_SUPPORT_HPP
#define GRAPHTV_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "graphtv/graphtv.hpp"

namespace testsupport {

using namespace graphtv;

// connected graph with n nodes and roughly `extra` non-tree edges
inline Graph random_graph(NodeId n, NodeId extra, std::uint64_t seed, bool weighted = false)
{
    auto rng = make_rng(seed);
    std::vector<Edge> edges;
    std::uniform_real_distribution<double> wd(0.1, 2.0);
    for (NodeId v = 1; v < n; ++v) {
        std::uniform_int_distribution<NodeId> up(0, v - 1);
        edges.push_back({up(rng), v, weighted ? wd(rng) : 1.0});
    }
    if (n > 1) {
        std::uniform_int_distribution<NodeId> any(0, n - 1);
        for (NodeId k = 0; k < extra; ++k) {
            NodeId u = any(rng), v = any(rng);
            if (u != v) edges.push_back({u, v, weighted ? wd(rng) : 1.0});
        }
    }
    return Graph(n, std::move(edges), weighted);
}

inline double mse(const Signal& a, const Signal& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

inline Signal random_signal(std::size_t n, std::uint64_t seed, double sd = 1.0)
{
    auto rng = make_rng(seed);
    std::normal_distribution<double> nd(0.0, sd);
    Signal s(n);
    for (double& v : s) v = nd(rng);
    return s;
}

// piecewise-constant signal: values quantized to a few levels
inline Signal random_piecewise(std::size_t n, std::uint64_t seed)
{
    Signal s = random_signal(n, seed);
    for (double& v : s) v = std::round(1.25 * v);
    return s;
}

// dense matrix-free oracle for (I + 2 lambda L) theta = y, Gaussian elimination
inline Signal laplacian_dense_solve(const Graph& g, const Signal& y, double lambda)
{
    const auto n = y.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = 1.0;
        a[i][n] = y[i];
    }
    for (const Edge& e : g.edges()) {
        double w = g.weighted() ? e.weight : 1.0;
        auto u = static_cast<std::size_t>(e.u), v = static_cast<std::size_t>(e.v);
        a[u][u] += 2.0 * lambda * w;
        a[v][v] += 2.0 * lambda * w;
        a[u][v] -= 2.0 * lambda * w;
        a[v][u] -= 2.0 * lambda * w;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0.0) continue;
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    Signal x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    return x;
}

// exhaustive 1d Potts oracle over all 2^(n-1) segmentations
inline double potts_oracle_objective(const Signal& y, double lambda)
{
    const std::size_t n = y.size();
    std::vector<double> s(n + 1, 0.0), s2(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        s[i + 1] = s[i] + y[i];
        s2[i + 1] = s2[i] + y[i] * y[i];
    }
    auto sse = [&](std::size_t j, std::size_t i) {
        double len = static_cast<double>(i - j + 1);
        double sum = s[i + 1] - s[j];
        return 0.5 * ((s2[i + 1] - s2[j]) - sum * sum / len);
    };
    double best = std::numeric_limits<double>::infinity();
    const std::size_t masks = n >= 1 ? (std::size_t{1} << (n - 1)) : 1;
    for (std::size_t mask = 0; mask < masks; ++mask) {
        double obj = 0.0;
        std::size_t start = 0, jumps = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (mask & (std::size_t{1} << i)) {
                obj += sse(start, i);
                start = i + 1;
                ++jumps;
            }
        }
        obj += sse(start, n - 1) + lambda * static_cast<double>(jumps);
        best = std::min(best, obj);
    }
    return best;
}

// dense double matrix of the wavelet basis, rows = basis vectors
inline std::vector<Signal> dense_basis(const WaveletBasis& basis)
{
    const auto n = static_cast<std::size_t>(basis.n);
    std::vector<Signal> rows(n, Signal(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) rows[0][j] = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < basis.atoms.size(); ++k) {
        const auto& atom = basis.atoms[k];
        for (NodeId u : atom.plus) rows[k + 1][static_cast<std::size_t>(u)] = atom.a;
        for (NodeId u : atom.minus) rows[k + 1][static_cast<std::size_t>(u)] = -atom.b;
    }
    return rows;
}

inline double max_gram_deviation(const WaveletBasis& basis)
{
    auto rows = dense_basis(basis);
    const std::size_t n = rows.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < n; ++k) dot += rows[i][k] * rows[j][k];
            worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

} // namespace testsupport

#endif
