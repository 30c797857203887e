#ifndef GRAPHTV_DENOISE_HPP
#define GRAPHTV_DENOISE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "graphtv/chain.hpp"
#include "graphtv/fl1d.hpp"
#include "graphtv/graph.hpp"
#include "graphtv/rng.hpp"
#include "graphtv/wavelets.hpp"

namespace graphtv {

struct DenoiseResult {
    Signal theta_hat;
    double lambda = 0.0;
    std::string method;
    double objective = std::numeric_limits<double>::quiet_NaN();
    double kkt_residual = std::numeric_limits<double>::quiet_NaN();
    int cg_iterations = 0;
    double cg_residual = std::numeric_limits<double>::quiet_NaN();
};

/// 1d fused lasso on the permuted data P y, un-permuted afterward:
/// theta_hat = P^T fl1d(P y, lambda). With use_weights, the chain carries
/// the induced per-edge weights of the weighted graph.
inline DenoiseResult dfs_fused_lasso(const Graph& g, const ChainOrder& c, const Signal& y,
                                     double lambda, bool use_weights = false)
{
    check_signal_length(g, y, "dfs_fused_lasso");
    g.require_connected("dfs_fused_lasso");
    if (c.num_nodes() != g.num_nodes())
        throw validation_error("dfs_fused_lasso: order/graph size mismatch");

    FL1DProblem p;
    p.lambda = lambda;
    p.y.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        p.y[i] = y[static_cast<std::size_t>(c.order[i])];
    if (use_weights) {
        p.weights = c.chain_weights.size() == y.size() - 1 && !c.chain_weights.empty()
                        ? c.chain_weights
                        : induced_chain_weights(g, c);
    }
    FL1DSolution s = solve_fl1d(p);

    DenoiseResult r;
    r.method = "dfs";
    r.lambda = lambda;
    r.objective = s.objective;
    r.kkt_residual = s.kkt_residual;
    r.theta_hat.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        r.theta_hat[static_cast<std::size_t>(c.order[i])] = s.theta[i];
    return r;
}

enum class Combine { Mean, Median };

/// K DFS fused lasso fits on independently seeded random chains (random
/// root, random neighbor order per seed), combined per node by mean or
/// median.
inline DenoiseResult multi_dfs_average(const Graph& g, const Signal& y, double lambda,
                                       const std::vector<std::uint64_t>& seeds,
                                       Combine combine = Combine::Mean,
                                       bool use_weights = false, bool parallel = false)
{
    check_signal_length(g, y, "multi_dfs_average");
    g.require_connected("multi_dfs_average");
    if (seeds.empty()) throw validation_error("multi_dfs_average: need K >= 1 seeds");

    const std::size_t K = seeds.size();
    std::vector<Signal> fits(K);
    auto fit_one = [&](std::size_t k) {
        auto rng = make_rng(derive_seed(seeds[k], 0x726f6fULL));
        NodeId root = static_cast<NodeId>(rng() % static_cast<std::uint64_t>(g.num_nodes()));
        ChainOrder c = dfs_order(g, root, EdgeOrder::Random, derive_seed(seeds[k], 0x6f7264ULL));
        fits[k] = dfs_fused_lasso(g, c, y, lambda, use_weights).theta_hat;
    };
    if (parallel && K > 1) {
        std::vector<std::thread> pool;
        pool.reserve(K);
        for (std::size_t k = 0; k < K; ++k) pool.emplace_back(fit_one, k);
        for (auto& th : pool) th.join();
    } else {
        for (std::size_t k = 0; k < K; ++k) fit_one(k);
    }

    DenoiseResult r;
    r.method = combine == Combine::Mean ? "dfs-avg" : "dfs-med";
    r.lambda = lambda;
    r.theta_hat.assign(y.size(), 0.0);
    if (combine == Combine::Mean) {
        for (const Signal& f : fits)
            for (std::size_t i = 0; i < y.size(); ++i) r.theta_hat[i] += f[i];
        for (double& v : r.theta_hat) v /= static_cast<double>(K);
    } else {
        std::vector<double> buf(K);
        for (std::size_t i = 0; i < y.size(); ++i) {
            for (std::size_t k = 0; k < K; ++k) buf[k] = fits[k][i];
            std::sort(buf.begin(), buf.end());
            r.theta_hat[i] = K % 2 == 1 ? buf[K / 2] : 0.5 * (buf[K / 2 - 1] + buf[K / 2]);
        }
    }
    return r;
}

/// Solves (I + 2 lambda L_G) theta = y by Jacobi-preconditioned conjugate
/// gradient, L_G the (weighted) graph Laplacian. Stops when the residual
/// drops below tol * ||y||_2.
inline DenoiseResult laplacian_smoothing(const Graph& g, const Signal& y, double lambda,
                                         double tol = 1e-8, int max_iter = 0)
{
    check_signal_length(g, y, "laplacian_smoothing");
    g.require_connected("laplacian_smoothing");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw validation_error("laplacian_smoothing: lambda must be finite and >= 0");

    DenoiseResult r;
    r.method = "laplacian";
    r.lambda = lambda;
    if (lambda == 0.0) {
        r.theta_hat = y;
        r.cg_residual = 0.0;
        return r;
    }
    const std::size_t n = y.size();
    if (max_iter <= 0) max_iter = static_cast<int>(std::max<std::size_t>(10 * n, 1000));

    std::vector<double> diag(n, 1.0);
    for (const Edge& e : g.edges()) {
        double w = g.weighted() ? e.weight : 1.0;
        diag[static_cast<std::size_t>(e.u)] += 2.0 * lambda * w;
        diag[static_cast<std::size_t>(e.v)] += 2.0 * lambda * w;
    }
    auto apply = [&](const Signal& v, Signal& out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = v[i];
        for (const Edge& e : g.edges()) {
            double w = g.weighted() ? e.weight : 1.0;
            double d = 2.0 * lambda * w *
                       (v[static_cast<std::size_t>(e.u)] - v[static_cast<std::size_t>(e.v)]);
            out[static_cast<std::size_t>(e.u)] += d;
            out[static_cast<std::size_t>(e.v)] -= d;
        }
    };

    double ynorm = 0.0;
    for (double v : y) ynorm += v * v;
    ynorm = std::sqrt(ynorm);
    if (ynorm == 0.0) {
        r.theta_hat.assign(n, 0.0);
        r.cg_residual = 0.0;
        return r;
    }

    Signal x(n, 0.0), res = y, z(n), p(n), ap(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = res[i] / diag[i];
    p = z;
    double rz = 0.0;
    for (std::size_t i = 0; i < n; ++i) rz += res[i] * z[i];

    int it = 0;
    double rnorm = ynorm;
    for (; it < max_iter; ++it) {
        rnorm = 0.0;
        for (double v : res) rnorm += v * v;
        rnorm = std::sqrt(rnorm);
        if (rnorm <= tol * ynorm) break;
        apply(p, ap);
        double pap = 0.0;
        for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
        double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            res[i] -= alpha * ap[i];
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = res[i] / diag[i];
        double rz_new = 0.0;
        for (std::size_t i = 0; i < n; ++i) rz_new += res[i] * z[i];
        double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    if (rnorm > tol * ynorm)
        throw convergence_error("laplacian_smoothing: CG did not reach tolerance in " +
                                    std::to_string(max_iter) + " iterations",
                                rnorm / ynorm);
    r.theta_hat = std::move(x);
    r.cg_iterations = it;
    r.cg_residual = rnorm / ynorm;
    return r;
}

/// Orthonormal-basis wavelet denoiser: soft-threshold every coefficient of
/// W y at lambda and reconstruct.
inline DenoiseResult wavelet_denoise(const WaveletBasis& basis, const Signal& y, double lambda)
{
    if (static_cast<NodeId>(y.size()) != basis.n)
        throw validation_error("wavelet_denoise: length mismatch");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw validation_error("wavelet_denoise: lambda must be finite and >= 0");
    Signal c = wavelet_transform(basis, y);
    for (double& v : c) {
        if (v > lambda)
            v -= lambda;
        else if (v < -lambda)
            v += lambda;
        else
            v = 0.0;
    }
    DenoiseResult r;
    r.method = "wavelet";
    r.lambda = lambda;
    r.theta_hat = wavelet_reconstruct(basis, c);
    return r;
}

} // namespace graphtv

#endif
