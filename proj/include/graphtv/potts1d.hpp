#ifndef GRAPHTV_POTTS1D_HPP
#define GRAPHTV_POTTS1D_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "graphtv/chain.hpp"
#include "graphtv/graph.hpp"

namespace graphtv {

/// min over theta of  1/2 ||y - theta||^2 + lambda * #{i : theta_{i+1} != theta_i}
struct Potts1DProblem {
    Signal y;
    double lambda = 0.0;
    // plain O(n^2) DP; lift the guard explicitly for larger inputs
    std::size_t max_n = 100000;

    void validate() const
    {
        if (y.empty()) throw validation_error("potts1d: empty input");
        for (double v : y)
            if (!std::isfinite(v)) throw validation_error("potts1d: y contains NaN/Inf");
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw validation_error("potts1d: lambda must be finite and >= 0");
        if (y.size() > max_n)
            throw validation_error("potts1d: n exceeds max_n guard for the O(n^2) DP");
    }
};

struct PottsSegment {
    std::size_t start; // inclusive
    std::size_t end;   // inclusive
    double level;
};

struct Potts1DSolution {
    Signal theta;
    double objective = 0.0;
    std::vector<PottsSegment> segments;
};

inline double potts1d_objective(const Potts1DProblem& p, const Signal& theta)
{
    double loss = 0.0;
    std::size_t jumps = 0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        double r = p.y[i] - theta[i];
        loss += 0.5 * r * r;
    }
    for (std::size_t i = 0; i + 1 < theta.size(); ++i)
        if (theta[i + 1] != theta[i]) ++jumps;
    return loss + p.lambda * static_cast<double>(jumps);
}

/// Optimal-partition dynamic program: best(i) = min_{j<=i} best(j-1) +
/// sse(j,i) + lambda*1{j>1}, with segment costs from prefix sums. Segment
/// levels are exact means. When two split points tie within 1e-12, the later
/// one wins (fewer, longer left segments).
inline Potts1DSolution solve_potts1d(const Potts1DProblem& p)
{
    p.validate();
    const std::size_t n = p.y.size();
    const Signal& y = p.y;

    Potts1DSolution sol;
    if (p.lambda == 0.0) {
        sol.theta = y;
        for (std::size_t i = 0; i < n; ++i) sol.segments.push_back({i, i, y[i]});
        sol.objective = 0.0;
        return sol;
    }

    std::vector<double> s(n + 1, 0.0), s2(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        s[i + 1] = s[i] + y[i];
        s2[i + 1] = s2[i] + y[i] * y[i];
    }
    // 1/2 * sum of squared deviations from the mean on y[j..i]
    auto sse = [&](std::size_t j, std::size_t i) {
        double len = static_cast<double>(i - j + 1);
        double sum = s[i + 1] - s[j];
        return 0.5 * ((s2[i + 1] - s2[j]) - sum * sum / len);
    };

    std::vector<double> best(n, 0.0);
    std::vector<std::size_t> arg(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        best[i] = sse(0, i);
        arg[i] = 0;
        for (std::size_t j = 1; j <= i; ++j) {
            double cand = best[j - 1] + sse(j, i) + p.lambda;
            // j ascends, so taking ties keeps the latest split
            if (cand <= best[i] + 1e-12) {
                best[i] = std::min(best[i], cand);
                arg[i] = j;
            }
        }
    }

    sol.theta.resize(n);
    std::size_t end = n - 1;
    while (true) {
        std::size_t start = arg[end];
        double level = (s[end + 1] - s[start]) / static_cast<double>(end - start + 1);
        for (std::size_t i = start; i <= end; ++i) sol.theta[i] = level;
        sol.segments.push_back({start, end, level});
        if (start == 0) break;
        end = start - 1;
    }
    std::reverse(sol.segments.begin(), sol.segments.end());
    sol.objective = potts1d_objective(p, sol.theta);
    return sol;
}

/// Potts on the permuted data P y, un-permuted afterward. The DFS chain
/// reduction for the (intractable) graph Potts objective.
inline Signal dfs_potts(const Graph& g, const ChainOrder& c, const Signal& y, double lambda,
                        std::size_t max_n = 100000)
{
    check_signal_length(g, y, "dfs_potts");
    g.require_connected("dfs_potts");
    if (c.num_nodes() != g.num_nodes())
        throw validation_error("dfs_potts: order/graph size mismatch");
    Potts1DProblem p;
    p.lambda = lambda;
    p.max_n = max_n;
    p.y.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        p.y[i] = y[static_cast<std::size_t>(c.order[i])];
    Potts1DSolution sol = solve_potts1d(p);
    Signal out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        out[static_cast<std::size_t>(c.order[i])] = sol.theta[i];
    return out;
}

} // namespace graphtv

#endif
