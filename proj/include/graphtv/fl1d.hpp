#ifndef GRAPHTV_FL1D_HPP
#define GRAPHTV_FL1D_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphtv/graph.hpp"

namespace graphtv {

/// min over theta of  1/2 ||y - theta||^2 + lambda * sum_i w_i |theta_{i+1} - theta_i|
/// weights default to all ones when empty.
struct FL1DProblem {
    Signal y;
    double lambda = 0.0;
    std::vector<double> weights; // empty or length n-1, strictly positive

    void validate() const
    {
        if (y.empty()) throw validation_error("fl1d: empty input");
        for (double v : y)
            if (!std::isfinite(v)) throw validation_error("fl1d: y contains NaN/Inf");
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw validation_error("fl1d: lambda must be finite and >= 0");
        if (!weights.empty()) {
            if (weights.size() != y.size() - 1)
                throw validation_error("fl1d: weights must have length n-1");
            for (double w : weights)
                if (!(w > 0.0) || !std::isfinite(w))
                    throw validation_error("fl1d: weights must be finite and > 0");
        }
    }

    double edge_penalty(std::size_t i) const
    {
        return weights.empty() ? lambda : lambda * weights[i];
    }
};

struct FL1DSolution {
    Signal theta;
    double objective = 0.0;
    double kkt_residual = 0.0;
};

inline double fl1d_objective(const FL1DProblem& p, const Signal& theta)
{
    if (theta.size() != p.y.size()) throw validation_error("fl1d_objective: length mismatch");
    double loss = 0.0, pen = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        double r = p.y[i] - theta[i];
        loss += 0.5 * r * r;
    }
    for (std::size_t i = 0; i + 1 < theta.size(); ++i)
        pen += p.edge_penalty(i) * std::abs(theta[i + 1] - theta[i]);
    return loss + pen;
}

/// Optimality certificate. The running-sum duals u_i = sum_{j<=i} (y_j - theta_j)
/// must satisfy |u_i| <= lambda w_i, with u_i = -lambda w_i sign(theta_{i+1}-theta_i)
/// on non-fused edges, and u_n = 0. Returns the largest violation.
inline double kkt_residual(const FL1DProblem& p, const Signal& theta)
{
    if (theta.size() != p.y.size()) throw validation_error("kkt_residual: length mismatch");
    const std::size_t n = theta.size();
    double res = 0.0;
    double u = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        u += p.y[i] - theta[i];
        const double lam = p.edge_penalty(i);
        const double diff = theta[i + 1] - theta[i];
        if (diff != 0.0)
            res = std::max(res, std::abs(u + lam * (diff > 0.0 ? 1.0 : -1.0)));
        else
            res = std::max(res, std::abs(u) > lam ? std::abs(u) - lam : 0.0);
    }
    u += p.y[n - 1] - theta[n - 1];
    res = std::max(res, std::abs(u));
    return res;
}

/// Exact minimizer by dynamic programming over clipped piecewise-linear
/// derivatives, O(n) time and memory. Handles per-edge penalty weights by
/// clipping at +-lambda*w_i in step i.
inline FL1DSolution solve_fl1d(const FL1DProblem& p)
{
    p.validate();
    const std::size_t n = p.y.size();
    const Signal& y = p.y;

    FL1DSolution sol;
    if (n == 1 || p.lambda == 0.0) {
        sol.theta = y;
        sol.objective = fl1d_objective(p, sol.theta);
        sol.kkt_residual = kkt_residual(p, sol.theta);
        return sol;
    }

    // derivative breakpoints with the (slope, intercept) increments they
    // carry; l..r is the live window, which grows by at most one slot per
    // side per step, so 2n slots suffice without reallocation
    struct Knot {
        double x, a, b;
    };
    std::vector<Knot> knot(2 * n);
    std::vector<double> tm(n - 1), tp(n - 1);

    double lam = p.edge_penalty(0);
    tm[0] = y[0] - lam;
    tp[0] = y[0] + lam;
    std::size_t l = n - 1, r = n;
    knot[l] = {tm[0], 1.0, -y[0] + lam};
    knot[r] = {tp[0], -1.0, y[0] + lam};
    double afirst = 1.0, bfirst = -lam - y[1];
    double alast = -1.0, blast = -lam + y[1];

    for (std::size_t k = 1; k + 1 < n; ++k) {
        lam = p.edge_penalty(k);

        // walk up from the left until the derivative exceeds -lam
        double alo = afirst, blo = bfirst;
        std::size_t lo = l;
        while (lo <= r && alo * knot[lo].x + blo <= -lam) {
            alo += knot[lo].a;
            blo += knot[lo].b;
            ++lo;
        }
        tm[k] = (-lam - blo) / alo;
        l = lo - 1;
        knot[l].x = tm[k]; // the right walk below may probe this position

        // walk down from the right until the derivative drops below +lam
        double ahi = alast, bhi = blast;
        std::size_t hi = r;
        while (hi >= l && -ahi * knot[hi].x - bhi >= lam) {
            ahi += knot[hi].a;
            bhi += knot[hi].b;
            --hi;
        }
        tp[k] = (lam + bhi) / (-ahi);
        r = hi + 1;

        knot[l].a = alo;
        knot[l].b = blo + lam;
        knot[r] = {tp[k], ahi, bhi + lam};
        afirst = 1.0;
        bfirst = -lam - y[k + 1];
        alast = -1.0;
        blast = -lam + y[k + 1];
    }

    // last coefficient sits where the full derivative vanishes
    double alo = afirst, blo = bfirst;
    std::size_t lo = l;
    while (lo <= r && alo * knot[lo].x + blo <= 0.0) {
        alo += knot[lo].a;
        blo += knot[lo].b;
        ++lo;
    }
    sol.theta.resize(n);
    sol.theta[n - 1] = -blo / alo;
    for (std::size_t k = n - 1; k-- > 0;) {
        double next = sol.theta[k + 1];
        if (next > tp[k])
            sol.theta[k] = tp[k];
        else if (next < tm[k])
            sol.theta[k] = tm[k];
        else
            sol.theta[k] = next;
    }
    sol.objective = fl1d_objective(p, sol.theta);
    sol.kkt_residual = kkt_residual(p, sol.theta);
    return sol;
}

/// Independent exhaustive oracle: enumerates every sign pattern in
/// {-1,0,+1}^(n-1), solves the pattern's stationarity equations in closed
/// form (block means shifted by the boundary subgradients) and returns the
/// candidate with the smallest true objective. The global minimizer is
/// always among the candidates, since its own pattern reproduces it.
/// Exponential; refuses n > 16.
inline FL1DSolution solve_fl1d_oracle(const FL1DProblem& p)
{
    p.validate();
    const std::size_t n = p.y.size();
    if (n > 16) throw validation_error("solve_fl1d_oracle: n too large (max 16)");

    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + p.y[i];

    FL1DSolution best;
    best.objective = std::numeric_limits<double>::infinity();
    Signal theta(n);
    std::vector<int> sign(n > 0 ? n - 1 : 0, -1);

    std::size_t total = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            sign[i] = static_cast<int>(c % 3) - 1;
            c /= 3;
        }
        // blocks are maximal runs of sign==0 edges; stationarity gives
        // c_B = mean(y_B) + (lam_b s_b - lam_{a-1} s_{a-1}) / |B|
        std::size_t a = 0;
        while (a < n) {
            std::size_t bnd = a;
            while (bnd + 1 < n && sign[bnd] == 0) ++bnd;
            double left = (a == 0) ? 0.0 : p.edge_penalty(a - 1) * sign[a - 1];
            double right = (bnd + 1 == n) ? 0.0 : p.edge_penalty(bnd) * sign[bnd];
            double len = static_cast<double>(bnd - a + 1);
            double level = (prefix[bnd + 1] - prefix[a]) / len + (right - left) / len;
            for (std::size_t j = a; j <= bnd; ++j) theta[j] = level;
            a = bnd + 1;
        }
        double obj = fl1d_objective(p, theta);
        if (obj < best.objective) {
            best.objective = obj;
            best.theta = theta;
        }
    }
    best.kkt_residual = kkt_residual(p, best.theta);
    return best;
}

} // namespace graphtv

#endif
