#ifndef GRAPHTV_SIGNALS_HPP
#define GRAPHTV_SIGNALS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "graphtv/graph.hpp"
#include "graphtv/rng.hpp"

namespace graphtv {

namespace detail {

// sets the deviations around the mean so that total_variation(g, theta) hits
// target exactly; errors if the signal is constant but target > 0
inline void rescale_to_tv(const Graph& g, Signal& theta, double target_tv)
{
    if (!(target_tv >= 0.0)) throw validation_error("signal: target_tv must be >= 0");
    double tv = total_variation(g, theta);
    double mean = std::accumulate(theta.begin(), theta.end(), 0.0) /
                  static_cast<double>(theta.size());
    if (tv == 0.0) {
        if (target_tv > 0.0)
            throw validation_error("signal: cannot rescale a constant signal to positive TV");
        return;
    }
    double f = target_tv / tv;
    for (double& v : theta) v = mean + f * (v - mean);
}

} // namespace detail

/// Piecewise-constant signal from repeated BFS balls: pick a uniform random
/// unassigned seed node, grab the floor(n/parts) nearest unassigned nodes by
/// hop distance (ties by discovery order), repeat; the leftover joins the
/// last part. Per-part levels are standard normal draws (or the caller's
/// `levels`, one per part), then deviations are rescaled so the total
/// variation equals target_tv exactly.
inline Signal seeded_partition_signal(const Graph& g, NodeId parts, double target_tv,
                                      std::uint64_t seed,
                                      std::span<const double> levels = {})
{
    g.require_connected("seeded_partition_signal");
    const NodeId n = g.num_nodes();
    if (parts < 1 || parts > n)
        throw validation_error("seeded_partition_signal: parts must be in [1, n]");
    if (!levels.empty() && levels.size() != static_cast<std::size_t>(parts))
        throw validation_error("seeded_partition_signal: need one level per part");

    auto rng = make_rng(derive_seed(seed, 0x706172ULL));
    std::vector<NodeId> part_of(static_cast<std::size_t>(n), kNoNode);
    std::vector<NodeId> unassigned(static_cast<std::size_t>(n));
    std::iota(unassigned.begin(), unassigned.end(), 0);
    const NodeId ball = n / parts;
    std::vector<NodeId> visit_mark(static_cast<std::size_t>(n), -1);

    for (NodeId p = 0; p < parts; ++p) {
        // uniform unassigned seed, then a full-graph BFS (paths may pass
        // through assigned nodes) collecting the nearest unassigned nodes
        std::uniform_int_distribution<std::size_t> pick(0, unassigned.size() - 1);
        NodeId s = unassigned[pick(rng)];
        std::deque<NodeId> queue{s};
        visit_mark[static_cast<std::size_t>(s)] = p;
        part_of[static_cast<std::size_t>(s)] = p;
        NodeId taken = 1;
        while (!queue.empty() && taken < ball) {
            NodeId u = queue.front();
            queue.pop_front();
            for (const auto& a : g.neighbors(u)) {
                if (visit_mark[static_cast<std::size_t>(a.to)] == p) continue;
                visit_mark[static_cast<std::size_t>(a.to)] = p;
                queue.push_back(a.to);
                if (part_of[static_cast<std::size_t>(a.to)] == kNoNode) {
                    part_of[static_cast<std::size_t>(a.to)] = p;
                    if (++taken == ball) break;
                }
            }
        }
        unassigned.erase(std::remove_if(unassigned.begin(), unassigned.end(),
                                        [&](NodeId u) {
                                            return part_of[static_cast<std::size_t>(u)] != kNoNode;
                                        }),
                         unassigned.end());
    }
    // leftover joins the last part
    for (NodeId u : unassigned) part_of[static_cast<std::size_t>(u)] = parts - 1;

    std::vector<double> lv(levels.begin(), levels.end());
    if (lv.empty()) {
        std::normal_distribution<double> level(0.0, 1.0);
        lv.resize(static_cast<std::size_t>(parts));
        for (double& l : lv) l = level(rng);
    }
    Signal theta(static_cast<std::size_t>(n));
    for (NodeId u = 0; u < n; ++u)
        theta[static_cast<std::size_t>(u)] = lv[static_cast<std::size_t>(part_of[static_cast<std::size_t>(u)])];
    detail::rescale_to_tv(g, theta, target_tv);
    return theta;
}

/// Piecewise-constant image on the rows x cols grid: pieces-1 random
/// axis-aligned rectangles at random levels over a zero background,
/// rescaled to target_tv.
inline Signal grid_piecewise_signal(NodeId rows, NodeId cols, NodeId pieces, double target_tv,
                                    std::uint64_t seed)
{
    if (rows < 1 || cols < 1) throw validation_error("grid_piecewise_signal: bad grid");
    if (pieces < 1) throw validation_error("grid_piecewise_signal: pieces must be >= 1");
    Graph g = make_grid(rows, cols);
    Signal theta(static_cast<std::size_t>(rows) * cols, 0.0);
    auto rng = make_rng(derive_seed(seed, 0x677269ULL));
    std::normal_distribution<double> level(0.0, 1.0);
    for (NodeId k = 1; k < pieces; ++k) {
        std::uniform_int_distribution<NodeId> rr(0, rows - 1), cc(0, cols - 1);
        NodeId r0 = rr(rng), r1 = rr(rng), c0 = cc(rng), c1 = cc(rng);
        if (r0 > r1) std::swap(r0, r1);
        if (c0 > c1) std::swap(c0, c1);
        double l = level(rng);
        for (NodeId r = r0; r <= r1; ++r)
            for (NodeId c = c0; c <= c1; ++c)
                theta[static_cast<std::size_t>(r) * cols + c] = l;
    }
    detail::rescale_to_tv(g, theta, target_tv);
    return theta;
}

/// Random tree built FIFO: each dequeued node receives uniform
/// [min_children, max_children] children until n nodes exist.
inline Tree random_tree(NodeId n, std::uint64_t seed, NodeId min_children = 2,
                        NodeId max_children = 10)
{
    if (n < 1) throw validation_error("random_tree: n must be >= 1");
    if (min_children < 1 || max_children < min_children)
        throw validation_error("random_tree: bad children range");
    auto rng = make_rng(derive_seed(seed, 0x747265ULL));
    std::uniform_int_distribution<NodeId> kids(min_children, max_children);

    std::vector<Edge> edges;
    std::vector<NodeId> parent(static_cast<std::size_t>(n), kNoNode);
    std::deque<NodeId> queue{0};
    NodeId next = 1;
    while (next < n) {
        NodeId u = queue.front();
        queue.pop_front();
        NodeId c = kids(rng);
        for (NodeId i = 0; i < c && next < n; ++i) {
            parent[static_cast<std::size_t>(next)] = u;
            edges.push_back({u, next, 1.0});
            queue.push_back(next);
            ++next;
        }
    }
    return Tree{Graph(n, std::move(edges)), 0, std::move(parent)};
}

/// Piecewise-constant signal over a tree with an exact difference-sparsity:
/// plants standard-normal differences on `sparsity` uniformly chosen tree
/// edges, recovers the node values through the tree incidence inverse map
/// (prefix sums from the root, then mean-centering), and rescales to
/// target_tv.
inline Signal tree_piecewise_signal(const Tree& t, double target_tv, NodeId sparsity,
                                    std::uint64_t seed)
{
    validate_tree(t, "tree_piecewise_signal");
    const NodeId n = t.graph.num_nodes();
    if (sparsity < 0 || sparsity > n - 1)
        throw validation_error("tree_piecewise_signal: sparsity must be in [0, n-1]");

    auto rng = make_rng(derive_seed(seed, 0x737061ULL));
    // b[k] is the difference across edge {parent(v), v} for non-root v = order k+1
    std::vector<NodeId> nonroot;
    nonroot.reserve(static_cast<std::size_t>(n) - 1);
    for (NodeId v = 0; v < n; ++v)
        if (v != t.root) nonroot.push_back(v);
    std::shuffle(nonroot.begin(), nonroot.end(), rng);

    std::normal_distribution<double> diff(0.0, 1.0);
    std::vector<double> b(static_cast<std::size_t>(n), 0.0); // indexed by child node
    for (NodeId k = 0; k < sparsity; ++k) {
        double d = diff(rng);
        while (d == 0.0) d = diff(rng);
        b[static_cast<std::size_t>(nonroot[static_cast<std::size_t>(k)])] = d;
    }

    Signal theta(static_cast<std::size_t>(n), 0.0);
    DfsRun run = dfs_traverse(t.graph, t.root);
    for (NodeId u : run.order) {
        if (u == t.root) continue;
        theta[static_cast<std::size_t>(u)] =
            theta[static_cast<std::size_t>(t.parent[static_cast<std::size_t>(u)])] +
            b[static_cast<std::size_t>(u)];
    }
    double mean = std::accumulate(theta.begin(), theta.end(), 0.0) / static_cast<double>(n);
    for (double& v : theta) v -= mean;
    detail::rescale_to_tv(t.graph, theta, target_tv);
    return theta;
}

/// y = theta0 + iid Gaussian(0, sigma^2) noise.
inline Signal add_noise(const Signal& theta0, double sigma, std::uint64_t seed)
{
    if (!(sigma > 0.0)) throw validation_error("add_noise: sigma must be > 0");
    auto rng = make_rng(derive_seed(seed, 0x6e6f69ULL));
    std::normal_distribution<double> eps(0.0, sigma);
    Signal y(theta0.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = theta0[i] + eps(rng);
    return y;
}

/// Signals serialize one value per line in node-id order, 17 significant
/// digits (lossless double round trip).
inline void write_signal(const Signal& s, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open for write: " + path);
    char buf[64];
    for (double v : s) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        out << buf;
    }
    if (!out) throw parse_error("write failed: " + path);
}

inline Signal read_signal(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open signal file: " + path);
    Signal s;
    double v;
    while (in >> v) s.push_back(v);
    if (!in.eof()) throw parse_error("malformed signal file: " + path);
    return s;
}

} // namespace graphtv

#endif
