#ifndef GRAPHTV_CHAIN_HPP
#define GRAPHTV_CHAIN_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "graphtv/graph.hpp"

namespace graphtv {

/// A DFS-induced node ordering: order[i] is the i-th visited node, inverse
/// its inverse permutation, chain_weights the per-chain-edge penalty weights
/// (all 1 for unweighted graphs).
struct ChainOrder {
    std::vector<NodeId> order;
    std::vector<NodeId> inverse;
    std::vector<double> chain_weights;

    NodeId num_nodes() const { return static_cast<NodeId>(order.size()); }
};

inline ChainOrder chain_from_order(std::vector<NodeId> order)
{
    ChainOrder c;
    c.inverse.assign(order.size(), kNoNode);
    for (std::size_t i = 0; i < order.size(); ++i) {
        NodeId v = order[i];
        if (v < 0 || static_cast<std::size_t>(v) >= order.size() ||
            c.inverse[static_cast<std::size_t>(v)] != kNoNode)
            throw validation_error("chain_from_order: not a permutation");
        c.inverse[static_cast<std::size_t>(v)] = static_cast<NodeId>(i);
    }
    c.order = std::move(order);
    c.chain_weights.assign(c.order.empty() ? 0 : c.order.size() - 1, 1.0);
    return c;
}

inline std::vector<double> induced_chain_weights(const Graph& g, const ChainOrder& c);

/// Nodes in first-visit order of a DFS from root. Neighbor visit order is
/// either the input adjacency order or a seeded shuffle. On weighted graphs
/// the induced per-chain-edge weights are filled in.
inline ChainOrder dfs_order(const Graph& g, NodeId root = 0,
                            EdgeOrder edge_order = EdgeOrder::Input, std::uint64_t seed = 0)
{
    DfsRun run = dfs_traverse(g, root, edge_order, seed);
    ChainOrder c = chain_from_order(std::move(run.order));
    if (g.weighted()) c.chain_weights = induced_chain_weights(g, c);
    return c;
}

/// Boustrophedon orders of the rows x cols grid: row-snake and column-snake.
/// Both are valid DFS orders of the grid graph.
inline std::pair<ChainOrder, ChainOrder> snake_orders(NodeId rows, NodeId cols)
{
    if (rows < 1 || cols < 1) throw validation_error("snake_orders: rows, cols must be >= 1");
    std::vector<NodeId> by_row, by_col;
    by_row.reserve(static_cast<std::size_t>(rows) * cols);
    by_col.reserve(static_cast<std::size_t>(rows) * cols);
    for (NodeId r = 0; r < rows; ++r)
        for (NodeId c = 0; c < cols; ++c) {
            NodeId cc = (r % 2 == 0) ? c : cols - 1 - c;
            by_row.push_back(r * cols + cc);
        }
    for (NodeId c = 0; c < cols; ++c)
        for (NodeId r = 0; r < rows; ++r) {
            NodeId rr = (c % 2 == 0) ? r : rows - 1 - r;
            by_col.push_back(rr * cols + c);
        }
    return {chain_from_order(std::move(by_row)), chain_from_order(std::move(by_col))};
}

/// Penalty weight for each chain edge: the graph's edge weight when
/// consecutive order entries are adjacent, otherwise the minimum edge weight
/// present in the graph.
inline std::vector<double> induced_chain_weights(const Graph& g, const ChainOrder& c)
{
    if (c.num_nodes() != g.num_nodes())
        throw validation_error("induced_chain_weights: order/graph size mismatch");
    const double w_min = g.min_edge_weight();
    std::vector<double> w(c.order.size() - 1, w_min);
    for (std::size_t i = 0; i + 1 < c.order.size(); ++i) {
        NodeId u = c.order[i], v = c.order[i + 1];
        for (const auto& a : g.neighbors(u))
            if (a.to == v) {
                w[i] = g.edges()[static_cast<std::size_t>(a.edge)].weight;
                break;
            }
    }
    return w;
}

struct EmbeddingRatios {
    double l1_ratio;
    double l0_ratio;
};

/// Chain-vs-graph roughness ratios: (||D P theta||_1 / ||D_G theta||_1,
/// ||D P theta||_0 / ||D_G theta||_0), using the weighted forms when the
/// graph is weighted. Both are <= 2 for any DFS order.
inline EmbeddingRatios verify_embedding(const Graph& g, const ChainOrder& c, const Signal& theta)
{
    check_signal_length(g, theta, "verify_embedding");
    if (c.num_nodes() != g.num_nodes())
        throw validation_error("verify_embedding: order/graph size mismatch");

    const bool weighted = g.weighted();
    // the checker derives the chain weights itself rather than trusting the
    // caller's copy
    std::vector<double> cw;
    if (weighted) cw = induced_chain_weights(g, c);

    double num1 = 0.0, num0 = 0.0;
    for (std::size_t i = 0; i + 1 < c.order.size(); ++i) {
        double d = std::abs(theta[static_cast<std::size_t>(c.order[i + 1])] -
                            theta[static_cast<std::size_t>(c.order[i])]);
        double w = weighted ? cw[i] : 1.0;
        num1 += w * d;
        if (d != 0.0) num0 += w;
    }
    double den1 = 0.0, den0 = 0.0;
    for (const Edge& e : g.edges()) {
        double d = std::abs(theta[static_cast<std::size_t>(e.u)] -
                            theta[static_cast<std::size_t>(e.v)]);
        double w = weighted ? e.weight : 1.0;
        den1 += w * d;
        if (d != 0.0) den0 += w;
    }
    auto ratio = [](double num, double den, const char* which) {
        if (den == 0.0) {
            if (num == 0.0) return 0.0;
            throw error(std::string("verify_embedding: ") + which +
                        " numerator positive with zero denominator (invariant violation)");
        }
        return num / den;
    };
    return {ratio(num1, den1, "l1"), ratio(num0, den0, "l0")};
}

/// Orders serialize as newline-separated node ids.
inline void write_order(const ChainOrder& c, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open for write: " + path);
    for (NodeId v : c.order) out << v << '\n';
    if (!out) throw parse_error("write failed: " + path);
}

inline ChainOrder read_order(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open order file: " + path);
    std::vector<NodeId> order;
    long long v;
    while (in >> v) order.push_back(static_cast<NodeId>(v));
    return chain_from_order(std::move(order));
}

} // namespace graphtv

#endif
