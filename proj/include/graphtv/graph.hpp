#ifndef GRAPHTV_GRAPH_HPP
#define GRAPHTV_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphtv/rng.hpp"

namespace graphtv {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// bad sizes, broken preconditions, malformed arguments
struct validation_error : error {
    using error::error;
};
// unreadable files, malformed lines (message carries the line number)
struct parse_error : error {
    using error::error;
};
// iterative solver ran out of iterations; message carries the residual
struct convergence_error : error {
    double residual;
    convergence_error(const std::string& msg, double r) : error(msg), residual(r) {}
};

using NodeId = std::int32_t;
using Signal = std::vector<double>;

constexpr NodeId kNoNode = -1;

struct Edge {
    NodeId u;
    NodeId v;
    double weight = 1.0;
};

/// Undirected graph with contiguous 0-based node ids, CSR adjacency and
/// optional nonnegative edge weights. Immutable after construction.
class Graph {
  public:
    struct AdjEntry {
        NodeId to;
        std::int32_t edge; // index into edges()
    };

    Graph() = default;

    // Drops self-loops, collapses duplicate edges (first weight wins),
    // rejects negative weights and out-of-range endpoints.
    Graph(NodeId n_nodes, std::vector<Edge> edge_list, bool weighted = false)
        : weighted_(weighted)
    {
        if (n_nodes < 0) throw validation_error("graph: negative node count");
        n_ = n_nodes;
        original_ids_.resize(static_cast<std::size_t>(n_));
        std::iota(original_ids_.begin(), original_ids_.end(), std::int64_t{0});
        build(std::move(edge_list));
    }

    Graph(NodeId n_nodes, std::vector<Edge> edge_list, bool weighted,
          std::vector<std::int64_t> original_ids)
        : weighted_(weighted)
    {
        n_ = n_nodes;
        original_ids_ = std::move(original_ids);
        build(std::move(edge_list));
    }

    NodeId num_nodes() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }
    bool weighted() const { return weighted_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::int64_t>& original_ids() const { return original_ids_; }

    std::span<const AdjEntry> neighbors(NodeId u) const
    {
        return {adj_.data() + offsets_[static_cast<std::size_t>(u)],
                adj_.data() + offsets_[static_cast<std::size_t>(u) + 1]};
    }

    NodeId degree(NodeId u) const
    {
        return static_cast<NodeId>(offsets_[static_cast<std::size_t>(u) + 1] -
                                   offsets_[static_cast<std::size_t>(u)]);
    }

    NodeId max_degree() const
    {
        NodeId d = 0;
        for (NodeId u = 0; u < n_; ++u) d = std::max(d, degree(u));
        return d;
    }

    double min_edge_weight() const
    {
        double w = std::numeric_limits<double>::infinity();
        for (const Edge& e : edges_) w = std::min(w, e.weight);
        return w;
    }

    bool is_connected() const
    {
        if (n_ == 0) return false;
        std::vector<char> seen(static_cast<std::size_t>(n_), 0);
        std::vector<NodeId> stack{0};
        seen[0] = 1;
        NodeId count = 1;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (const AdjEntry& a : neighbors(u)) {
                if (!seen[static_cast<std::size_t>(a.to)]) {
                    seen[static_cast<std::size_t>(a.to)] = 1;
                    ++count;
                    stack.push_back(a.to);
                }
            }
        }
        return count == n_;
    }

    void require_connected(const char* who) const
    {
        if (!is_connected())
            throw validation_error(std::string(who) + ": graph must be connected");
    }

  private:
    void build(std::vector<Edge> raw)
    {
        // dedup by unordered endpoint pair; first occurrence wins
        struct Keyed {
            NodeId a, b;
            std::size_t idx;
            double w;
        };
        std::vector<Keyed> keyed;
        keyed.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const Edge& e = raw[i];
            if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
                throw validation_error("graph: edge endpoint out of range");
            if (e.weight < 0.0 || !std::isfinite(e.weight))
                throw validation_error("graph: edge weight must be finite and >= 0");
            if (e.u == e.v) continue; // self-loop
            keyed.push_back({std::min(e.u, e.v), std::max(e.u, e.v), i, e.weight});
        }
        std::sort(keyed.begin(), keyed.end(), [](const Keyed& x, const Keyed& y) {
            if (x.a != y.a) return x.a < y.a;
            if (x.b != y.b) return x.b < y.b;
            return x.idx < y.idx;
        });
        edges_.clear();
        for (std::size_t i = 0; i < keyed.size(); ++i) {
            if (i > 0 && keyed[i].a == keyed[i - 1].a && keyed[i].b == keyed[i - 1].b)
                continue;
            edges_.push_back({keyed[i].a, keyed[i].b, keyed[i].w});
        }
        // edges_ kept in (min,max) sorted order; rebuild CSR
        offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (const Edge& e : edges_) {
            ++offsets_[static_cast<std::size_t>(e.u) + 1];
            ++offsets_[static_cast<std::size_t>(e.v) + 1];
        }
        for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
        adj_.resize(2 * edges_.size());
        std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
        for (std::size_t ei = 0; ei < edges_.size(); ++ei) {
            const Edge& e = edges_[ei];
            adj_[fill[static_cast<std::size_t>(e.u)]++] = {e.v, static_cast<std::int32_t>(ei)};
            adj_[fill[static_cast<std::size_t>(e.v)]++] = {e.u, static_cast<std::int32_t>(ei)};
        }
    }

    NodeId n_ = 0;
    bool weighted_ = false;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<AdjEntry> adj_;
    std::vector<std::int64_t> original_ids_;
};

/// Parses a whitespace-separated edge list (`u v [w]`, `#` comments, arbitrary
/// nonnegative integer ids). Ids are remapped to 0..n-1 in order of first
/// appearance; the original ids are retained in Graph::original_ids().
inline Graph load_edge_list(const std::string& path, bool weighted = false)
{
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open edge list file: " + path);

    std::vector<Edge> edges;
    std::vector<std::int64_t> originals;
    std::unordered_map<std::int64_t, NodeId> remap;
    auto intern = [&](std::int64_t id) {
        auto it = remap.find(id);
        if (it != remap.end()) return it->second;
        NodeId nid = static_cast<NodeId>(originals.size());
        remap.emplace(id, nid);
        originals.push_back(id);
        return nid;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream ls(line);
        std::int64_t u, v;
        if (!(ls >> u >> v) || u < 0 || v < 0)
            throw parse_error(path + ":" + std::to_string(lineno) + ": expected `u v [w]`");
        double w = 1.0;
        if (weighted) {
            if (ls >> w) {
                if (!(w >= 0.0) || !std::isfinite(w))
                    throw validation_error(path + ":" + std::to_string(lineno) +
                                           ": edge weight must be finite and >= 0");
            } else {
                w = 1.0; // weight column optional even in weighted mode
            }
        }
        std::string trailing;
        if (!weighted && (ls >> trailing) && trailing[0] != '#') {
            // third column present but ignored in unweighted mode
        }
        edges.push_back({intern(u), intern(v), w});
    }
    const auto n = static_cast<NodeId>(originals.size());
    return Graph(n, std::move(edges), weighted, std::move(originals));
}

/// rows x cols 4-neighbor grid, node (r,c) = r*cols + c.
inline Graph make_grid(NodeId rows, NodeId cols)
{
    if (rows < 1 || cols < 1) throw validation_error("make_grid: rows, cols must be >= 1");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(rows) * cols * 2);
    for (NodeId r = 0; r < rows; ++r)
        for (NodeId c = 0; c < cols; ++c) {
            NodeId id = r * cols + c;
            if (c + 1 < cols) edges.push_back({id, id + 1, 1.0});
            if (r + 1 < rows) edges.push_back({id, id + cols, 1.0});
        }
    return Graph(rows * cols, std::move(edges));
}

/// Induced subgraph on the largest connected component; ties broken by the
/// component containing the smallest original id. Ids are remapped densely.
inline Graph largest_connected_component(const Graph& g)
{
    if (g.num_nodes() == 0) throw validation_error("largest_connected_component: empty graph");
    const NodeId n = g.num_nodes();
    std::vector<NodeId> comp(static_cast<std::size_t>(n), kNoNode);
    NodeId n_comps = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[static_cast<std::size_t>(s)] != kNoNode) continue;
        std::vector<NodeId> stack{s};
        comp[static_cast<std::size_t>(s)] = n_comps;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (const auto& a : g.neighbors(u))
                if (comp[static_cast<std::size_t>(a.to)] == kNoNode) {
                    comp[static_cast<std::size_t>(a.to)] = n_comps;
                    stack.push_back(a.to);
                }
        }
        ++n_comps;
    }
    std::vector<NodeId> size(static_cast<std::size_t>(n_comps), 0);
    std::vector<std::int64_t> min_orig(static_cast<std::size_t>(n_comps),
                                       std::numeric_limits<std::int64_t>::max());
    for (NodeId u = 0; u < n; ++u) {
        NodeId c = comp[static_cast<std::size_t>(u)];
        ++size[static_cast<std::size_t>(c)];
        min_orig[static_cast<std::size_t>(c)] =
            std::min(min_orig[static_cast<std::size_t>(c)], g.original_ids()[static_cast<std::size_t>(u)]);
    }
    NodeId best = 0;
    for (NodeId c = 1; c < n_comps; ++c) {
        if (size[static_cast<std::size_t>(c)] > size[static_cast<std::size_t>(best)] ||
            (size[static_cast<std::size_t>(c)] == size[static_cast<std::size_t>(best)] &&
             min_orig[static_cast<std::size_t>(c)] < min_orig[static_cast<std::size_t>(best)]))
            best = c;
    }
    std::vector<NodeId> to_new(static_cast<std::size_t>(n), kNoNode);
    std::vector<std::int64_t> originals;
    NodeId kept = 0;
    for (NodeId u = 0; u < n; ++u)
        if (comp[static_cast<std::size_t>(u)] == best) {
            to_new[static_cast<std::size_t>(u)] = kept++;
            originals.push_back(g.original_ids()[static_cast<std::size_t>(u)]);
        }
    std::vector<Edge> edges;
    for (const Edge& e : g.edges())
        if (comp[static_cast<std::size_t>(e.u)] == best)
            edges.push_back({to_new[static_cast<std::size_t>(e.u)],
                             to_new[static_cast<std::size_t>(e.v)], e.weight});
    return Graph(kept, std::move(edges), g.weighted(), std::move(originals));
}

inline void check_signal_length(const Graph& g, const Signal& theta, const char* who)
{
    if (static_cast<NodeId>(theta.size()) != g.num_nodes())
        throw validation_error(std::string(who) + ": signal length " +
                               std::to_string(theta.size()) + " != node count " +
                               std::to_string(g.num_nodes()));
}

/// Sum over edges of |theta_u - theta_v| (times w_e when `weighted`).
inline double total_variation(const Graph& g, const Signal& theta, bool weighted = false)
{
    check_signal_length(g, theta, "total_variation");
    double tv = 0.0;
    for (const Edge& e : g.edges()) {
        double d = std::abs(theta[static_cast<std::size_t>(e.u)] -
                            theta[static_cast<std::size_t>(e.v)]);
        tv += weighted ? e.weight * d : d;
    }
    return tv;
}

/// Number of edges whose endpoint difference exceeds tol (default exact).
inline std::size_t cut_metric(const Graph& g, const Signal& theta, double tol = 0.0)
{
    check_signal_length(g, theta, "cut_metric");
    std::size_t k = 0;
    for (const Edge& e : g.edges())
        if (std::abs(theta[static_cast<std::size_t>(e.u)] -
                     theta[static_cast<std::size_t>(e.v)]) > tol)
            ++k;
    return k;
}

/// Number of constant pieces of theta: connected components of (V, Z) where
/// Z keeps edges with |difference| <= tol.
inline std::size_t piece_count(const Graph& g, const Signal& theta, double tol = 0.0)
{
    check_signal_length(g, theta, "piece_count");
    g.require_connected("piece_count");
    std::vector<NodeId> parent(theta.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](NodeId x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    std::size_t pieces = theta.size();
    for (const Edge& e : g.edges()) {
        if (std::abs(theta[static_cast<std::size_t>(e.u)] -
                     theta[static_cast<std::size_t>(e.v)]) <= tol) {
            NodeId ru = find(e.u), rv = find(e.v);
            if (ru != rv) {
                parent[static_cast<std::size_t>(ru)] = rv;
                --pieces;
            }
        }
    }
    return pieces;
}

/// Rooted spanning tree: the underlying Graph plus a parent map
/// (parent[root] = kNoNode).
struct Tree {
    Graph graph;
    NodeId root = 0;
    std::vector<NodeId> parent;

    NodeId num_nodes() const { return graph.num_nodes(); }
};

inline void validate_tree(const Tree& t, const char* who)
{
    const NodeId n = t.graph.num_nodes();
    if (n == 0) throw validation_error(std::string(who) + ": empty tree");
    if (t.graph.num_edges() != static_cast<std::size_t>(n) - 1)
        throw validation_error(std::string(who) + ": tree must have n-1 edges");
    if (!t.graph.is_connected())
        throw validation_error(std::string(who) + ": tree must be connected");
    if (t.root < 0 || t.root >= n || static_cast<NodeId>(t.parent.size()) != n ||
        t.parent[static_cast<std::size_t>(t.root)] != kNoNode)
        throw validation_error(std::string(who) + ": inconsistent root/parent map");
}

enum class EdgeOrder { Input, Random };

/// One depth-first traversal: first-visit order, parent map, and per tree
/// edge the number of times the traversal walked it (descend + backtrack).
struct DfsRun {
    std::vector<NodeId> order;
    std::vector<NodeId> parent;
    std::vector<std::uint8_t> tree_edge_visits; // indexed by child node; root slot unused
};

inline DfsRun dfs_traverse(const Graph& g, NodeId root, EdgeOrder edge_order = EdgeOrder::Input,
                           std::uint64_t seed = 0)
{
    g.require_connected("dfs");
    const NodeId n = g.num_nodes();
    if (root < 0 || root >= n) throw validation_error("dfs: root out of range");

    // flattened neighbor lists so the visit order can be shuffled per node
    std::vector<std::size_t> off(static_cast<std::size_t>(n) + 1, 0);
    std::vector<NodeId> nbr(2 * g.num_edges());
    {
        std::size_t pos = 0;
        for (NodeId u = 0; u < n; ++u) {
            off[static_cast<std::size_t>(u)] = pos;
            for (const auto& a : g.neighbors(u)) nbr[pos++] = a.to;
        }
        off[static_cast<std::size_t>(n)] = pos;
        if (edge_order == EdgeOrder::Random) {
            auto rng = make_rng(seed);
            for (NodeId u = 0; u < n; ++u)
                std::shuffle(nbr.begin() + static_cast<std::ptrdiff_t>(off[static_cast<std::size_t>(u)]),
                             nbr.begin() + static_cast<std::ptrdiff_t>(off[static_cast<std::size_t>(u) + 1]),
                             rng);
        }
    }

    DfsRun run;
    run.order.reserve(static_cast<std::size_t>(n));
    run.parent.assign(static_cast<std::size_t>(n), kNoNode);
    run.tree_edge_visits.assign(static_cast<std::size_t>(n), 0);
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    // iterative DFS with a resumable cursor per stack entry; survives n ~ 1e6
    std::vector<std::pair<NodeId, std::size_t>> stack;
    stack.reserve(static_cast<std::size_t>(n));
    visited[static_cast<std::size_t>(root)] = 1;
    run.order.push_back(root);
    stack.emplace_back(root, off[static_cast<std::size_t>(root)]);
    while (!stack.empty()) {
        auto& [u, cursor] = stack.back();
        bool descended = false;
        while (cursor < off[static_cast<std::size_t>(u) + 1]) {
            NodeId v = nbr[cursor++];
            if (!visited[static_cast<std::size_t>(v)]) {
                visited[static_cast<std::size_t>(v)] = 1;
                run.parent[static_cast<std::size_t>(v)] = u;
                ++run.tree_edge_visits[static_cast<std::size_t>(v)];
                run.order.push_back(v);
                stack.emplace_back(v, off[static_cast<std::size_t>(v)]);
                descended = true;
                break;
            }
        }
        if (!descended) {
            NodeId done = stack.back().first;
            stack.pop_back();
            if (done != root) ++run.tree_edge_visits[static_cast<std::size_t>(done)];
        }
    }
    return run;
}

inline Tree tree_from_parent(const Graph& g, NodeId root, const std::vector<NodeId>& parent)
{
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(g.num_nodes()) - 1);
    // carry the source graph's weight on each kept edge
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        NodeId p = parent[static_cast<std::size_t>(v)];
        if (p == kNoNode) continue;
        double w = 1.0;
        for (const auto& a : g.neighbors(v))
            if (a.to == p) {
                w = g.edges()[static_cast<std::size_t>(a.edge)].weight;
                break;
            }
        edges.push_back({p, v, w});
    }
    Tree t{Graph(g.num_nodes(), std::move(edges), g.weighted()), root, parent};
    return t;
}

inline Tree dfs_spanning_tree(const Graph& g, NodeId root = 0,
                              EdgeOrder edge_order = EdgeOrder::Input, std::uint64_t seed = 0)
{
    DfsRun run = dfs_traverse(g, root, edge_order, seed);
    return tree_from_parent(g, root, run.parent);
}

namespace detail {

class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n)
    {
        std::iota(parent_.begin(), parent_.end(), NodeId{0});
    }
    NodeId find(NodeId x)
    {
        while (parent_[static_cast<std::size_t>(x)] != x) {
            parent_[static_cast<std::size_t>(x)] =
                parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
            x = parent_[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(NodeId a, NodeId b)
    {
        NodeId ra = find(a), rb = find(b);
        if (ra == rb) return false;
        parent_[static_cast<std::size_t>(ra)] = rb;
        return true;
    }

  private:
    std::vector<NodeId> parent_;
};

inline Tree kruskal_tree(const Graph& g, const std::vector<std::size_t>& edge_rank)
{
    UnionFind uf(static_cast<std::size_t>(g.num_nodes()));
    std::vector<Edge> kept;
    kept.reserve(static_cast<std::size_t>(g.num_nodes()) - 1);
    for (std::size_t r : edge_rank) {
        const Edge& e = g.edges()[r];
        if (uf.unite(e.u, e.v)) kept.push_back(e);
    }
    Graph tg(g.num_nodes(), std::move(kept), g.weighted());
    // root at 0; derive parent map by a traversal of the kept edges
    DfsRun run = dfs_traverse(tg, 0);
    return Tree{std::move(tg), 0, std::move(run.parent)};
}

} // namespace detail

/// Spanning tree maximizing total edge weight (Kruskal on negated weights,
/// ties broken by edge input index), rooted at 0.
inline Tree maximum_spanning_tree(const Graph& g)
{
    g.require_connected("maximum_spanning_tree");
    std::vector<std::size_t> rank(g.num_edges());
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
        return g.edges()[a].weight > g.edges()[b].weight;
    });
    return detail::kruskal_tree(g, rank);
}

/// Uniform-ish random spanning tree: Kruskal on seeded random edge weights.
inline Tree random_spanning_tree(const Graph& g, std::uint64_t seed)
{
    g.require_connected("random_spanning_tree");
    auto rng = make_rng(derive_seed(seed, 0x7265ULL));
    std::vector<std::size_t> rank(g.num_edges());
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::shuffle(rank.begin(), rank.end(), rng);
    return detail::kruskal_tree(g, rank);
}

/// Small dense integer matrix for the exact tree-incidence identities.
struct IntMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<int> data;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}
    int& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    int at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

inline IntMatrix int_matmul(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols != b.rows) throw validation_error("int_matmul: shape mismatch");
    IntMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            int aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

/// A_T for a tree rooted at node 0: (A_T)_{ij} = 1 iff j lies on the path
/// from the root to i. Inverse of [e_1^T; grad_T] with grad_T row i-1 being
/// edge {parent(i), i}.
inline IntMatrix tree_incidence_inverse(const Tree& t)
{
    validate_tree(t, "tree_incidence_inverse");
    if (t.root != 0)
        throw validation_error("tree_incidence_inverse: tree must be rooted at node 0");
    const auto n = static_cast<std::size_t>(t.graph.num_nodes());
    IntMatrix a(n, n);
    // row i = row of parent(i) plus own column; fill in a root-first order
    std::vector<NodeId> order(n);
    {
        DfsRun run = dfs_traverse(t.graph, t.root);
        order = run.order;
    }
    for (NodeId u : order) {
        auto i = static_cast<std::size_t>(u);
        NodeId p = t.parent[i];
        if (p != kNoNode)
            for (std::size_t j = 0; j < n; ++j) a.at(i, j) = a.at(static_cast<std::size_t>(p), j);
        a.at(i, i) = 1;
    }
    return a;
}

/// The canonical row order of grad_T used throughout: row k corresponds to
/// the edge {parent(node), node} for node = nonroot_nodes()[k], i.e. nodes
/// 1..n-1 when the root is 0 (matching tree_incidence_inverse).
inline IntMatrix tree_augmented_incidence(const Tree& t)
{
    validate_tree(t, "tree_augmented_incidence");
    if (t.root != 0)
        throw validation_error("tree_augmented_incidence: tree must be rooted at node 0");
    const auto n = static_cast<std::size_t>(t.graph.num_nodes());
    IntMatrix m(n, n);
    m.at(0, 0) = 1; // e_1^T row
    for (std::size_t i = 1; i < n; ++i) {
        m.at(i, i) = 1;
        m.at(i, static_cast<std::size_t>(t.parent[i])) = -1;
    }
    return m;
}

/// Applies the pseudoinverse of grad_T to b (length n-1, entry k for edge
/// {parent(k+1), k+1}): x = (I - 11^T/n) A_T (0; b), computed in O(n) by
/// prefix sums down the tree.
inline Signal tree_pseudoinverse_apply(const Tree& t, std::span<const double> b)
{
    validate_tree(t, "tree_pseudoinverse_apply");
    if (t.root != 0)
        throw validation_error("tree_pseudoinverse_apply: tree must be rooted at node 0");
    const auto n = static_cast<std::size_t>(t.graph.num_nodes());
    if (b.size() != n - 1) throw validation_error("tree_pseudoinverse_apply: bad b length");
    Signal x(n, 0.0);
    DfsRun run = dfs_traverse(t.graph, t.root);
    for (NodeId u : run.order) {
        if (u == t.root) continue;
        auto i = static_cast<std::size_t>(u);
        x[i] = x[static_cast<std::size_t>(t.parent[i])] + b[i - 1];
    }
    double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    for (double& v : x) v -= mean;
    return x;
}

/// Partitions the tree's nodes into parts of size in [k, k*(d_max+1)] with
/// exactly (parts-1) crossing edges, by repeatedly cutting off the smallest
/// single-cut subtree of size >= k and merging the final remainder into the
/// last part.
inline std::vector<std::vector<NodeId>> tree_partition(const Tree& t, NodeId k)
{
    validate_tree(t, "tree_partition");
    const NodeId n = t.graph.num_nodes();
    if (k < 1 || k > n) throw validation_error("tree_partition: k out of range");

    std::vector<char> removed(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<NodeId>> parts;
    NodeId remaining = n;
    NodeId cur_root = t.root;

    while (remaining > k) {
        // rooted structure (order, parent, subtree sizes) of the remaining tree
        std::vector<NodeId> order;
        order.reserve(static_cast<std::size_t>(remaining));
        std::vector<NodeId> parent(static_cast<std::size_t>(n), kNoNode);
        {
            std::vector<char> seen(static_cast<std::size_t>(n), 0);
            std::vector<NodeId> stack{cur_root};
            seen[static_cast<std::size_t>(cur_root)] = 1;
            while (!stack.empty()) {
                NodeId u = stack.back();
                stack.pop_back();
                order.push_back(u);
                for (const auto& a : t.graph.neighbors(u)) {
                    if (removed[static_cast<std::size_t>(a.to)] || seen[static_cast<std::size_t>(a.to)])
                        continue;
                    seen[static_cast<std::size_t>(a.to)] = 1;
                    parent[static_cast<std::size_t>(a.to)] = u;
                    stack.push_back(a.to);
                }
            }
        }
        std::vector<NodeId> size(static_cast<std::size_t>(n), 1);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            NodeId p = parent[static_cast<std::size_t>(*it)];
            if (p != kNoNode) size[static_cast<std::size_t>(p)] += size[static_cast<std::size_t>(*it)];
        }

        // each remaining edge {parent(v), v} offers two single-cut candidates:
        // the subtree below v and its complement; take the smallest of size
        // >= k (ties: below side first, then smaller node id)
        NodeId best_node = kNoNode;
        NodeId best_size = n + 1;
        bool best_below = true;
        auto consider = [&](NodeId v, NodeId sz, bool below) {
            if (sz < k) return;
            if (sz < best_size || (sz == best_size && below && !best_below) ||
                (sz == best_size && below == best_below && v < best_node)) {
                best_size = sz;
                best_node = v;
                best_below = below;
            }
        };
        for (NodeId v : order) {
            if (v == cur_root) continue;
            consider(v, size[static_cast<std::size_t>(v)], true);
            consider(v, remaining - size[static_cast<std::size_t>(v)], false);
        }
        // a qualifying cut always exists here: any leaf's complement has size
        // remaining-1 >= k

        std::vector<NodeId> below;
        below.reserve(static_cast<std::size_t>(size[static_cast<std::size_t>(best_node)]));
        {
            std::vector<NodeId> stack{best_node};
            std::vector<char> mark(static_cast<std::size_t>(n), 0);
            mark[static_cast<std::size_t>(best_node)] = 1;
            while (!stack.empty()) {
                NodeId u = stack.back();
                stack.pop_back();
                below.push_back(u);
                for (const auto& a : t.graph.neighbors(u))
                    if (!removed[static_cast<std::size_t>(a.to)] &&
                        !mark[static_cast<std::size_t>(a.to)] &&
                        parent[static_cast<std::size_t>(a.to)] == u) {
                        mark[static_cast<std::size_t>(a.to)] = 1;
                        stack.push_back(a.to);
                    }
            }
        }
        std::vector<NodeId> part;
        if (best_below) {
            part = std::move(below);
        } else {
            std::vector<char> in_below(static_cast<std::size_t>(n), 0);
            for (NodeId u : below) in_below[static_cast<std::size_t>(u)] = 1;
            for (NodeId u : order)
                if (!in_below[static_cast<std::size_t>(u)]) part.push_back(u);
            cur_root = best_node;
        }
        for (NodeId u : part) removed[static_cast<std::size_t>(u)] = 1;
        remaining -= static_cast<NodeId>(part.size());
        parts.push_back(std::move(part));
    }

    // remainder (size <= k) joins the last constructed part, to which it is
    // connected by the final cut edge; with no cuts the whole tree is one part
    std::vector<NodeId> rest;
    for (NodeId u = 0; u < n; ++u)
        if (!removed[static_cast<std::size_t>(u)]) rest.push_back(u);
    if (parts.empty()) {
        parts.push_back(std::move(rest));
    } else if (!rest.empty()) {
        auto& last = parts.back();
        last.insert(last.end(), rest.begin(), rest.end());
    }
    return parts;
}

} // namespace graphtv

#endif
