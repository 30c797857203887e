#ifndef GRAPHTV_WAVELETS_HPP
#define GRAPHTV_WAVELETS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "graphtv/graph.hpp"

namespace graphtv {

/// Orthonormal unbalanced Haar basis over tree nodes, stored sparsely.
/// The implicit first basis vector is the constant 1/sqrt(n); the n-1
/// two-level atoms take value +a on `plus` and -b on `minus`.
struct WaveletBasis {
    struct Atom {
        std::vector<NodeId> plus;
        std::vector<NodeId> minus;
        double a;
        double b;
    };
    NodeId n = 0;
    std::vector<Atom> atoms;
};

namespace detail {

// balancing vertex of the connected block: every component left by its
// removal has size at most |block|/2; smallest id on ties
inline NodeId balancing_vertex(const Graph& g, const std::vector<NodeId>& block,
                               std::vector<NodeId>& stamp, NodeId generation,
                               std::vector<NodeId>& local)
{
    const auto p = static_cast<NodeId>(block.size());
    for (NodeId u : block) stamp[static_cast<std::size_t>(u)] = generation;

    // rooted traversal restricted to the block
    std::vector<NodeId> order, parent(block.size());
    order.reserve(block.size());
    std::vector<NodeId> sz(block.size(), 1), max_child(block.size(), 0);
    for (std::size_t i = 0; i < block.size(); ++i)
        local[static_cast<std::size_t>(block[i])] = static_cast<NodeId>(i);
    std::vector<char> seen(block.size(), 0);
    std::vector<NodeId> stack{block[0]};
    seen[static_cast<std::size_t>(local[static_cast<std::size_t>(block[0])])] = 1;
    parent[static_cast<std::size_t>(local[static_cast<std::size_t>(block[0])])] = kNoNode;
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        order.push_back(u);
        for (const auto& a : g.neighbors(u)) {
            if (stamp[static_cast<std::size_t>(a.to)] != generation) continue;
            NodeId li = local[static_cast<std::size_t>(a.to)];
            if (!seen[static_cast<std::size_t>(li)]) {
                seen[static_cast<std::size_t>(li)] = 1;
                parent[static_cast<std::size_t>(li)] = u;
                stack.push_back(a.to);
            }
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        NodeId li = local[static_cast<std::size_t>(*it)];
        NodeId pu = parent[static_cast<std::size_t>(li)];
        if (pu != kNoNode) {
            NodeId lp = local[static_cast<std::size_t>(pu)];
            sz[static_cast<std::size_t>(lp)] += sz[static_cast<std::size_t>(li)];
            max_child[static_cast<std::size_t>(lp)] =
                std::max(max_child[static_cast<std::size_t>(lp)], sz[static_cast<std::size_t>(li)]);
        }
    }
    NodeId best = kNoNode;
    for (NodeId u : block) {
        NodeId li = local[static_cast<std::size_t>(u)];
        NodeId worst = std::max(max_child[static_cast<std::size_t>(li)],
                                p - sz[static_cast<std::size_t>(li)]);
        if (2 * worst <= p && (best == kNoNode || u < best)) best = u;
    }
    return best;
}

// connected components of `block` minus `excluded` (pass kNoNode for none),
// each sorted ascending, listed in order of their smallest node
inline std::vector<std::vector<NodeId>> block_components(const Graph& g,
                                                         const std::vector<NodeId>& block,
                                                         NodeId excluded,
                                                         std::vector<NodeId>& stamp,
                                                         NodeId generation)
{
    for (NodeId u : block) stamp[static_cast<std::size_t>(u)] = generation;
    if (excluded != kNoNode) stamp[static_cast<std::size_t>(excluded)] = generation - 1;
    std::vector<std::vector<NodeId>> comps;
    std::vector<NodeId> sorted = block;
    std::sort(sorted.begin(), sorted.end());
    for (NodeId s : sorted) {
        if (stamp[static_cast<std::size_t>(s)] != generation) continue;
        std::vector<NodeId> comp, stack{s};
        stamp[static_cast<std::size_t>(s)] = generation - 1;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (const auto& a : g.neighbors(u))
                if (stamp[static_cast<std::size_t>(a.to)] == generation) {
                    stamp[static_cast<std::size_t>(a.to)] = generation - 1;
                    stack.push_back(a.to);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

} // namespace detail

/// Recursive balancing-vertex decomposition. A connected block of size p is
/// split around a balancing vertex into its adjacent components plus the
/// vertex itself; those parts (or the components, when the block is already
/// disconnected) are aggregated into two sides by greedy size-balancing,
/// one Haar atom is emitted per split, and both sides are recursed on.
inline WaveletBasis build_tree_wavelets(const Tree& t)
{
    validate_tree(t, "build_tree_wavelets");
    const Graph& g = t.graph;
    const NodeId n = g.num_nodes();

    WaveletBasis basis;
    basis.n = n;
    basis.atoms.reserve(static_cast<std::size_t>(n) - 1);

    std::vector<NodeId> stamp(static_cast<std::size_t>(n), 0);
    std::vector<NodeId> local(static_cast<std::size_t>(n), 0);
    NodeId generation = 1;

    std::vector<std::vector<NodeId>> work;
    {
        std::vector<NodeId> all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), 0);
        work.push_back(std::move(all));
    }
    while (!work.empty()) {
        std::vector<NodeId> block = std::move(work.back());
        work.pop_back();
        if (block.size() <= 1) continue;

        generation += 2;
        auto comps = detail::block_components(g, block, kNoNode, stamp, generation);
        std::vector<std::vector<NodeId>> parts;
        if (comps.size() == 1) {
            generation += 2;
            NodeId v = detail::balancing_vertex(g, block, stamp, generation, local);
            generation += 2;
            parts = detail::block_components(g, block, v, stamp, generation);
            parts.push_back({v});
        } else {
            parts = std::move(comps);
        }

        // largest-first greedy aggregation into two sides of balanced size
        std::vector<std::size_t> idx(parts.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return parts[a].size() > parts[b].size();
        });
        std::vector<NodeId> side_a, side_b;
        for (std::size_t i : idx) {
            auto& dst = side_a.size() <= side_b.size() ? side_a : side_b;
            dst.insert(dst.end(), parts[i].begin(), parts[i].end());
        }
        std::sort(side_a.begin(), side_a.end());
        std::sort(side_b.begin(), side_b.end());

        const double na = static_cast<double>(side_a.size());
        const double nb = static_cast<double>(side_b.size());
        WaveletBasis::Atom atom;
        atom.a = std::sqrt(nb / (na * (na + nb)));
        atom.b = std::sqrt(na / (nb * (na + nb)));
        atom.plus = side_a;
        atom.minus = side_b;
        basis.atoms.push_back(std::move(atom));

        work.push_back(std::move(side_a));
        work.push_back(std::move(side_b));
    }
    return basis;
}

/// Coefficients (W y); index 0 is the constant coefficient.
inline Signal wavelet_transform(const WaveletBasis& basis, const Signal& y)
{
    if (static_cast<NodeId>(y.size()) != basis.n)
        throw validation_error("wavelet_transform: length mismatch");
    Signal c(y.size(), 0.0);
    double sum = 0.0;
    for (double v : y) sum += v;
    c[0] = sum / std::sqrt(static_cast<double>(y.size()));
    for (std::size_t k = 0; k < basis.atoms.size(); ++k) {
        const auto& atom = basis.atoms[k];
        double sa = 0.0, sb = 0.0;
        for (NodeId u : atom.plus) sa += y[static_cast<std::size_t>(u)];
        for (NodeId u : atom.minus) sb += y[static_cast<std::size_t>(u)];
        c[k + 1] = atom.a * sa - atom.b * sb;
    }
    return c;
}

/// Inverse transform (W^T c).
inline Signal wavelet_reconstruct(const WaveletBasis& basis, const Signal& coefs)
{
    if (static_cast<NodeId>(coefs.size()) != basis.n)
        throw validation_error("wavelet_reconstruct: length mismatch");
    Signal y(coefs.size(), coefs[0] / std::sqrt(static_cast<double>(coefs.size())));
    for (std::size_t k = 0; k < basis.atoms.size(); ++k) {
        const auto& atom = basis.atoms[k];
        for (NodeId u : atom.plus) y[static_cast<std::size_t>(u)] += coefs[k + 1] * atom.a;
        for (NodeId u : atom.minus) y[static_cast<std::size_t>(u)] -= coefs[k + 1] * atom.b;
    }
    return y;
}

inline int ceil_log2(NodeId x)
{
    int k = 0;
    NodeId v = 1;
    while (v < x) {
        v *= 2;
        ++k;
    }
    return k;
}

/// Right-hand side factor of the wavelet coefficient sparsity bound:
/// ceil(log2 d_max) * ceil(log2 n).
inline std::size_t wavelet_sparsity_factor(NodeId d_max, NodeId n)
{
    return static_cast<std::size_t>(ceil_log2(d_max)) * static_cast<std::size_t>(ceil_log2(n));
}

/// Number of nonzero wavelet coefficients, excluding the constant
/// coefficient (a nonzero signal mean would otherwise defeat any sparsity
/// statement), with |c| <= tol treated as zero.
inline std::size_t wavelet_coef_l0(const WaveletBasis& basis, const Signal& y, double tol = 1e-9)
{
    Signal c = wavelet_transform(basis, y);
    std::size_t k = 0;
    for (std::size_t i = 1; i < c.size(); ++i)
        if (std::abs(c[i]) > tol) ++k;
    return k;
}

} // namespace graphtv

#endif
