#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <set>

#include "support.hpp"

using namespace graphtv;

namespace {

std::string write_temp(const std::string& name, const std::string& content)
{
    std::string path = std::string("graphtv_test_") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("load_edge_list basics")
{
    SECTION("smallest chain")
    {
        auto p = write_temp("chain.txt", "0 1\n1 2\n");
        Graph g = load_edge_list(p);
        CHECK(g.num_nodes() == 3);
        CHECK(g.num_edges() == 2);
        CHECK(g.is_connected());
        std::remove(p.c_str());
    }
    SECTION("comments, remap and dedup")
    {
        auto p = write_temp("dedup.txt", "# c\n5 9\n9 5\n");
        Graph g = load_edge_list(p);
        CHECK(g.num_nodes() == 2);
        CHECK(g.num_edges() == 1);
        CHECK(g.original_ids() == std::vector<std::int64_t>{5, 9});
        std::remove(p.c_str());
    }
    SECTION("weighted read")
    {
        auto p = write_temp("w.txt", "0 1 2.5\n");
        Graph g = load_edge_list(p, true);
        REQUIRE(g.num_edges() == 1);
        CHECK(g.edges()[0].weight == 2.5);
        CHECK(g.weighted());
        std::remove(p.c_str());
    }
    SECTION("malformed line carries line number")
    {
        auto p = write_temp("bad.txt", "0 1\nnope\n");
        CHECK_THROWS_WITH(load_edge_list(p), Catch::Matchers::ContainsSubstring(":2:"));
        std::remove(p.c_str());
    }
    SECTION("negative weight rejected")
    {
        auto p = write_temp("negw.txt", "0 1 -2\n");
        CHECK_THROWS_AS(load_edge_list(p, true), validation_error);
        std::remove(p.c_str());
    }
    SECTION("missing file")
    {
        CHECK_THROWS_AS(load_edge_list("does_not_exist.txt"), parse_error);
    }
}

TEST_CASE("graph construction drops self-loops and keeps first duplicate weight")
{
    Graph g(3, {{0, 0, 1.0}, {0, 1, 3.0}, {1, 0, 7.0}, {1, 2, 2.0}}, true);
    CHECK(g.num_edges() == 2);
    for (const Edge& e : g.edges())
        if ((e.u == 0 && e.v == 1) || (e.u == 1 && e.v == 0)) CHECK(e.weight == 3.0);
}

TEST_CASE("largest_connected_component")
{
    SECTION("picks the bigger component")
    {
        Graph g(5, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}});
        Graph c = largest_connected_component(g);
        CHECK(c.num_nodes() == 3);
        CHECK(c.num_edges() == 2);
    }
    SECTION("identity on connected input")
    {
        Graph g = testsupport::random_graph(20, 10, 42);
        Graph c = largest_connected_component(g);
        CHECK(c.num_nodes() == g.num_nodes());
        CHECK(c.num_edges() == g.num_edges());
    }
    SECTION("size tie broken by smallest original id")
    {
        // components {1,3} and {0,2}; tie of size 2, node 0 wins
        Graph g(4, {{1, 3, 1.0}, {0, 2, 1.0}});
        Graph c = largest_connected_component(g);
        REQUIRE(c.num_nodes() == 2);
        CHECK(c.original_ids() == std::vector<std::int64_t>{0, 2});
    }
    SECTION("empty graph rejected")
    {
        CHECK_THROWS_AS(largest_connected_component(Graph(0, {})), validation_error);
    }
}

TEST_CASE("total_variation")
{
    Graph path(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK(total_variation(path, {5.0, 5.0, 5.0}) == 0.0);
    CHECK(total_variation(path, {0.0, 1.0, 3.0}) == 3.0);

    // hand evaluation of the weighted defining sum on a triangle
    Graph tri(3, {{0, 1, 2.0}, {1, 2, 1.0}, {0, 2, 1.0}}, true);
    CHECK(total_variation(tri, {0.0, 1.0, 0.0}, true) == 3.0);
    CHECK(total_variation(tri, {0.0, 1.0, 0.0}, false) == 2.0);

    CHECK_THROWS_AS(total_variation(path, {1.0, 2.0}), validation_error);
}

TEST_CASE("cut_metric")
{
    Graph path(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK(cut_metric(path, {2.0, 2.0, 2.0}) == 0);
    CHECK(cut_metric(path, {0.0, 0.0, 5.0}) == 1);

    Graph star(5, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}});
    CHECK(cut_metric(star, {1.0, 0.0, 0.0, 0.0, 0.0}) == 4);

    CHECK(cut_metric(path, {0.0, 1e-7, 0.0}, 1e-6) == 0);
}

TEST_CASE("piece_count")
{
    Graph path(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
    CHECK(piece_count(path, {3.0, 3.0, 3.0, 3.0}) == 1);
    CHECK(piece_count(path, {0.0, 0.0, 7.0, 7.0}) == 2);

    // 4x4 grid split into left and right halves: 2 pieces but 4 cut edges
    Graph grid = make_grid(4, 4);
    Signal theta(16, 0.0);
    for (NodeId r = 0; r < 4; ++r)
        for (NodeId c = 2; c < 4; ++c) theta[static_cast<std::size_t>(r * 4 + c)] = 1.0;
    CHECK(piece_count(grid, theta) == 2);
    CHECK(cut_metric(grid, theta) == 4);
}

TEST_CASE("piece_count at most cut_metric plus one")
{
    for (std::uint64_t s = 0; s < 30; ++s) {
        Graph g = testsupport::random_graph(25, static_cast<NodeId>(s % 20), 100 + s);
        Signal theta = testsupport::random_piecewise(25, 200 + s);
        CHECK(piece_count(g, theta) <= cut_metric(g, theta) + 1);
    }
}

TEST_CASE("dfs_spanning_tree")
{
    SECTION("tree input reproduces the tree")
    {
        Tree t0 = random_tree(40, 7);
        Tree t = dfs_spanning_tree(t0.graph, 0);
        CHECK(t.graph.num_edges() == t0.graph.num_edges());
        std::set<std::pair<NodeId, NodeId>> e0, e1;
        for (const Edge& e : t0.graph.edges()) e0.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
        for (const Edge& e : t.graph.edges()) e1.insert({std::min(e.u, e.v), std::max(e.u, e.v)});
        CHECK(e0 == e1);
    }
    SECTION("cycle with input order gives the path tree")
    {
        Graph cyc(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}});
        Tree t = dfs_spanning_tree(cyc, 0);
        CHECK(t.parent == std::vector<NodeId>{kNoNode, 0, 1, 2});
    }
    SECTION("random seeds keep tree invariants")
    {
        Graph g = testsupport::random_graph(30, 25, 3);
        for (std::uint64_t seed : {1ULL, 2ULL}) {
            Tree t = dfs_spanning_tree(g, 5, EdgeOrder::Random, seed);
            CHECK_NOTHROW(validate_tree(t, "test"));
            CHECK(t.root == 5);
        }
    }
    SECTION("disconnected rejected")
    {
        Graph g(4, {{0, 1, 1.0}, {2, 3, 1.0}});
        CHECK_THROWS_AS(dfs_spanning_tree(g, 0), validation_error);
    }
}

TEST_CASE("dfs traversal walks each tree edge exactly twice")
{
    Graph g = testsupport::random_graph(60, 40, 11);
    DfsRun run = dfs_traverse(g, 3, EdgeOrder::Random, 9);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (v == 3) continue;
        CHECK(run.tree_edge_visits[static_cast<std::size_t>(v)] == 2);
    }
}

TEST_CASE("maximum_spanning_tree")
{
    SECTION("tree input unchanged")
    {
        Tree t0 = random_tree(25, 5);
        Tree t = maximum_spanning_tree(t0.graph);
        CHECK(t.graph.num_edges() == t0.graph.num_edges());
    }
    SECTION("triangle keeps the two heaviest edges")
    {
        Graph tri(3, {{0, 1, 3.0}, {1, 2, 2.0}, {0, 2, 1.0}}, true);
        Tree t = maximum_spanning_tree(tri);
        double total = 0.0;
        for (const Edge& e : t.graph.edges()) total += e.weight;
        CHECK(total == 5.0);
    }
    SECTION("alternating 4-cycle totals 11 (enumerated all 4 spanning trees)")
    {
        Graph cyc(4, {{0, 1, 5.0}, {1, 2, 1.0}, {2, 3, 5.0}, {3, 0, 1.0}}, true);
        Tree t = maximum_spanning_tree(cyc);
        double total = 0.0;
        for (const Edge& e : t.graph.edges()) total += e.weight;
        CHECK(total == 11.0);
    }
}

TEST_CASE("spanning trees never increase tv or cut metric")
{
    for (std::uint64_t s = 0; s < 25; ++s) {
        Graph g = testsupport::random_graph(30, static_cast<NodeId>(5 + s), 500 + s, s % 2 == 1);
        Signal theta = s % 3 == 0 ? testsupport::random_piecewise(30, 600 + s)
                                  : testsupport::random_signal(30, 600 + s);
        Tree t = s % 2 == 0 ? dfs_spanning_tree(g, 0, EdgeOrder::Random, s)
                            : maximum_spanning_tree(g);
        CHECK(total_variation(t.graph, theta) <= total_variation(g, theta) + 1e-12);
        CHECK(cut_metric(t.graph, theta) <= cut_metric(g, theta));
    }
}

TEST_CASE("tree_incidence_inverse")
{
    SECTION("single node")
    {
        Tree t{Graph(1, {}), 0, {kNoNode}};
        IntMatrix a = tree_incidence_inverse(t);
        REQUIRE(a.rows == 1);
        CHECK(a.at(0, 0) == 1);
    }
    SECTION("path rooted at 0 is lower-triangular ones")
    {
        Graph path(3, {{0, 1, 1.0}, {1, 2, 1.0}});
        Tree t = dfs_spanning_tree(path, 0);
        IntMatrix a = tree_incidence_inverse(t);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) CHECK(a.at(i, j) == (j <= i ? 1 : 0));
    }
    SECTION("augmented incidence times A_T is the identity, exactly")
    {
        for (std::uint64_t s = 0; s < 10; ++s) {
            Tree t = random_tree(static_cast<NodeId>(5 + 5 * s), 40 + s);
            IntMatrix prod = int_matmul(tree_augmented_incidence(t), tree_incidence_inverse(t));
            for (std::size_t i = 0; i < prod.rows; ++i)
                for (std::size_t j = 0; j < prod.cols; ++j)
                    REQUIRE(prod.at(i, j) == (i == j ? 1 : 0));
        }
    }
}

TEST_CASE("tree pseudoinverse columns stay below sqrt(n)")
{
    for (std::uint64_t s = 0; s < 6; ++s) {
        NodeId n = static_cast<NodeId>(20 + 30 * s);
        Tree t = random_tree(n, 70 + s);
        double worst = 0.0;
        std::vector<double> b(static_cast<std::size_t>(n) - 1, 0.0);
        for (std::size_t j = 0; j + 1 < static_cast<std::size_t>(n); ++j) {
            b[j] = 1.0;
            Signal col = tree_pseudoinverse_apply(t, b);
            b[j] = 0.0;
            double norm = 0.0;
            for (double v : col) norm += v * v;
            worst = std::max(worst, std::sqrt(norm));
        }
        CHECK(worst <= std::sqrt(static_cast<double>(n)) + 1e-9);
    }
}

TEST_CASE("tree pseudoinverse really inverts the incidence map")
{
    Tree t = random_tree(30, 123);
    Signal b = testsupport::random_signal(29, 5);
    Signal x = tree_pseudoinverse_apply(t, b);
    // differences across edges {parent(i), i} must reproduce b
    for (NodeId v = 1; v < 30; ++v)
        CHECK(std::abs(x[static_cast<std::size_t>(v)] -
                       x[static_cast<std::size_t>(t.parent[static_cast<std::size_t>(v)])] -
                       b[static_cast<std::size_t>(v) - 1]) < 1e-12);
    double sum = 0.0;
    for (double v : x) sum += v;
    CHECK(std::abs(sum) < 1e-9);
}

namespace {

void check_partition(const Tree& t, NodeId k)
{
    auto parts = tree_partition(t, k);
    const NodeId n = t.graph.num_nodes();
    const NodeId dmax = t.graph.max_degree();

    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    NodeId min_size = n + 1;
    for (const auto& p : parts) {
        min_size = std::min(min_size, static_cast<NodeId>(p.size()));
        for (NodeId u : p) seen[static_cast<std::size_t>(u)]++;
    }
    for (NodeId u = 0; u < n; ++u) REQUIRE(seen[static_cast<std::size_t>(u)] == 1);
    CHECK(min_size >= std::min(k, n));
    CHECK(min_size <= k * (dmax + 1));

    // crossing edges = parts - 1
    std::vector<NodeId> owner(static_cast<std::size_t>(n));
    for (std::size_t pi = 0; pi < parts.size(); ++pi)
        for (NodeId u : parts[pi]) owner[static_cast<std::size_t>(u)] = static_cast<NodeId>(pi);
    std::size_t crossing = 0;
    for (const Edge& e : t.graph.edges())
        if (owner[static_cast<std::size_t>(e.u)] != owner[static_cast<std::size_t>(e.v)])
            ++crossing;
    CHECK(crossing == parts.size() - 1);
}

} // namespace

TEST_CASE("tree_partition")
{
    SECTION("k = n is a single part")
    {
        Tree t = random_tree(17, 9);
        auto parts = tree_partition(t, 17);
        REQUIRE(parts.size() == 1);
        CHECK(parts[0].size() == 17);
    }
    SECTION("chain of 10 with k = 3")
    {
        Graph path(10, {{0, 1, 1.0},
                        {1, 2, 1.0},
                        {2, 3, 1.0},
                        {3, 4, 1.0},
                        {4, 5, 1.0},
                        {5, 6, 1.0},
                        {6, 7, 1.0},
                        {7, 8, 1.0},
                        {8, 9, 1.0}});
        Tree t = dfs_spanning_tree(path, 0);
        auto parts = tree_partition(t, 3);
        for (const auto& p : parts) {
            CHECK(p.size() >= 3);
            CHECK(p.size() <= 9);
        }
        check_partition(t, 3);
    }
    SECTION("star with 9 leaves, k = 2")
    {
        std::vector<Edge> edges;
        for (NodeId v = 1; v <= 9; ++v) edges.push_back({0, v, 1.0});
        Graph star(10, std::move(edges));
        Tree t = dfs_spanning_tree(star, 0);
        check_partition(t, 2);
    }
    SECTION("bounds hold on random trees for several k")
    {
        for (std::uint64_t s = 0; s < 15; ++s) {
            NodeId n = static_cast<NodeId>(4 + 13 * s);
            Tree t = random_tree(n, 900 + s);
            for (NodeId k : {NodeId{1}, static_cast<NodeId>((n + 9) / 10),
                             static_cast<NodeId>((n + 2) / 3)})
                check_partition(t, std::max<NodeId>(1, k));
        }
    }
    SECTION("k out of range")
    {
        Tree t = random_tree(5, 1);
        CHECK_THROWS_AS(tree_partition(t, 0), validation_error);
        CHECK_THROWS_AS(tree_partition(t, 6), validation_error);
    }
}
