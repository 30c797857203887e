#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <set>

#include "support.hpp"

using namespace graphtv;

TEST_CASE("seeded_partition_signal")
{
    Graph g = testsupport::random_graph(200, 120, 55);

    SECTION("single part must be constant with zero tv")
    {
        Signal s = seeded_partition_signal(g, 1, 0.0, 3);
        for (double v : s) CHECK(v == s[0]);
        CHECK_THROWS_AS(seeded_partition_signal(g, 1, 5.0, 3), validation_error);
    }
    SECTION("part sizes are floor(n/parts) with remainder on the last")
    {
        Signal s = seeded_partition_signal(g, 7, 30.0, 4);
        std::set<double> levels(s.begin(), s.end());
        CHECK(levels.size() <= 7);
        // level multiplicities: count per distinct value
        for (double lv : levels) {
            std::size_t cnt = 0;
            for (double v : s)
                if (v == lv) ++cnt;
            CHECK(cnt >= 200 / 7);
        }
    }
    SECTION("tv hits the target exactly")
    {
        Signal s = seeded_partition_signal(g, 10, 42.5, 9);
        CHECK(total_variation(g, s) == Catch::Approx(42.5).epsilon(1e-9));
    }
    SECTION("deterministic in the seed")
    {
        CHECK(seeded_partition_signal(g, 5, 10.0, 11) == seeded_partition_signal(g, 5, 10.0, 11));
        CHECK(seeded_partition_signal(g, 5, 10.0, 11) != seeded_partition_signal(g, 5, 10.0, 12));
    }
    SECTION("explicit levels are honored up to the rescale")
    {
        std::vector<double> levels{0.0, 1.0, 2.0};
        Signal s = seeded_partition_signal(g, 3, 15.0, 7, levels);
        std::set<double> distinct(s.begin(), s.end());
        CHECK(distinct.size() == 3);
        // equally spaced levels stay equally spaced after the affine rescale
        auto it = distinct.begin();
        double a = *it++, b = *it++, c = *it;
        CHECK(b - a == Catch::Approx(c - b).epsilon(1e-9));
        CHECK_THROWS_AS(seeded_partition_signal(g, 3, 15.0, 7, std::vector<double>{1.0}),
                        validation_error);
    }
    SECTION("parts > n rejected")
    {
        Graph small = testsupport::random_graph(4, 2, 1);
        CHECK_THROWS_AS(seeded_partition_signal(small, 9, 1.0, 1), validation_error);
    }
}

TEST_CASE("grid_piecewise_signal")
{
    SECTION("one piece is constant")
    {
        Signal s = grid_piecewise_signal(6, 7, 1, 0.0, 5);
        for (double v : s) CHECK(v == s[0]);
    }
    SECTION("a centered rectangle cuts exactly its perimeter edges")
    {
        // 6x6 grid, rectangle rows 1..4 x cols 1..4 (4x4 interior block):
        // crossing edges = 4 sides x 4 cells = 16
        Signal theta(36, 0.0);
        for (NodeId r = 1; r <= 4; ++r)
            for (NodeId c = 1; c <= 4; ++c) theta[static_cast<std::size_t>(r * 6 + c)] = 2.0;
        Graph g = make_grid(6, 6);
        CHECK(cut_metric(g, theta) == 16);
        CHECK(piece_count(g, theta) == 2);
    }
    SECTION("tv rescale is exact")
    {
        Graph g = make_grid(12, 9);
        Signal s = grid_piecewise_signal(12, 9, 5, 77.0, 8);
        CHECK(total_variation(g, s) == Catch::Approx(77.0).epsilon(1e-9));
    }
}

TEST_CASE("random_tree")
{
    SECTION("n = 1") { CHECK(random_tree(1, 5).graph.num_nodes() == 1); }
    SECTION("n = 3 is a root with two children")
    {
        Tree t = random_tree(3, 6);
        CHECK(t.graph.degree(0) == 2);
    }
    SECTION("invariants and degree bound")
    {
        for (std::uint64_t s = 0; s < 20; ++s) {
            Tree t = random_tree(static_cast<NodeId>(1 + (s * 37) % 300), 6000 + s);
            CHECK_NOTHROW(validate_tree(t, "test"));
            CHECK(t.graph.max_degree() <= 11);
        }
    }
}

TEST_CASE("tree_piecewise_signal")
{
    Tree t = random_tree(80, 13);

    SECTION("zero sparsity is constant")
    {
        Signal s = tree_piecewise_signal(t, 0.0, 0, 3);
        for (double v : s) CHECK(v == Catch::Approx(s[0]).margin(1e-15));
    }
    SECTION("chain with sparsity 1 is a two-level step")
    {
        Graph path(6, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {4, 5, 1.0}});
        Tree pt = dfs_spanning_tree(path, 0);
        Signal s = tree_piecewise_signal(pt, 4.0, 1, 9);
        std::set<double> levels(s.begin(), s.end());
        CHECK(levels.size() == 2);
        CHECK(total_variation(path, s) == Catch::Approx(4.0).epsilon(1e-9));
    }
    SECTION("plants exactly `sparsity` nonzero differences at the target tv")
    {
        for (NodeId sp : {NodeId{1}, NodeId{7}, NodeId{40}}) {
            Signal s = tree_piecewise_signal(t, 25.0, sp, 100 + sp);
            CHECK(cut_metric(t.graph, s) == static_cast<std::size_t>(sp));
            CHECK(total_variation(t.graph, s) == Catch::Approx(25.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("add_noise")
{
    Signal theta0 = testsupport::random_signal(500, 21);

    SECTION("vanishing sigma is a perturbation below 1e-10")
    {
        Signal y = add_noise(theta0, 1e-12, 3);
        for (std::size_t i = 0; i < y.size(); ++i)
            CHECK(std::abs(y[i] - theta0[i]) < 1e-10);
    }
    SECTION("same seed, same draw")
    {
        CHECK(add_noise(theta0, 0.3, 5) == add_noise(theta0, 0.3, 5));
        CHECK(add_noise(theta0, 0.3, 5) != add_noise(theta0, 0.3, 6));
    }
    SECTION("empirical variance close to sigma^2")
    {
        Signal zero(1000000, 0.0);
        Signal eps = add_noise(zero, 0.7, 9);
        double var = 0.0;
        for (double v : eps) var += v * v;
        var /= static_cast<double>(eps.size());
        CHECK(var == Catch::Approx(0.49).epsilon(0.02));
    }
    SECTION("sigma must be positive")
    {
        CHECK_THROWS_AS(add_noise(theta0, 0.0, 1), validation_error);
    }
}

TEST_CASE("signal file round trip")
{
    Signal s = testsupport::random_signal(64, 33);
    s.push_back(1.0 / 3.0);
    s.push_back(-0.0);
    std::string path = "graphtv_test_signal.txt";
    write_signal(s, path);
    Signal back = read_signal(path);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(back[i] == s[i]);
    std::remove(path.c_str());
}
