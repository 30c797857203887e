#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace graphtv;

TEST_CASE("solve_potts1d basics")
{
    SECTION("lambda 0 returns the data")
    {
        Potts1DProblem p{{1.0, 4.0, -2.0}, 0.0};
        Potts1DSolution s = solve_potts1d(p);
        CHECK(s.theta == p.y);
        CHECK(s.segments.size() == 3);
    }
    SECTION("large lambda gives one segment at the mean")
    {
        Signal y{3.0, -1.0, 2.0, 0.0};
        double mean = 1.0;
        double sse = 0.0;
        for (double v : y) sse += 0.5 * (v - mean) * (v - mean);
        Potts1DProblem p{y, sse + 1.0};
        Potts1DSolution s = solve_potts1d(p);
        REQUIRE(s.segments.size() == 1);
        CHECK(s.segments[0].level == Catch::Approx(mean));
    }
    SECTION("NaN rejected")
    {
        Potts1DProblem p{{std::numeric_limits<double>::quiet_NaN()}, 1.0};
        CHECK_THROWS_AS(solve_potts1d(p), validation_error);
    }
    SECTION("n guard")
    {
        Potts1DProblem p;
        p.y.assign(50, 0.0);
        p.max_n = 10;
        CHECK_THROWS_AS(solve_potts1d(p), validation_error);
    }
}

TEST_CASE("potts oracle equivalence")
{
    for (std::uint64_t s = 0; s < 300; ++s) {
        auto rng = make_rng(9000 + s);
        std::uniform_int_distribution<std::size_t> nn(1, 14);
        std::normal_distribution<double> nd(0.0, 1.0);
        std::uniform_real_distribution<double> ld(0.0, 3.0);
        Potts1DProblem p;
        p.y.resize(nn(rng));
        for (double& v : p.y) v = nd(rng);
        p.lambda = ld(rng);
        Potts1DSolution got = solve_potts1d(p);
        double best = testsupport::potts_oracle_objective(p.y, p.lambda);
        CHECK(std::abs(got.objective - best) <= 1e-9);
    }
}

TEST_CASE("potts segment structure")
{
    SECTION("levels are exact segment means")
    {
        Signal y = testsupport::random_signal(60, 31);
        Potts1DSolution s = solve_potts1d({y, 0.8});
        for (const auto& seg : s.segments) {
            double mean = 0.0;
            for (std::size_t i = seg.start; i <= seg.end; ++i) mean += y[i];
            mean /= static_cast<double>(seg.end - seg.start + 1);
            CHECK(seg.level == Catch::Approx(mean).epsilon(1e-12).margin(1e-12));
        }
    }
    SECTION("segment count non-increasing in lambda")
    {
        Signal y = testsupport::random_signal(80, 77);
        std::size_t prev = y.size() + 1;
        for (double lam : {0.0, 0.05, 0.2, 0.8, 3.2, 12.8, 51.2}) {
            std::size_t k = solve_potts1d({y, lam}).segments.size();
            CHECK(k <= prev);
            prev = k;
        }
    }
}

TEST_CASE("dfs_potts")
{
    Graph star(5, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}});
    ChainOrder c = dfs_order(star, 0);

    SECTION("constant input stays constant")
    {
        Signal out = dfs_potts(star, c, Signal(5, 3.0), 1.7);
        for (double v : out) CHECK(v == 3.0);
    }
    SECTION("lambda 0 returns the data")
    {
        Signal y = testsupport::random_signal(5, 3);
        CHECK(dfs_potts(star, c, y, 0.0) == y);
    }
    SECTION("returned fit keeps the chain embedding bound on the cut metric")
    {
        Signal y{5.0, 0.1, -0.1, 0.05, 0.0}; // center away from the leaves
        Signal out = dfs_potts(star, c, y, 0.05);
        std::size_t chain_cuts = 0;
        for (std::size_t i = 0; i + 1 < out.size(); ++i)
            if (out[static_cast<std::size_t>(c.order[i + 1])] !=
                out[static_cast<std::size_t>(c.order[i])])
                ++chain_cuts;
        CHECK(chain_cuts <= 2 * cut_metric(star, out));
    }
}
