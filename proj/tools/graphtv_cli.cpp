// graphtv command line: denoise graph signals over DFS-induced chains,
// generate synthetic signals, verify solver invariants, run MSE benchmarks.
//
// Exit codes: 0 success, 1 invariant/verification failure, 2 usage/IO error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphtv/graphtv.hpp"

namespace {

using namespace graphtv;

double now_ms()
{
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Graph load_graph_arg(const std::string& path, bool weighted)
{
    Graph g = load_edge_list(path, weighted);
    Graph lcc = largest_connected_component(g);
    std::cout << "graph: " << path << " n=" << g.num_nodes() << " m=" << g.num_edges();
    if (lcc.num_nodes() != g.num_nodes())
        std::cout << " (largest component: n=" << lcc.num_nodes() << " m=" << lcc.num_edges()
                  << ")";
    std::cout << "\n";
    return lcc;
}

struct DenoiseArgs {
    std::string graph_file, signal_file, method = "dfs", out_file;
    double lambda = 1.0;
    std::uint64_t seed = 1;
    int K = 5;
    std::string combine = "mean";
    bool weighted = false;
    int threads = 0;
};

int cmd_denoise(const DenoiseArgs& a)
{
    Graph g = load_graph_arg(a.graph_file, a.weighted);
    Signal y = read_signal(a.signal_file);
    check_signal_length(g, y, "denoise");

    std::vector<std::uint64_t> seeds;
    const int K = a.method == "dfs" ? 1 : a.K;
    for (int k = 0; k < K; ++k) seeds.push_back(derive_seed(a.seed, static_cast<std::uint64_t>(k)));
    std::cout << "seed: " << a.seed << " chain seeds:";
    for (auto s : seeds) std::cout << " " << s;
    std::cout << "\n";

    double t0 = now_ms();
    DenoiseResult res;
    if (a.method == "dfs" || a.method == "dfs-avg") {
        Combine comb = a.combine == "median" ? Combine::Median : Combine::Mean;
        res = multi_dfs_average(g, y, a.lambda, seeds, comb, a.weighted, a.threads > 1);
    } else if (a.method == "laplacian") {
        res = laplacian_smoothing(g, y, a.lambda);
    } else if (a.method == "wavelet") {
        Tree t = dfs_spanning_tree(g, 0, EdgeOrder::Input);
        WaveletBasis basis = build_tree_wavelets(t);
        res = wavelet_denoise(basis, y, a.lambda);
    } else if (a.method == "dfs-potts") {
        ChainOrder c = dfs_order(g, static_cast<NodeId>(make_rng(derive_seed(seeds[0], 0x726f6fULL))() %
                                                        static_cast<std::uint64_t>(g.num_nodes())),
                                 EdgeOrder::Random, derive_seed(seeds[0], 0x6f7264ULL));
        res.theta_hat = dfs_potts(g, c, y, a.lambda);
        res.method = "dfs-potts";
        res.lambda = a.lambda;
    } else {
        throw validation_error("unknown method `" + a.method +
                               "` (expected dfs, dfs-avg, laplacian, wavelet, dfs-potts)");
    }
    double t1 = now_ms();

    write_signal(res.theta_hat, a.out_file);
    std::cout << "method: " << a.method << " lambda: " << a.lambda << "\n";
    if (std::isfinite(res.objective)) std::cout << "objective: " << fmt_g17(res.objective) << "\n";
    if (std::isfinite(res.kkt_residual))
        std::cout << "kkt_residual: " << fmt_g17(res.kkt_residual) << "\n";
    if (res.cg_iterations > 0)
        std::cout << "cg: " << res.cg_iterations << " iterations, relative residual "
                  << fmt_g17(res.cg_residual) << "\n";
    std::cout << "tv_before: " << fmt_g17(total_variation(g, y, a.weighted))
              << " tv_after: " << fmt_g17(total_variation(g, res.theta_hat, a.weighted)) << "\n";
    std::cout << "time_ms: " << (t1 - t0) << "\n";
    std::cout << "wrote " << a.out_file << "\n";
    return 0;
}

struct VerifyArgs {
    std::string graph_file;
    int trials = 100;
    std::uint64_t seed = 1;
    bool weighted = false;
    bool corrupt = false; // test hook: perturb solver output to prove failures are caught
};

int cmd_verify(const VerifyArgs& a)
{
    Graph g = load_graph_arg(a.graph_file, a.weighted);
    const NodeId n = g.num_nodes();
    std::cout << "seed: " << a.seed << " trials: " << a.trials << "\n";
    bool all_ok = true;
    auto report = [&](const char* name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
        if (!ok) all_ok = false;
    };

    // embedding bounds (chain roughness at most twice the graph roughness)
    {
        double worst_l1 = 0.0, worst_l0 = 0.0;
        std::uint64_t bad_seed = 0;
        bool ok = true;
        for (int t = 0; t < a.trials && ok; ++t) {
            std::uint64_t ts = derive_seed(a.seed, 0x656d62ULL, static_cast<std::uint64_t>(t));
            ChainOrder c = detail::seeded_random_chain(g, ts);
            auto rng = make_rng(derive_seed(ts, 1ULL));
            std::normal_distribution<double> nd(0.0, 1.0);
            Signal theta(static_cast<std::size_t>(n));
            for (double& v : theta) v = nd(rng);
            for (int pc = 0; pc < 2; ++pc) {
                if (pc == 1)
                    for (double& v : theta) v = std::round(1.5 * v);
                auto r = verify_embedding(g, c, theta);
                worst_l1 = std::max(worst_l1, r.l1_ratio);
                worst_l0 = std::max(worst_l0, r.l0_ratio);
                if (r.l1_ratio > 2.0 * (1.0 + 1e-12) || r.l0_ratio > 2.0 * (1.0 + 1e-12)) {
                    ok = false;
                    bad_seed = ts;
                }
            }
        }
        report("embedding", ok,
               ok ? "max l1 ratio " + fmt_g17(worst_l1) + ", max l0 ratio " + fmt_g17(worst_l0) +
                        " (bound 2)"
                  : "ratio above 2, counterexample seed " + std::to_string(bad_seed));
    }

    // solver equals the exhaustive oracle on small random instances
    {
        bool ok = true;
        double worst = 0.0;
        std::uint64_t bad_seed = 0;
        int runs = std::min(a.trials, 200);
        for (int t = 0; t < runs && ok; ++t) {
            std::uint64_t ts = derive_seed(a.seed, 0x6f7261ULL, static_cast<std::uint64_t>(t));
            auto rng = make_rng(ts);
            std::uniform_int_distribution<std::size_t> nn(1, 10);
            std::normal_distribution<double> nd(0.0, 1.0);
            FL1DProblem p;
            p.y.resize(nn(rng));
            for (double& v : p.y) v = nd(rng);
            p.lambda = std::abs(nd(rng));
            if (t % 2 == 0 && p.y.size() > 1) {
                p.weights.resize(p.y.size() - 1);
                for (double& w : p.weights) w = 0.1 + std::abs(nd(rng));
            }
            Signal theta = solve_fl1d(p).theta;
            if (a.corrupt) theta[0] += 1e-3;
            Signal oracle = solve_fl1d_oracle(p).theta;
            for (std::size_t i = 0; i < theta.size(); ++i)
                worst = std::max(worst, std::abs(theta[i] - oracle[i]));
            if (worst > 1e-8) {
                ok = false;
                bad_seed = ts;
            }
        }
        report("oracle-equivalence", ok,
               ok ? "max deviation " + fmt_g17(worst) + " over " + std::to_string(runs) +
                        " instances"
                  : "deviation " + fmt_g17(worst) + ", counterexample seed " +
                        std::to_string(bad_seed));
    }

    // wavelet basis orthonormality
    {
        Tree t = n <= 400 ? dfs_spanning_tree(g, 0, EdgeOrder::Input)
                          : random_tree(256, derive_seed(a.seed, 0x776176ULL));
        WaveletBasis basis = build_tree_wavelets(t);
        const auto bn = static_cast<std::size_t>(basis.n);
        std::vector<Signal> dense(bn, Signal(bn, 0.0));
        for (std::size_t i = 0; i < bn; ++i) {
            Signal e(bn, 0.0);
            e[i] = 1.0;
            dense[i] = wavelet_transform(basis, e); // column i of W
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < bn; ++i)
            for (std::size_t j = i; j < bn; ++j) {
                double dot = 0.0;
                for (std::size_t k = 0; k < bn; ++k) dot += dense[i][k] * dense[j][k];
                worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
            }
        report("orthonormality", worst <= 1e-10,
               "max |W^T W - I| = " + fmt_g17(worst) + " on a basis of " + std::to_string(bn) +
                   " vectors");
    }

    // KKT certificate of the 1d solve on the permuted data
    {
        bool ok = true;
        double worst_rel = 0.0;
        std::uint64_t bad_seed = 0;
        for (int t = 0; t < std::min(a.trials, 20) && ok; ++t) {
            std::uint64_t ts = derive_seed(a.seed, 0x6b6b74ULL, static_cast<std::uint64_t>(t));
            ChainOrder c = detail::seeded_random_chain(g, ts);
            auto rng = make_rng(derive_seed(ts, 2ULL));
            std::normal_distribution<double> nd(0.0, 1.0);
            FL1DProblem p;
            p.y.resize(static_cast<std::size_t>(n));
            for (double& v : p.y) v = nd(rng);
            double ymax = 0.0;
            for (double v : p.y) ymax = std::max(ymax, std::abs(v));
            p.lambda = std::abs(nd(rng)) * std::cbrt(static_cast<double>(n));
            Signal theta = solve_fl1d(p).theta;
            if (a.corrupt) theta[theta.size() / 2] += 1e-3;
            double res = kkt_residual(p, theta) / (1.0 + ymax);
            worst_rel = std::max(worst_rel, res);
            if (res > 1e-8) {
                ok = false;
                bad_seed = ts;
            }
        }
        report("kkt", ok,
               ok ? "max relative residual " + fmt_g17(worst_rel)
                  : "residual " + fmt_g17(worst_rel) + ", counterexample seed " +
                        std::to_string(bad_seed));
    }

    return all_ok ? 0 : 1;
}

struct GenArgs {
    std::string kind = "partition";
    std::string graph_file, out_file, noisy_out, graph_out;
    NodeId rows = 0, cols = 0, parts = 10, pieces = 5, sparsity = 10, random_tree_n = 0;
    double tv = 10.0, sigma = 0.0;
    std::uint64_t seed = 1;
    bool weighted = false;
};

int cmd_gen_signal(const GenArgs& a)
{
    std::cout << "seed: " << a.seed << "\n";
    Signal theta;
    Graph g;
    if (a.kind == "partition") {
        if (a.graph_file.empty()) throw validation_error("gen-signal partition needs --graph");
        g = load_graph_arg(a.graph_file, a.weighted);
        theta = seeded_partition_signal(g, a.parts, a.tv, a.seed);
    } else if (a.kind == "grid-rect") {
        if (a.rows < 1 || a.cols < 1)
            throw validation_error("gen-signal grid-rect needs --rows and --cols");
        g = make_grid(a.rows, a.cols);
        theta = grid_piecewise_signal(a.rows, a.cols, a.pieces, a.tv, a.seed);
    } else if (a.kind == "tree-sparse") {
        Tree t;
        if (a.random_tree_n > 0) {
            t = random_tree(a.random_tree_n, derive_seed(a.seed, 0x74ULL));
            if (!a.graph_out.empty()) {
                std::ofstream out(a.graph_out);
                if (!out) throw parse_error("cannot open for write: " + a.graph_out);
                for (const Edge& e : t.graph.edges()) out << e.u << " " << e.v << "\n";
                std::cout << "wrote tree edge list " << a.graph_out << "\n";
            }
        } else if (!a.graph_file.empty()) {
            g = load_graph_arg(a.graph_file, a.weighted);
            if (g.num_edges() != static_cast<std::size_t>(g.num_nodes()) - 1)
                throw validation_error("gen-signal tree-sparse: graph is not a tree");
            t = dfs_spanning_tree(g, 0, EdgeOrder::Input);
        } else {
            throw validation_error("gen-signal tree-sparse needs --graph or --random-tree-n");
        }
        theta = tree_piecewise_signal(t, a.tv, a.sparsity, a.seed);
        g = t.graph;
    } else {
        throw validation_error("unknown signal kind `" + a.kind + "`");
    }
    write_signal(theta, a.out_file);
    std::cout << "signal: n=" << theta.size() << " tv=" << fmt_g17(total_variation(g, theta))
              << "\n";
    std::cout << "wrote " << a.out_file << "\n";
    if (a.sigma > 0.0) {
        if (a.noisy_out.empty())
            throw validation_error("gen-signal: --sigma needs --noisy-out");
        Signal y = add_noise(theta, a.sigma, derive_seed(a.seed, 0x6eULL));
        write_signal(y, a.noisy_out);
        std::cout << "wrote " << a.noisy_out << " (sigma " << a.sigma << ")\n";
    }
    return 0;
}

struct OrderArgs {
    std::string graph_file, out_file, mode = "dfs";
    NodeId root = 0, rows = 0, cols = 0;
    std::uint64_t seed = 1;
    bool random_order = false;
    bool weighted = false;
};

int cmd_order(const OrderArgs& a)
{
    std::cout << "seed: " << a.seed << "\n";
    ChainOrder c;
    if (a.mode == "dfs") {
        if (a.graph_file.empty()) throw validation_error("order: --graph required for dfs mode");
        Graph g = load_graph_arg(a.graph_file, a.weighted);
        c = dfs_order(g, a.root, a.random_order ? EdgeOrder::Random : EdgeOrder::Input, a.seed);
    } else if (a.mode == "snake-row" || a.mode == "snake-col") {
        if (a.rows < 1 || a.cols < 1) throw validation_error("order: snake modes need --rows/--cols");
        auto [by_row, by_col] = snake_orders(a.rows, a.cols);
        c = a.mode == "snake-row" ? std::move(by_row) : std::move(by_col);
    } else {
        throw validation_error("unknown order mode `" + a.mode + "`");
    }
    write_order(c, a.out_file);
    std::cout << "wrote " << a.out_file << " (" << c.order.size() << " nodes)\n";
    return 0;
}

struct BenchArgs {
    std::string spec_file, out_dir;
    int threads = -1;
};

int cmd_bench(const BenchArgs& a)
{
    ExperimentSpec spec = parse_bench_spec(a.spec_file);
    if (a.threads >= 0) spec.threads = a.threads;
    std::cout << "seed: " << spec.seed << "\n";
    Report report = run_experiment(spec);
    emit_report(report, a.out_dir);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "report written to " << a.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"linear-time denoising of signals on graphs (DFS fused lasso and friends)"};
    app.require_subcommand(1);

    DenoiseArgs d;
    auto* den = app.add_subcommand("denoise", "denoise a signal file over a graph");
    den->add_option("--graph", d.graph_file, "edge list file")->required();
    den->add_option("--signal", d.signal_file, "signal file, one value per line")->required();
    den->add_option("--method", d.method, "dfs | dfs-avg | laplacian | wavelet | dfs-potts");
    den->add_option("--lambda", d.lambda, "penalty level")->required();
    den->add_option("--seed", d.seed, "random seed");
    den->add_option("--K", d.K, "number of chains for dfs-avg");
    den->add_option("--combine", d.combine, "mean | median (dfs-avg)");
    den->add_option("--threads", d.threads, "fit chains concurrently when > 1");
    den->add_flag("--weighted", d.weighted, "read edge weights; penalties use induced chain weights");
    den->add_option("--out", d.out_file, "output signal file")->required();

    VerifyArgs v;
    auto* ver = app.add_subcommand("verify", "run solver/embedding invariant suites on a graph");
    ver->add_option("--graph", v.graph_file, "edge list file")->required();
    ver->add_option("--trials", v.trials, "trial count per suite");
    ver->add_option("--seed", v.seed, "random seed");
    ver->add_flag("--weighted", v.weighted, "read edge weights");
    ver->add_flag("--corrupt", v.corrupt, "test hook: perturb solver output (must FAIL)");

    GenArgs gs;
    auto* gen = app.add_subcommand("gen-signal", "generate a synthetic piecewise-constant signal");
    gen->add_option("--kind", gs.kind, "partition | grid-rect | tree-sparse");
    gen->add_option("--graph", gs.graph_file, "edge list file (partition, tree-sparse)");
    gen->add_option("--rows", gs.rows, "grid rows (grid-rect)");
    gen->add_option("--cols", gs.cols, "grid cols (grid-rect)");
    gen->add_option("--parts", gs.parts, "partition components");
    gen->add_option("--pieces", gs.pieces, "rectangles + background (grid-rect)");
    gen->add_option("--sparsity", gs.sparsity, "nonzero tree differences (tree-sparse)");
    gen->add_option("--random-tree-n", gs.random_tree_n, "generate a random tree of this size");
    gen->add_option("--graph-out", gs.graph_out, "write the generated tree edge list here");
    gen->add_option("--tv", gs.tv, "target total variation")->required();
    gen->add_option("--sigma", gs.sigma, "also write a noisy copy with this noise level");
    gen->add_option("--noisy-out", gs.noisy_out, "output file for the noisy copy");
    gen->add_option("--seed", gs.seed, "random seed");
    gen->add_flag("--weighted", gs.weighted, "read edge weights");
    gen->add_option("--out", gs.out_file, "output signal file")->required();

    OrderArgs o;
    auto* ord = app.add_subcommand("order", "compute and save a chain order");
    ord->add_option("--graph", o.graph_file, "edge list file (dfs mode)");
    ord->add_option("--mode", o.mode, "dfs | snake-row | snake-col");
    ord->add_option("--root", o.root, "DFS root");
    ord->add_option("--rows", o.rows, "grid rows (snake modes)");
    ord->add_option("--cols", o.cols, "grid cols (snake modes)");
    ord->add_flag("--random", o.random_order, "shuffle neighbor visit order");
    ord->add_option("--seed", o.seed, "random seed");
    ord->add_flag("--weighted", o.weighted, "read edge weights");
    ord->add_option("--out", o.out_file, "output order file")->required();

    BenchArgs b;
    auto* ben = app.add_subcommand("bench", "run a Monte Carlo experiment spec");
    ben->add_option("--spec", b.spec_file, "experiment spec file (key = value lines)")->required();
    ben->add_option("--out", b.out_dir, "report output directory")->required();
    ben->add_option("--threads", b.threads, "worker threads (overrides spec)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*den) return cmd_denoise(d);
        if (*ver) return cmd_verify(v);
        if (*gen) return cmd_gen_signal(gs);
        if (*ord) return cmd_order(o);
        if (*ben) return cmd_bench(b);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
