#ifndef GRAPHTV_BENCH_HPP
#define GRAPHTV_BENCH_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "graphtv/chain.hpp"
#include "graphtv/denoise.hpp"
#include "graphtv/graph.hpp"
#include "graphtv/potts1d.hpp"
#include "graphtv/signals.hpp"
#include "graphtv/wavelets.hpp"

namespace graphtv {

/// Log-spaced tuning grid; endpoints are 10^log10_min and 10^log10_max times
/// the natural scale sigma * n^(1/3).
struct LambdaGrid {
    int count = 20;
    double log10_min = -2.0;
    double log10_max = 2.0;

    std::vector<double> values(double sigma, NodeId n) const
    {
        if (count < 1) throw validation_error("lambda grid: count must be >= 1");
        double scale = sigma * std::cbrt(static_cast<double>(n));
        std::vector<double> v(static_cast<std::size_t>(count));
        if (count == 1) {
            v[0] = std::pow(10.0, 0.5 * (log10_min + log10_max)) * scale;
            return v;
        }
        for (int i = 0; i < count; ++i) {
            double f = log10_min + (log10_max - log10_min) * i / (count - 1);
            v[static_cast<std::size_t>(i)] = std::pow(10.0, f) * scale;
        }
        return v;
    }
};

struct GraphConfig {
    enum class Kind { File, Grid, RandomTree, RandomGraph };
    Kind kind = Kind::Grid;
    std::string path;
    bool weighted = false;
    NodeId rows = 0, cols = 0;
    NodeId n = 0;
    double extra_edge_factor = 1.0;
};

struct SignalConfig {
    enum class Kind { Partition, GridRect, TreeSparse };
    Kind kind = Kind::Partition;
    NodeId parts = 10;
    NodeId pieces = 5;
    NodeId sparsity = 10;
    double tv = -1.0;            // absolute target TV, or
    double tv_sqrt_scale = -1.0; // target TV = scale * sqrt(n)

    double target_tv(NodeId n) const
    {
        if (tv >= 0.0) return tv;
        if (tv_sqrt_scale >= 0.0) return tv_sqrt_scale * std::sqrt(static_cast<double>(n));
        throw validation_error("signal: set signal.tv or signal.tv_sqrt_scale");
    }
};

struct EstimatorSpec {
    enum class Kind { Dfs, DfsAvg, Laplacian, Wavelet, DfsPotts };
    std::string id;
    Kind kind = Kind::Dfs;
    int K = 1;
    Combine combine = Combine::Mean;
};

inline EstimatorSpec parse_estimator(const std::string& token)
{
    EstimatorSpec e;
    e.id = token;
    std::string name = token;
    int K = 0;
    if (auto pos = token.find(':'); pos != std::string::npos) {
        name = token.substr(0, pos);
        try {
            K = std::stoi(token.substr(pos + 1));
        } catch (const std::exception&) {
            throw parse_error("bad estimator chain count in `" + token + "`");
        }
        if (K < 1) throw parse_error("estimator chain count must be >= 1 in `" + token + "`");
    }
    if (name == "dfs") {
        e.kind = EstimatorSpec::Kind::Dfs;
        e.K = 1;
    } else if (name == "dfs-avg") {
        e.kind = EstimatorSpec::Kind::DfsAvg;
        e.K = K > 0 ? K : 5;
        e.combine = Combine::Mean;
    } else if (name == "dfs-med") {
        e.kind = EstimatorSpec::Kind::DfsAvg;
        e.K = K > 0 ? K : 5;
        e.combine = Combine::Median;
    } else if (name == "laplacian") {
        e.kind = EstimatorSpec::Kind::Laplacian;
    } else if (name == "wavelet") {
        e.kind = EstimatorSpec::Kind::Wavelet;
    } else if (name == "dfs-potts") {
        e.kind = EstimatorSpec::Kind::DfsPotts;
    } else {
        throw parse_error("unknown estimator `" + token + "`");
    }
    return e;
}

struct ExperimentSpec {
    std::vector<GraphConfig> graphs; // one entry per problem size
    SignalConfig signal;
    double sigma = 1.0;
    int draws = 10; // noise draws per signal (R)
    int reps = 1;   // signal repetitions (Q)
    std::uint64_t seed = 1;
    LambdaGrid lambda;
    std::vector<EstimatorSpec> estimators;
    int threads = 0; // 0 = hardware concurrency
    bool timing = true;
    std::size_t potts_max_n = 100000;

    void validate() const
    {
        if (graphs.empty()) throw validation_error("experiment: no graph configured");
        if (estimators.empty()) throw validation_error("experiment: no estimators");
        if (draws < 1 || reps < 1) throw validation_error("experiment: draws, reps must be >= 1");
        if (!(sigma > 0.0)) throw validation_error("experiment: sigma must be > 0");
        if (lambda.count < 1) throw validation_error("experiment: lambda grid empty");
    }
};

struct Report {
    struct Cell {
        double lambda;
        double mse_mean;
        double mse_stderr;
        long valid; // cells that contributed (reps*draws minus failures)
    };
    struct EstimatorResult {
        std::string id;
        std::vector<Cell> curve;
        std::size_t best = 0; // index of the lambda minimizing mean MSE
        double wall_ms = 0.0;
        double optimized_mse() const { return curve.empty() ? 0.0 : curve[best].mse_mean; }
    };
    struct SizeResult {
        NodeId n = 0;
        std::size_t m = 0;
        std::vector<EstimatorResult> estimators;
    };
    struct Slope {
        std::string id;
        double slope;
        double stderr;
        int points;
    };
    std::vector<SizeResult> sizes;
    std::vector<Slope> slopes;
    std::vector<std::string> warnings;
    std::uint64_t seed = 0;
};

/// Random connected graph: a random recursive tree plus
/// floor(extra_edge_factor * n) uniform random extra edges.
inline Graph random_connected_graph(NodeId n, double extra_edge_factor, std::uint64_t seed)
{
    if (n < 1) throw validation_error("random_connected_graph: n must be >= 1");
    auto rng = make_rng(derive_seed(seed, 0x726763ULL));
    std::vector<Edge> edges;
    for (NodeId v = 1; v < n; ++v) {
        std::uniform_int_distribution<NodeId> up(0, v - 1);
        edges.push_back({up(rng), v, 1.0});
    }
    auto extra = static_cast<std::size_t>(extra_edge_factor * static_cast<double>(n));
    std::uniform_int_distribution<NodeId> any(0, n - 1);
    for (std::size_t k = 0; k < extra; ++k) {
        NodeId u = any(rng), v = any(rng);
        if (u != v) edges.push_back({u, v, 1.0});
    }
    return Graph(n, std::move(edges));
}

/// Least-squares slope of log(mse) against log(n), with its standard error.
inline std::pair<double, double> rate_slope(const std::vector<double>& sizes,
                                            const std::vector<double>& mses)
{
    if (sizes.size() != mses.size() || sizes.size() < 3)
        throw validation_error("rate_slope: need >= 3 (size, mse) pairs");
    const std::size_t k = sizes.size();
    std::vector<double> x(k), y(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!(sizes[i] > 0.0) || !(mses[i] > 0.0))
            throw validation_error("rate_slope: sizes and mses must be positive");
        x[i] = std::log(sizes[i]);
        y[i] = std::log(mses[i]);
    }
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        xbar += x[i];
        ybar += y[i];
    }
    xbar /= static_cast<double>(k);
    ybar /= static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (x[i] - xbar) * (x[i] - xbar);
        sxy += (x[i] - xbar) * (y[i] - ybar);
    }
    if (sxx == 0.0) throw validation_error("rate_slope: all sizes equal");
    double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double r = y[i] - ybar - slope * (x[i] - xbar);
        rss += r * r;
    }
    double se = std::sqrt(rss / static_cast<double>(k - 2) / sxx);
    return {slope, se};
}

namespace detail {

inline Graph build_graph(const GraphConfig& cfg, std::uint64_t seed)
{
    switch (cfg.kind) {
        case GraphConfig::Kind::File:
            return largest_connected_component(load_edge_list(cfg.path, cfg.weighted));
        case GraphConfig::Kind::Grid:
            return make_grid(cfg.rows, cfg.cols);
        case GraphConfig::Kind::RandomTree:
            return random_tree(cfg.n, derive_seed(seed, 0x677472ULL)).graph;
        case GraphConfig::Kind::RandomGraph:
            return random_connected_graph(cfg.n, cfg.extra_edge_factor,
                                          derive_seed(seed, 0x677267ULL));
    }
    throw validation_error("build_graph: bad kind");
}

inline Signal build_signal(const GraphConfig& gcfg, const SignalConfig& scfg, const Graph& g,
                           const Tree* tree, std::uint64_t seed)
{
    double tv = scfg.target_tv(g.num_nodes());
    switch (scfg.kind) {
        case SignalConfig::Kind::Partition:
            return seeded_partition_signal(g, scfg.parts, tv, seed);
        case SignalConfig::Kind::GridRect:
            if (gcfg.kind != GraphConfig::Kind::Grid)
                throw validation_error("signal grid-rect requires a grid graph");
            return grid_piecewise_signal(gcfg.rows, gcfg.cols, scfg.pieces, tv, seed);
        case SignalConfig::Kind::TreeSparse:
            if (tree == nullptr)
                throw validation_error("signal tree-sparse requires a tree graph");
            return tree_piecewise_signal(*tree, tv, scfg.sparsity, seed);
    }
    throw validation_error("build_signal: bad kind");
}

inline double mse(const Signal& a, const Signal& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

inline bool needs_tree(const ExperimentSpec& spec)
{
    return spec.signal.kind == SignalConfig::Kind::TreeSparse;
}

// seed derivation shared with multi_dfs_average so that the bench "dfs"
// estimator and a K=1 average coincide
inline ChainOrder seeded_random_chain(const Graph& g, std::uint64_t chain_seed)
{
    auto rng = make_rng(derive_seed(chain_seed, 0x726f6fULL));
    NodeId root = static_cast<NodeId>(rng() % static_cast<std::uint64_t>(g.num_nodes()));
    return dfs_order(g, root, EdgeOrder::Random, derive_seed(chain_seed, 0x6f7264ULL));
}

// per-lambda MSE for one (estimator, noise draw); chains / transforms are
// computed once and shared across the grid
inline void run_cell(const EstimatorSpec& est, const Graph& g, const WaveletBasis& basis,
                     const Signal& y, const std::vector<double>& lambdas,
                     std::uint64_t cell_seed, std::size_t potts_max_n, std::vector<double>& out,
                     const Signal& theta0)
{
    const std::size_t L = lambdas.size();
    switch (est.kind) {
        case EstimatorSpec::Kind::Dfs:
        case EstimatorSpec::Kind::DfsAvg: {
            const int K = est.kind == EstimatorSpec::Kind::Dfs ? 1 : est.K;
            std::vector<ChainOrder> chains;
            chains.reserve(static_cast<std::size_t>(K));
            for (int k = 0; k < K; ++k)
                chains.push_back(seeded_random_chain(
                    g, derive_seed(cell_seed, static_cast<std::uint64_t>(k))));
            std::vector<Signal> fits(static_cast<std::size_t>(K));
            std::vector<double> buf(static_cast<std::size_t>(K));
            Signal combined(y.size());
            for (std::size_t l = 0; l < L; ++l) {
                for (int k = 0; k < K; ++k)
                    fits[static_cast<std::size_t>(k)] =
                        dfs_fused_lasso(g, chains[static_cast<std::size_t>(k)], y, lambdas[l],
                                        g.weighted())
                            .theta_hat;
                if (K == 1) {
                    out[l] = mse(fits[0], theta0);
                    continue;
                }
                for (std::size_t i = 0; i < y.size(); ++i) {
                    if (est.combine == Combine::Mean) {
                        double s = 0.0;
                        for (int k = 0; k < K; ++k) s += fits[static_cast<std::size_t>(k)][i];
                        combined[i] = s / K;
                    } else {
                        for (int k = 0; k < K; ++k)
                            buf[static_cast<std::size_t>(k)] = fits[static_cast<std::size_t>(k)][i];
                        std::sort(buf.begin(), buf.end());
                        combined[i] = K % 2 == 1 ? buf[static_cast<std::size_t>(K / 2)]
                                                 : 0.5 * (buf[static_cast<std::size_t>(K / 2 - 1)] +
                                                          buf[static_cast<std::size_t>(K / 2)]);
                    }
                }
                out[l] = mse(combined, theta0);
            }
            break;
        }
        case EstimatorSpec::Kind::Laplacian:
            for (std::size_t l = 0; l < L; ++l)
                out[l] = mse(laplacian_smoothing(g, y, lambdas[l]).theta_hat, theta0);
            break;
        case EstimatorSpec::Kind::Wavelet: {
            Signal coefs = wavelet_transform(basis, y);
            Signal shrunk(coefs.size());
            for (std::size_t l = 0; l < L; ++l) {
                double lam = lambdas[l];
                for (std::size_t i = 0; i < coefs.size(); ++i) {
                    double c = coefs[i];
                    shrunk[i] = c > lam ? c - lam : (c < -lam ? c + lam : 0.0);
                }
                out[l] = mse(wavelet_reconstruct(basis, shrunk), theta0);
            }
            break;
        }
        case EstimatorSpec::Kind::DfsPotts: {
            ChainOrder chain = seeded_random_chain(g, derive_seed(cell_seed, 0ULL));
            for (std::size_t l = 0; l < L; ++l)
                out[l] = mse(dfs_potts(g, chain, y, lambdas[l], potts_max_n), theta0);
            break;
        }
    }
}

} // namespace detail

/// Monte Carlo protocol: for every signal repetition and noise draw, fit
/// every estimator at every grid lambda; average the MSE per (estimator,
/// lambda) cell and report the minimum over lambda. Cells are distributed
/// over a worker pool; per-cell seeds are derived by hashing (seed, indices)
/// so the schedule never changes the numbers. Estimator failures are
/// recorded as warnings and excluded from the averages.
inline Report run_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    Report report;
    report.seed = spec.seed;

    const int L = spec.lambda.count;
    const int Q = spec.reps;
    const int R = spec.draws;
    const std::size_t E = spec.estimators.size();

    int threads = spec.threads > 0 ? spec.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;

    std::mutex warn_mutex;

    for (std::size_t si = 0; si < spec.graphs.size(); ++si) {
        const GraphConfig& gcfg = spec.graphs[si];
        Graph g = detail::build_graph(gcfg, derive_seed(spec.seed, 0x6772ULL, si));
        const NodeId n = g.num_nodes();

        // shared per-graph structures, built once (not timed)
        bool need_basis = false;
        for (const auto& e : spec.estimators)
            if (e.kind == EstimatorSpec::Kind::Wavelet) need_basis = true;
        bool need_tree = detail::needs_tree(spec) || need_basis;
        Tree tree;
        if (need_tree) tree = dfs_spanning_tree(g, 0, EdgeOrder::Input);
        WaveletBasis basis;
        if (need_basis) basis = build_tree_wavelets(tree);

        std::vector<double> lambdas = spec.lambda.values(spec.sigma, n);
        std::vector<Signal> theta0(static_cast<std::size_t>(Q));
        for (int q = 0; q < Q; ++q)
            theta0[static_cast<std::size_t>(q)] = detail::build_signal(
                gcfg, spec.signal, g, need_tree ? &tree : nullptr,
                derive_seed(spec.seed, 0x736967ULL, si, static_cast<std::uint64_t>(q)));

        // mse_store[e][l * Q*R + q*R + r]
        std::vector<std::vector<double>> mse_store(
            E, std::vector<double>(static_cast<std::size_t>(L) * Q * R,
                                   std::numeric_limits<double>::quiet_NaN()));
        std::vector<std::atomic<long long>> wall_ns(E);
        for (auto& w : wall_ns) w.store(0);

        struct Task {
            int q, r;
            std::size_t e;
        };
        std::vector<Task> tasks;
        tasks.reserve(static_cast<std::size_t>(Q) * R * E);
        for (int q = 0; q < Q; ++q)
            for (int r = 0; r < R; ++r)
                for (std::size_t e = 0; e < E; ++e) tasks.push_back({q, r, e});

        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                std::size_t ti = next.fetch_add(1);
                if (ti >= tasks.size()) return;
                const Task& task = tasks[ti];
                const EstimatorSpec& est = spec.estimators[task.e];
                std::uint64_t cell_seed =
                    derive_seed(spec.seed, 0x63656cULL, si, static_cast<std::uint64_t>(task.q),
                                static_cast<std::uint64_t>(task.r), task.e);
                Signal y = add_noise(theta0[static_cast<std::size_t>(task.q)], spec.sigma,
                                     derive_seed(spec.seed, 0x647277ULL, si,
                                                 static_cast<std::uint64_t>(task.q),
                                                 static_cast<std::uint64_t>(task.r)));
                auto t0 = std::chrono::steady_clock::now();
                try {
                    std::vector<double> cell_mse(static_cast<std::size_t>(L));
                    detail::run_cell(est, g, basis, y, lambdas, cell_seed, spec.potts_max_n,
                                     cell_mse, theta0[static_cast<std::size_t>(task.q)]);
                    for (int l = 0; l < L; ++l)
                        mse_store[task.e][static_cast<std::size_t>(l) * Q * R + task.q * R +
                                          task.r] = cell_mse[static_cast<std::size_t>(l)];
                } catch (const std::exception& ex) {
                    std::lock_guard<std::mutex> lock(warn_mutex);
                    report.warnings.push_back("estimator " + est.id + " failed (n=" +
                                              std::to_string(n) + ", rep=" +
                                              std::to_string(task.q) + ", draw=" +
                                              std::to_string(task.r) + "): " + ex.what());
                }
                auto t1 = std::chrono::steady_clock::now();
                if (spec.timing)
                    wall_ns[task.e].fetch_add(
                        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
            }
        };
        if (threads == 1 || tasks.size() == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        Report::SizeResult sres;
        sres.n = n;
        sres.m = g.num_edges();
        for (std::size_t e = 0; e < E; ++e) {
            Report::EstimatorResult er;
            er.id = spec.estimators[e].id;
            er.wall_ms = static_cast<double>(wall_ns[e].load()) / 1e6;
            er.curve.resize(static_cast<std::size_t>(L));
            for (int l = 0; l < L; ++l) {
                double sum = 0.0, sum2 = 0.0;
                long cnt = 0;
                for (int qr = 0; qr < Q * R; ++qr) {
                    double v = mse_store[e][static_cast<std::size_t>(l) * Q * R + qr];
                    if (std::isnan(v)) continue;
                    sum += v;
                    sum2 += v * v;
                    ++cnt;
                }
                auto& cell = er.curve[static_cast<std::size_t>(l)];
                cell.lambda = lambdas[static_cast<std::size_t>(l)];
                cell.valid = cnt;
                if (cnt == 0) {
                    cell.mse_mean = std::numeric_limits<double>::quiet_NaN();
                    cell.mse_stderr = std::numeric_limits<double>::quiet_NaN();
                } else {
                    cell.mse_mean = sum / static_cast<double>(cnt);
                    double var = cnt > 1 ? (sum2 - sum * sum / static_cast<double>(cnt)) /
                                               static_cast<double>(cnt - 1)
                                         : 0.0;
                    cell.mse_stderr = std::sqrt(std::max(var, 0.0) / static_cast<double>(cnt));
                }
            }
            er.best = 0;
            for (std::size_t l = 1; l < er.curve.size(); ++l) {
                if (std::isnan(er.curve[er.best].mse_mean) ||
                    (!std::isnan(er.curve[l].mse_mean) &&
                     er.curve[l].mse_mean < er.curve[er.best].mse_mean))
                    er.best = l;
            }
            sres.estimators.push_back(std::move(er));
        }
        report.sizes.push_back(std::move(sres));
    }

    // rate slopes of the optimized MSE over the size sweep
    if (report.sizes.size() >= 3) {
        for (std::size_t e = 0; e < E; ++e) {
            std::vector<double> ns, ms;
            for (const auto& s : report.sizes) {
                ns.push_back(static_cast<double>(s.n));
                ms.push_back(s.estimators[e].optimized_mse());
            }
            bool ok = true;
            for (double v : ms)
                if (!(v > 0.0)) ok = false;
            if (!ok) continue;
            auto [slope, se] = rate_slope(ns, ms);
            report.slopes.push_back(
                {spec.estimators[e].id, slope, se, static_cast<int>(ns.size())});
        }
    }
    return report;
}

inline std::string fmt_g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Writes mse_table.csv, curves/<estimator>.csv, slopes.csv and summary.txt
/// under dir. The CSV tables are byte-deterministic for a given report;
/// wall-clock times go to the summary only.
inline void emit_report(const Report& report, const std::string& dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(dir) / "curves", ec);
    if (ec) throw parse_error("emit_report: cannot create " + dir + ": " + ec.message());

    auto open = [](const fs::path& p) {
        std::ofstream out(p);
        if (!out) throw parse_error("emit_report: cannot write " + p.string());
        return out;
    };

    auto sanitize = [](std::string s) {
        for (char& c : s)
            if (c == ':' || c == '/' || c == ' ') c = '_';
        return s;
    };

    {
        std::ofstream out = open(fs::path(dir) / "mse_table.csv");
        out << "n,estimator,lambda,mse,stderr,valid\n";
        for (const auto& s : report.sizes)
            for (const auto& e : s.estimators)
                for (const auto& c : e.curve)
                    out << s.n << ',' << e.id << ',' << fmt_g17(c.lambda) << ','
                        << fmt_g17(c.mse_mean) << ',' << fmt_g17(c.mse_stderr) << ',' << c.valid
                        << '\n';
    }
    {
        // one plot-data file per estimator: optimized-MSE curve rows
        std::vector<std::string> ids;
        if (!report.sizes.empty())
            for (const auto& e : report.sizes.front().estimators) ids.push_back(e.id);
        for (std::size_t ei = 0; ei < ids.size(); ++ei) {
            std::ofstream out = open(fs::path(dir) / "curves" / (sanitize(ids[ei]) + ".csv"));
            out << "n,lambda,mse\n";
            for (const auto& s : report.sizes)
                for (const auto& c : s.estimators[ei].curve)
                    out << s.n << ',' << fmt_g17(c.lambda) << ',' << fmt_g17(c.mse_mean) << '\n';
        }
    }
    {
        std::ofstream out = open(fs::path(dir) / "slopes.csv");
        out << "estimator,slope,stderr,points\n";
        for (const auto& sl : report.slopes)
            out << sl.id << ',' << fmt_g17(sl.slope) << ',' << fmt_g17(sl.stderr) << ','
                << sl.points << '\n';
    }
    {
        std::ofstream out = open(fs::path(dir) / "summary.txt");
        out << "seed: " << report.seed << "\n";
        for (const auto& s : report.sizes) {
            out << "n=" << s.n << " m=" << s.m << "\n";
            for (const auto& e : s.estimators) {
                if (e.curve.empty()) continue;
                const auto& b = e.curve[e.best];
                out << "  " << e.id << ": optimized mse " << fmt_g17(b.mse_mean) << " +- "
                    << fmt_g17(b.mse_stderr) << " at lambda " << fmt_g17(b.lambda) << " ("
                    << e.wall_ms << " ms fit time)\n";
            }
        }
        for (const auto& sl : report.slopes)
            out << "slope " << sl.id << ": " << fmt_g17(sl.slope) << " +- " << fmt_g17(sl.stderr)
                << " over " << sl.points << " sizes\n";
        for (const auto& w : report.warnings) out << "warning: " << w << "\n";
    }
}

/// Flat key = value experiment spec files; `#` starts a comment, lists are
/// space-separated. See the README for the grammar.
inline ExperimentSpec parse_bench_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open spec file: " + path);

    ExperimentSpec spec;
    GraphConfig gbase;
    std::vector<NodeId> rows, cols, ns;
    bool have_graph_kind = false;

    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw parse_error(path + ":" + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            std::size_t b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        std::string t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) fail("expected `key = value`");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty()) fail("expected `key = value`");

        auto as_int = [&](const std::string& v) {
            try {
                std::size_t used = 0;
                long long r = std::stoll(v, &used);
                if (used != v.size()) fail("bad integer `" + v + "`");
                return r;
            } catch (const parse_error&) {
                throw;
            } catch (const std::exception&) {
                fail("bad integer `" + v + "`");
            }
            return 0LL;
        };
        auto as_double = [&](const std::string& v) {
            try {
                std::size_t used = 0;
                double r = std::stod(v, &used);
                if (used != v.size()) fail("bad number `" + v + "`");
                return r;
            } catch (const parse_error&) {
                throw;
            } catch (const std::exception&) {
                fail("bad number `" + v + "`");
            }
            return 0.0;
        };
        auto as_bool = [&](const std::string& v) {
            if (v == "true" || v == "1") return true;
            if (v == "false" || v == "0") return false;
            fail("bad bool `" + v + "` (use true/false)");
            return false;
        };
        auto as_int_list = [&](const std::string& v) {
            std::vector<NodeId> out;
            std::istringstream ss(v);
            std::string tok;
            while (ss >> tok) out.push_back(static_cast<NodeId>(as_int(tok)));
            return out;
        };

        if (key == "graph.kind") {
            have_graph_kind = true;
            if (value == "grid")
                gbase.kind = GraphConfig::Kind::Grid;
            else if (value == "file")
                gbase.kind = GraphConfig::Kind::File;
            else if (value == "random-tree")
                gbase.kind = GraphConfig::Kind::RandomTree;
            else if (value == "random-graph")
                gbase.kind = GraphConfig::Kind::RandomGraph;
            else
                fail("unknown graph.kind `" + value + "`");
        } else if (key == "graph.path") {
            gbase.path = value;
        } else if (key == "graph.weighted") {
            gbase.weighted = as_bool(value);
        } else if (key == "graph.rows") {
            rows = as_int_list(value);
        } else if (key == "graph.cols") {
            cols = as_int_list(value);
        } else if (key == "graph.n") {
            ns = as_int_list(value);
        } else if (key == "graph.extra_edges") {
            gbase.extra_edge_factor = as_double(value);
        } else if (key == "signal.kind") {
            if (value == "partition")
                spec.signal.kind = SignalConfig::Kind::Partition;
            else if (value == "grid-rect")
                spec.signal.kind = SignalConfig::Kind::GridRect;
            else if (value == "tree-sparse")
                spec.signal.kind = SignalConfig::Kind::TreeSparse;
            else
                fail("unknown signal.kind `" + value + "`");
        } else if (key == "signal.parts") {
            spec.signal.parts = static_cast<NodeId>(as_int(value));
        } else if (key == "signal.pieces") {
            spec.signal.pieces = static_cast<NodeId>(as_int(value));
        } else if (key == "signal.sparsity") {
            spec.signal.sparsity = static_cast<NodeId>(as_int(value));
        } else if (key == "signal.tv") {
            spec.signal.tv = as_double(value);
        } else if (key == "signal.tv_sqrt_scale") {
            spec.signal.tv_sqrt_scale = as_double(value);
        } else if (key == "noise.sigma") {
            spec.sigma = as_double(value);
        } else if (key == "draws") {
            spec.draws = static_cast<int>(as_int(value));
        } else if (key == "reps") {
            spec.reps = static_cast<int>(as_int(value));
        } else if (key == "seed") {
            spec.seed = static_cast<std::uint64_t>(as_int(value));
        } else if (key == "lambda.count") {
            spec.lambda.count = static_cast<int>(as_int(value));
        } else if (key == "lambda.log_min") {
            spec.lambda.log10_min = as_double(value);
        } else if (key == "lambda.log_max") {
            spec.lambda.log10_max = as_double(value);
        } else if (key == "estimators") {
            std::string tok;
            std::istringstream ss(value);
            while (std::getline(ss, tok, ',')) {
                std::size_t a = tok.find_first_not_of(" \t");
                std::size_t b = tok.find_last_not_of(" \t");
                if (a == std::string::npos) fail("empty estimator token");
                try {
                    spec.estimators.push_back(parse_estimator(tok.substr(a, b - a + 1)));
                } catch (const parse_error& ex) {
                    fail(ex.what());
                }
            }
        } else if (key == "threads") {
            spec.threads = static_cast<int>(as_int(value));
        } else if (key == "timing") {
            spec.timing = as_bool(value);
        } else if (key == "potts.max_n") {
            spec.potts_max_n = static_cast<std::size_t>(as_int(value));
        } else {
            fail("unknown key `" + key + "`");
        }
    }

    if (!have_graph_kind) throw parse_error(path + ": missing graph.kind");
    switch (gbase.kind) {
        case GraphConfig::Kind::Grid: {
            if (rows.empty()) throw parse_error(path + ": grid needs graph.rows");
            if (cols.empty()) cols = rows;
            if (cols.size() != rows.size())
                throw parse_error(path + ": graph.rows and graph.cols lengths differ");
            for (std::size_t i = 0; i < rows.size(); ++i) {
                GraphConfig gc = gbase;
                gc.rows = rows[i];
                gc.cols = cols[i];
                spec.graphs.push_back(gc);
            }
            break;
        }
        case GraphConfig::Kind::File: {
            if (gbase.path.empty()) throw parse_error(path + ": file graph needs graph.path");
            spec.graphs.push_back(gbase);
            break;
        }
        case GraphConfig::Kind::RandomTree:
        case GraphConfig::Kind::RandomGraph: {
            if (ns.empty()) throw parse_error(path + ": random graph/tree needs graph.n");
            for (NodeId n : ns) {
                GraphConfig gc = gbase;
                gc.n = n;
                spec.graphs.push_back(gc);
            }
            break;
        }
    }
    spec.validate();
    return spec;
}

} // namespace graphtv

#endif
