#include "ringcut/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "ringcut/io.hpp"
#include "ringcut/metrics.hpp"
#include "ringcut/rl.hpp"
#include "ringcut/solver.hpp"

namespace ringcut {

namespace {

int thread_cap() {
    const char* env = std::getenv("RINGCUT_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    return v >= 1 ? v : 1;
}

SolveResult run_method(const std::string& method, const PlanarGraph& g,
                       const EvalOptions& opts,
                       const wrt::WrtParams* model) {
    if (method == "dp") {
        LinearizedGraph lg = ring_transform(g);
        DpResult dp = dp_ring_partition(lg.cut(), lg.volume(), opts.k);
        Partition p = partition_from_boundaries(lg, dp.boundaries);
        return {p, normalized_cut(g, p, VolumeConvention::PaperEq2)};
    }
    if (method == "brute") {
        SolveResult best;
        best.nc = std::numeric_limits<double>::infinity();
        for (const RingWedgeConfig& cfg : enumerate_configs(opts.k)) {
            try {
                SolveResult r = brute_force(g, cfg, opts.brute_budget);
                if (r.nc < best.nc) best = std::move(r);
            } catch (const GraphError&) {
                continue;
            }
        }
        if (!std::isfinite(best.nc)) throw GraphError("no feasible config");
        return best;
    }
    if (method == "random") {
        return random_search_all_configs(g, opts.k, opts.random_samples,
                                         opts.seed);
    }
    if (method == "wrt") {
        if (!model) throw GraphError("wrt method needs --model");
        return rl::infer_best_of_n(*model, g, opts.k, opts.best_of, opts.seed);
    }
    throw GraphError("unknown method '" + method + "'");
}

}  // namespace

std::vector<EvalRow> eval_graph(const std::string& name, const PlanarGraph& g,
                                const EvalOptions& opts) {
    std::optional<wrt::WrtParams> model;
    for (const std::string& m : opts.methods) {
        if (m == "wrt" && !model.has_value())
            model = wrt::WrtParams::load(opts.model_path);
    }

    std::vector<EvalRow> rows;
    for (const std::string& method : opts.methods) {
        std::vector<double> times;
        SolveResult result;
        for (int rep = 0; rep < std::max(1, opts.repeats); ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            SolveResult r = run_method(method, g, opts,
                                       model.has_value() ? &*model : nullptr);
            auto t1 = std::chrono::steady_clock::now();
            times.push_back(
                std::chrono::duration<double, std::milli>(t1 - t0).count());
            if (rep == 0) result = std::move(r);
        }
        std::sort(times.begin(), times.end());
        double median = times[times.size() / 2];
        if (times.size() % 2 == 0)
            median = 0.5 * (median + times[times.size() / 2 - 1]);

        EvalRow row;
        row.graph = name;
        row.method = method;
        row.k = opts.k;
        row.nc = result.nc;
        row.ringness = ringness_profile(g, result.partition).normalized;
        row.wedgeness = wedgeness_profile(g, result.partition).score;
        row.ms = median;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<EvalRow> eval_directory(const std::string& dir,
                                    const EvalOptions& opts) {
    namespace fs = std::filesystem;
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".graph")
            paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw GraphError("no .graph files in " + dir);

    std::vector<std::vector<EvalRow>> results(paths.size());
    const int threads = std::min<int>(thread_cap(), static_cast<int>(paths.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < paths.size(); ++i) {
            PlanarGraph g = load_graph(paths[i]);
            results[i] = eval_graph(fs::path(paths[i]).filename().string(), g,
                                    opts);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= paths.size()) return;
                PlanarGraph g = load_graph(paths[i]);
                results[i] = eval_graph(
                    fs::path(paths[i]).filename().string(), g, opts);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<EvalRow> rows;
    for (auto& rset : results)
        for (auto& r : rset) rows.push_back(std::move(r));
    return rows;
}

void write_eval_csv(const std::string& path, const std::vector<EvalRow>& rows) {
    std::ofstream out(path);
    if (!out) throw GraphError("cannot open " + path + " for writing");
    out << "graph,method,k,nc,ringness,wedgeness,ms\n";
    for (const EvalRow& r : rows)
        out << r.graph << ',' << r.method << ',' << r.k << ','
            << format_double(r.nc) << ',' << format_double(r.ringness) << ','
            << format_double(r.wedgeness) << ',' << format_double(r.ms)
            << '\n';
    if (!out) throw GraphError("failed writing " + path);
}

std::vector<EvalRow> bench_timing(const std::vector<std::string>& methods,
                                  const std::vector<std::string>& graph_paths,
                                  int repeats, const EvalOptions& opts) {
    std::vector<EvalRow> rows;
    for (const std::string& path : graph_paths) {
        PlanarGraph g = load_graph(path);
        EvalOptions local = opts;
        local.methods = methods;
        local.repeats = repeats;
        auto sub = eval_graph(std::filesystem::path(path).filename().string(),
                              g, local);
        for (auto& r : sub) rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace ringcut
