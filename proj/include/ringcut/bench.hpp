#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ringcut/graph.hpp"

namespace ringcut {

struct EvalOptions {
    std::vector<std::string> methods{"dp", "brute", "random"};
    int k = 4;
    int repeats = 1;
    std::uint64_t seed = 0;
    std::string model_path;   // required by the wrt method
    int random_samples = 10000;
    int best_of = 10;
    std::int64_t brute_budget = 10'000'000;
};

struct EvalRow {
    std::string graph;
    std::string method;
    int k = 0;
    double nc = 0.0;
    double ringness = 0.0;   // normalized score
    double wedgeness = 0.0;  // scalar score
    double ms = 0.0;         // median wall time over repeats
};

// Runs every method over a single graph.
std::vector<EvalRow> eval_graph(const std::string& name, const PlanarGraph& g,
                                const EvalOptions& opts);

// Runs every method over each *.graph file in the directory (sorted).
// Parallelism across graphs is capped by RINGCUT_THREADS (default 1).
std::vector<EvalRow> eval_directory(const std::string& dir,
                                    const EvalOptions& opts);

void write_eval_csv(const std::string& path, const std::vector<EvalRow>& rows);

// Median wall time per (method, graph) over `repeats` runs.
std::vector<EvalRow> bench_timing(const std::vector<std::string>& methods,
                                  const std::vector<std::string>& graph_paths,
                                  int repeats, const EvalOptions& opts);

}  // namespace ringcut
