#include "ringcut/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "ringcut/bench.hpp"
#include "ringcut/cheeger.hpp"
#include "ringcut/io.hpp"
#include "ringcut/metrics.hpp"
#include "ringcut/refine.hpp"
#include "ringcut/rl.hpp"
#include "ringcut/rng.hpp"
#include "ringcut/solver.hpp"
#include "ringcut/synth.hpp"
#include "ringcut/transform.hpp"

namespace ringcut::cli {

namespace {

std::pair<int, int> parse_pair(const std::string& text, char sep,
                               const std::string& what) {
    auto pos = text.find(sep);
    if (pos == std::string::npos)
        throw CLI::ValidationError(what, "expected <a>" + std::string(1, sep) +
                                             "<b>, got '" + text + "'");
    return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 1))};
}

std::string default_out(const std::string& in, const std::string& ext) {
    std::filesystem::path p(in);
    p.replace_extension(ext);
    return p.string();
}

void cmd_gen(const std::string& spider, const std::string& plant,
             const std::string& random_range, const std::string& from,
             int subgraph_n, std::uint64_t seed, std::string out,
             const std::vector<double>& low, const std::vector<double>& high) {
    PlanarGraph g = [&]() {
        if (!from.empty()) return load_graph(from);
        auto [m, n] = parse_pair(spider, 'x', "--spider");
        return gen_spider_web({m, n});
    }();
    if (subgraph_n > 0) g = sample_connected_subgraph(g, subgraph_n, seed);

    if (out.empty()) out = "out.graph";
    std::optional<Partition> planted;
    if (!plant.empty()) {
        auto [k_r, k_w] = parse_pair(plant, ',', "--plant");
        PlantSpec spec;
        spec.k_r = k_r;
        spec.k_w = k_w;
        if (!low.empty()) spec.low_weights = low;
        if (!high.empty()) spec.high_weights = high;
        spec.seed = seed;
        PlantedInstance inst = plant_partition(g, spec);
        g = std::move(inst.graph);
        planted = std::move(inst.partition);
    } else if (!random_range.empty()) {
        auto pos = random_range.find(',');
        if (pos == std::string::npos)
            throw GraphError("--random expects <lo>,<hi>");
        g = gen_random_weights(g, std::stod(random_range.substr(0, pos)),
                               std::stod(random_range.substr(pos + 1)), seed);
    }

    save_graph(out, g);
    std::cout << "wrote " << out << " (" << g.node_count() << " nodes, "
              << g.edge_count() << " edges)\n";
    if (planted.has_value()) {
        std::string plant_path = default_out(out, ".plant");
        save_plant(plant_path, *planted);
        std::cout << "wrote " << plant_path << '\n';
    }
}

void cmd_partition(const std::string& input, const std::string& method, int k,
                   const std::string& config, int samples, int best_of,
                   std::uint64_t seed, const std::string& model_path,
                   std::string out) {
    PlanarGraph g = load_graph(input);
    if (out.empty()) out = default_out(input, ".part");

    std::optional<RingWedgeConfig> cfg;
    if (!config.empty()) {
        auto [k_r, k_w] = parse_pair(config, ',', "--config");
        cfg = RingWedgeConfig{k_r, k_w};
        k = cfg->k();
    }

    SolveResult result;
    if (method == "dp") {
        LinearizedGraph lg = ring_transform(g);
        DpResult dp = dp_ring_partition(lg.cut(), lg.volume(), k);
        result.partition = partition_from_boundaries(lg, dp.boundaries);
        result.nc =
            normalized_cut(g, result.partition, VolumeConvention::PaperEq2);
    } else if (method == "brute") {
        if (cfg.has_value()) {
            result = brute_force(g, *cfg);
        } else {
            result.nc = std::numeric_limits<double>::infinity();
            for (const RingWedgeConfig& c : enumerate_configs(k)) {
                try {
                    SolveResult r = brute_force(g, c);
                    if (r.nc < result.nc) result = std::move(r);
                } catch (const GraphError&) {
                    continue;
                }
            }
            if (!std::isfinite(result.nc))
                throw GraphError("no feasible config");
        }
    } else if (method == "random") {
        result = cfg.has_value()
                     ? random_search(g, *cfg, samples, seed)
                     : random_search_all_configs(g, k, samples, seed);
    } else if (method == "wrt") {
        wrt::WrtParams params = wrt::WrtParams::load(model_path);
        result = rl::infer_best_of_n(params, g, k, best_of, seed);
    } else {
        throw GraphError("unknown method '" + method + "'");
    }

    save_partition(out, result.partition, result.nc);
    std::cout << "wrote " << out << " (nc " << format_double(result.nc)
              << ")\n";
}

rl::Dataset make_dataset(const std::string& dataset_dir,
                         const std::string& synth, int graphs, int k,
                         std::uint64_t seed) {
    rl::Dataset data;
    if (!dataset_dir.empty()) {
        namespace fs = std::filesystem;
        std::vector<std::string> paths;
        for (const auto& entry : fs::directory_iterator(dataset_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".graph")
                paths.push_back(entry.path().string());
        std::sort(paths.begin(), paths.end());
        for (const std::string& p : paths)
            data.push_back({load_graph(p), std::nullopt});
        if (data.empty()) throw GraphError("no .graph files in " + dataset_dir);
        return data;
    }
    if (synth.empty()) throw GraphError("train needs --dataset or --synth");
    auto [m, n] = parse_pair(synth, 'x', "--synth");
    PlanarGraph base = gen_spider_web({m, n});
    auto configs = enumerate_configs(k);
    Rng rng(seed);
    for (int i = 0; i < graphs; ++i) {
        RingWedgeConfig cfg = configs[rng.index(configs.size())];
        PlantSpec spec;
        spec.k_r = cfg.k_r;
        spec.k_w = cfg.k_w;
        spec.seed = rng.next_u64();
        PlantedInstance inst = plant_partition(base, spec);
        data.push_back({std::move(inst.graph), cfg});
    }
    return data;
}

void cmd_train(const std::string& stage, const std::string& config_path,
               const std::string& dataset_dir, const std::string& synth,
               int graphs, const std::string& in_model,
               const std::string& out_model, const std::string& curve) {
    rl::TrainHyper hyper;
    if (!config_path.empty()) hyper = rl::parse_train_config(config_path);
    if (!curve.empty()) hyper.curve_path = curve;

    rl::Dataset data =
        make_dataset(dataset_dir, synth, graphs, hyper.k, hyper.seed);

    wrt::WrtParams params = wrt::WrtParams::init(hyper.model, hyper.seed);
    if (stage == "wedge") {
        params = rl::train_stage_wedge(data, hyper);
    } else if (stage == "ring") {
        if (in_model.empty())
            throw GraphError("--stage ring needs --in <stage1 checkpoint>");
        params = rl::train_stage_ring(wrt::WrtParams::load(in_model), data,
                                      hyper);
    } else if (stage == "both") {
        params = rl::train_stage_wedge(data, hyper);
        params = rl::train_stage_ring(params, data, hyper);
    } else {
        throw GraphError("unknown stage '" + stage + "'");
    }
    params.save(out_model);
    std::cout << "wrote " << out_model << '\n';
}

void cmd_eval(const std::string& dir, const std::string& out,
              const std::vector<std::string>& methods, int k, int repeats,
              int samples, int best_of, std::uint64_t seed,
              const std::string& model_path) {
    EvalOptions opts;
    if (!methods.empty()) opts.methods = methods;
    opts.k = k;
    opts.repeats = repeats;
    opts.random_samples = samples;
    opts.best_of = best_of;
    opts.seed = seed;
    opts.model_path = model_path;
    auto rows = eval_directory(dir, opts);
    write_eval_csv(out, rows);
    std::cout << "wrote " << out << " (" << rows.size() << " rows)\n";
}

void cmd_cheeger(const std::vector<int>& n_list, const std::vector<int>& r_list,
                 const std::vector<int>& k_list, const std::string& out) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out.empty()) {
        file.open(out);
        if (!file) throw GraphError("cannot open " + out + " for writing");
        os = &file;
    }
    *os << CheegerReport::csv_header() << '\n';
    bool all = true;
    for (int n : n_list)
        for (int r : r_list)
            for (int k : k_list) {
                if (k > std::min(n, r)) continue;
                CheegerReport rep = check_cheeger_bounds(n, r, k);
                all = all && rep.all_hold();
                *os << rep.csv_row() << '\n';
            }
    if (!out.empty())
        std::cout << "wrote " << out << (all ? " (all bounds hold)\n"
                                             : " (BOUND VIOLATION)\n");
    if (!all) throw GraphError("a Cheeger bound failed");
}

void cmd_dump_cutvol(const std::string& input, const std::string& kind,
                     std::string prefix) {
    PlanarGraph g = load_graph(input);
    LinearizedGraph lg =
        kind == "wedge" ? wedge_transform(g) : ring_transform(g);
    if (prefix.empty())
        prefix = std::filesystem::path(input).stem().string() + "_" + kind;

    std::ofstream cut_out(prefix + "_cut.csv");
    cut_out << "boundary,cut\n";
    for (std::size_t i = 0; i < lg.cut().size(); ++i)
        cut_out << i << ',' << format_double(lg.cut()[i]) << '\n';

    std::ofstream vol_out(prefix + "_vol.csv");
    const auto& v = lg.volume();
    for (int i = 0; i < v.rows(); ++i) {
        for (int j = 0; j < v.cols(); ++j)
            vol_out << (j ? "," : "") << format_double(v(i, j));
        vol_out << '\n';
    }
    std::cout << "wrote " << prefix << "_cut.csv and " << prefix
              << "_vol.csv\n";
}

}  // namespace

int cmd_dispatch(int argc, const char* const* argv) {
    CLI::App app{"ring-wedge normalized-cut partitioning toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate synthetic graphs");
    std::string spider = "6x6", plant, random_range, from, gen_out;
    int subgraph_n = 0;
    std::uint64_t gen_seed = 0;
    std::vector<double> low, high;
    gen->add_option("--spider", spider, "spider web MxN (nodes per ring x rings)");
    gen->add_option("--plant", plant, "plant a ring-wedge partition k_r,k_w");
    gen->add_option("--random", random_range, "iid uniform weights lo,hi");
    gen->add_option("--from", from, "base graph to sample from");
    gen->add_option("--subgraph", subgraph_n, "connected subgraph size");
    gen->add_option("--seed", gen_seed, "rng seed");
    gen->add_option("--low", low, "planted cross-partition weight set");
    gen->add_option("--high", high, "planted intra-partition weight set");
    gen->add_option("--out", gen_out, "output path (default out.graph)");

    // partition
    auto* part = app.add_subcommand("partition", "partition a graph");
    std::string part_in, method = "brute", config, model_path, part_out;
    int k = 4, samples = 10000, best_of = 10;
    std::uint64_t part_seed = 0;
    part->add_option("input", part_in, "input .graph file")->required();
    part->add_option("--method", method, "dp|brute|random|wrt");
    part->add_option("--k", k, "number of blocks");
    part->add_option("--config", config, "fixed k_r,k_w");
    part->add_option("--samples", samples, "random search samples");
    part->add_option("--best-of", best_of, "sampled rollouts per config");
    part->add_option("--seed", part_seed, "rng seed");
    part->add_option("--model", model_path, "WRT checkpoint");
    part->add_option("--out", part_out, "output .part path");

    // train
    auto* train = app.add_subcommand("train", "train the WRT policy");
    std::string stage = "both", train_config, dataset_dir, synth = "6x6";
    std::string in_model, out_model = "model.wrt", curve;
    int graphs = 256;
    train->add_option("--stage", stage, "wedge|ring|both");
    train->add_option("--config", train_config, "key=value hyperparameter file");
    train->add_option("--dataset", dataset_dir, "directory of .graph files");
    train->add_option("--synth", synth, "planted spider web MxN");
    train->add_option("--graphs", graphs, "synthetic graph count");
    train->add_option("--in", in_model, "input checkpoint (stage ring)");
    train->add_option("--out", out_model, "output checkpoint");
    train->add_option("--curve", curve, "learning-curve CSV path");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate methods over a directory");
    std::string eval_dir, eval_out = "report.csv", eval_model;
    std::vector<std::string> eval_methods;
    int eval_k = 4, repeats = 1, eval_samples = 10000, eval_best = 10;
    std::uint64_t eval_seed = 0;
    eval->add_option("--dir", eval_dir, "graph directory")->required();
    eval->add_option("--out", eval_out, "report CSV path");
    eval->add_option("--methods", eval_methods, "subset of dp brute random wrt");
    eval->add_option("--k", eval_k, "number of blocks");
    eval->add_option("--repeats", repeats, "timing repeats (median)");
    eval->add_option("--samples", eval_samples, "random search samples");
    eval->add_option("--best-of", eval_best, "sampled rollouts per config");
    eval->add_option("--seed", eval_seed, "rng seed");
    eval->add_option("--model", eval_model, "WRT checkpoint");

    // cheeger-check
    auto* cheeger = app.add_subcommand("cheeger-check",
                                       "verify the structured Cheeger bounds");
    std::vector<int> n_list{4, 6, 8}, r_list{3, 4, 5}, k_list{2, 3};
    std::string cheeger_out;
    cheeger->add_option("--n", n_list, "nodes per ring");
    cheeger->add_option("--r", r_list, "ring counts");
    cheeger->add_option("--k", k_list, "block counts");
    cheeger->add_option("--out", cheeger_out, "CSV path (default stdout)");

    // dump-cutvol
    auto* dump = app.add_subcommand("dump-cutvol",
                                    "dump the cut vector and volume matrix");
    std::string dump_in, dump_kind = "ring", dump_prefix;
    dump->add_option("input", dump_in, "input .graph file")->required();
    dump->add_option("--kind", dump_kind, "ring|wedge");
    dump->add_option("--out", dump_prefix, "output prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed())
            cmd_gen(spider, plant, random_range, from, subgraph_n, gen_seed,
                    gen_out, low, high);
        else if (part->parsed())
            cmd_partition(part_in, method, k, config, samples, best_of,
                          part_seed, model_path, part_out);
        else if (train->parsed())
            cmd_train(stage, train_config, dataset_dir, synth, graphs,
                      in_model, out_model, curve);
        else if (eval->parsed())
            cmd_eval(eval_dir, eval_out, eval_methods, eval_k, repeats,
                     eval_samples, eval_best, eval_seed, eval_model);
        else if (cheeger->parsed())
            cmd_cheeger(n_list, r_list, k_list, cheeger_out);
        else if (dump->parsed())
            cmd_dump_cutvol(dump_in, dump_kind, dump_prefix);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace ringcut::cli
