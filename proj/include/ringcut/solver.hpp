#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "ringcut/transform.hpp"

namespace ringcut {

struct RingWedgeConfig {
    int k_r = 1;
    int k_w = 1;
    int k() const { return k_r + k_w - 1; }
};

// All (k_r, k_w) with k_r + k_w - 1 = k, ordered by ascending k_r.
std::vector<RingWedgeConfig> enumerate_configs(int k);

struct DpResult {
    double nc = 0.0;
    std::vector<int> boundaries;  // interior boundaries, ascending
};

// Minimax segmentation of a line: places k-1 boundaries minimizing the
// worst segment nc, where a segment (a..b] scores
// (cut[a]+cut[b]) / (volume(a+1,b) + cut[a]+cut[b]). O(n^2 k).
DpResult dp_ring_partition(const std::vector<double>& cut,
                           const Eigen::MatrixXd& volume, int k);

// Same, restricted to ranks [0..last]; the final segment's right boundary
// is `last` and contributes cut[last].
DpResult dp_ring_partition_range(const std::vector<double>& cut,
                                 const Eigen::MatrixXd& volume, int k,
                                 int last);

struct SolveResult {
    Partition partition;
    double nc = 0.0;
};

// Candidate evaluation for ring-wedge partitions of one graph: the radial
// line plus lazily built circle views of every possible wedge region.
class RingWedgePlanner {
public:
    explicit RingWedgePlanner(const PlanarGraph& g);

    const PlanarGraph& graph() const { return *graph_; }
    const LinearizedGraph& line() const { return line_; }
    int size() const { return line_.size(); }

    // Wedge region of ranks (interface..n-1]; interface == -1 means the
    // whole graph is the wedge region.
    const RankRegion& wedge_region(int interface) const;

    // Exact NC (PaperEq2) of the candidate made of k_r-1 sorted ring
    // boundaries (the last one is the interface) and wedge boundaries on
    // the region circle (empty = single wedge block).
    double candidate_nc(const std::vector<int>& ring_bounds,
                        const std::vector<int>& wedge_bounds) const;

    Partition materialize(const std::vector<int>& ring_bounds,
                          const std::vector<int>& wedge_bounds) const;

    // Worst block NC over the ring blocks alone (the last boundary is the
    // interface) resp. the wedge blocks alone; edges leaving the wedge
    // region count toward wedge block cuts.
    double ring_blocks_nc(const std::vector<int>& ring_bounds) const;
    double wedge_blocks_nc(int interface,
                           const std::vector<int>& wedge_bounds) const;

    int distinct_radius_count() const;
    int distinct_angle_count() const;

private:
    std::shared_ptr<const PlanarGraph> graph_;
    LinearizedGraph line_;
    mutable std::map<int, RankRegion> regions_;
};

// Exhaustive minimum over all ring-boundary sets x wedge-boundary sets of
// the config. Throws when the combination count exceeds the budget or the
// config asks for more rings/wedges than the graph has distinct radii or
// angles.
SolveResult brute_force(const PlanarGraph& g, const RingWedgeConfig& cfg,
                        std::int64_t budget = 10'000'000);

// Best of `samples` uniformly drawn candidates; deterministic under seed.
SolveResult random_search(const PlanarGraph& g, const RingWedgeConfig& cfg,
                          int samples, std::uint64_t seed);

// The spec'd 10,000-partition baseline for a block count k: samples split
// evenly across enumerate_configs(k), minimum over all draws.
SolveResult random_search_all_configs(const PlanarGraph& g, int k,
                                      int total_samples, std::uint64_t seed);

}  // namespace ringcut
