#pragma once

#include <cstdint>
#include <vector>

#include "ringcut/graph.hpp"

namespace ringcut {

// Spider web: `rings` concentric circles at radii 1..rings, each carrying
// `nodes_per_ring` equally spaced nodes. No center node. Node ids are
// ring-major: id = (ring-1)*nodes_per_ring + spoke.
struct SpiderSpec {
    int nodes_per_ring = 6;
    int rings = 6;
};

PlanarGraph gen_spider_web(const SpiderSpec& spec);

// Planted ring-wedge instance: boundaries drawn uniformly without
// replacement from the ring gaps / angular gaps, cross-partition edges
// weighted from low_weights, intra-partition edges from high_weights.
struct PlantSpec {
    int k_r = 2;
    int k_w = 2;
    std::vector<double> low_weights{2.0, 4.0, 6.0};
    std::vector<double> high_weights{10.0, 15.0, 20.0};
    std::uint64_t seed = 0;
};

struct PlantedInstance {
    PlanarGraph graph;
    Partition partition;
};

PlantedInstance plant_partition(const PlanarGraph& g, const PlantSpec& plant);

// Every edge weight iid Uniform(lo, hi); deterministic under seed.
PlanarGraph gen_random_weights(const PlanarGraph& g, double lo, double hi,
                               std::uint64_t seed);

// Connected induced subgraph of n nodes grown by randomized BFS from a
// random root. Ids are remapped dense; the center is recomputed as the
// centroid.
PlanarGraph sample_connected_subgraph(const PlanarGraph& g, int n,
                                      std::uint64_t seed);

}  // namespace ringcut
