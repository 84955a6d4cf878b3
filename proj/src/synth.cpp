#include "ringcut/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "ringcut/rng.hpp"

namespace ringcut {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Groups node radii of a spider web into rings and checks the expected
// structure (equal-size radius groups at radii 1..N).
struct SpiderShape {
    int nodes_per_ring = 0;
    int rings = 0;
    std::vector<int> ring_of;   // per node, 0-based ring index
    std::vector<int> spoke_of;  // per node, 0-based angular index
};

SpiderShape detect_spider(const PlanarGraph& g) {
    const int n = g.node_count();
    std::map<long long, std::vector<NodeId>> by_radius;
    for (NodeId v = 0; v < n; ++v) {
        long long key = std::llround(g.radius_of(v) * 1e9);
        by_radius[key].push_back(v);
    }
    SpiderShape shape;
    shape.rings = static_cast<int>(by_radius.size());
    shape.nodes_per_ring = static_cast<int>(by_radius.begin()->second.size());
    if (shape.rings * shape.nodes_per_ring != n)
        throw GraphError("graph is not a spider web: uneven rings");
    shape.ring_of.assign(n, 0);
    shape.spoke_of.assign(n, 0);
    int ring = 0;
    for (auto& [key, members] : by_radius) {
        if (static_cast<int>(members.size()) != shape.nodes_per_ring)
            throw GraphError("graph is not a spider web: uneven rings");
        std::sort(members.begin(), members.end(), [&](NodeId a, NodeId b) {
            return g.angle_of(a) < g.angle_of(b);
        });
        for (int s = 0; s < shape.nodes_per_ring; ++s) {
            shape.ring_of[members[s]] = ring;
            shape.spoke_of[members[s]] = s;
        }
        ++ring;
    }
    return shape;
}

}  // namespace

PlanarGraph gen_spider_web(const SpiderSpec& spec) {
    if (spec.nodes_per_ring < 3)
        throw GraphError("spider web needs at least 3 nodes per ring");
    if (spec.rings < 1) throw GraphError("spider web needs at least one ring");

    const int m = spec.nodes_per_ring;
    const int rings = spec.rings;
    std::vector<Point> nodes;
    nodes.reserve(static_cast<std::size_t>(m) * rings);
    for (int ring = 1; ring <= rings; ++ring) {
        for (int j = 0; j < m; ++j) {
            double a = kTwoPi * j / m;
            nodes.push_back({ring * std::cos(a), ring * std::sin(a)});
        }
    }

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m) * rings + m * (rings - 1));
    auto id = [m](int ring, int j) { return ring * m + j; };
    for (int ring = 0; ring < rings; ++ring) {
        for (int j = 0; j < m; ++j)
            edges.push_back({id(ring, j), id(ring, (j + 1) % m), 1.0});
    }
    for (int ring = 0; ring + 1 < rings; ++ring) {
        for (int j = 0; j < m; ++j)
            edges.push_back({id(ring, j), id(ring + 1, j), 1.0});
    }
    return PlanarGraph(std::move(nodes), std::move(edges), Point{0.0, 0.0});
}

PlantedInstance plant_partition(const PlanarGraph& g, const PlantSpec& plant) {
    if (plant.k_r < 1 || plant.k_w < 1)
        throw GraphError("plant needs k_r >= 1 and k_w >= 1");
    if (plant.k_r + plant.k_w - 1 < 2)
        throw GraphError("plant needs at least two blocks");
    if (plant.low_weights.empty() || plant.high_weights.empty())
        throw GraphError("plant weight sets must be non-empty");
    double low_max = *std::max_element(plant.low_weights.begin(),
                                       plant.low_weights.end());
    double high_min = *std::min_element(plant.high_weights.begin(),
                                        plant.high_weights.end());
    if (low_max >= high_min)
        throw GraphError("low weights must stay below high weights");

    SpiderShape shape = detect_spider(g);
    const int ring_gaps = shape.rings - 1;
    const int angle_gaps = shape.nodes_per_ring;
    if (plant.k_r - 1 > ring_gaps || plant.k_w > angle_gaps)
        throw GraphError("more boundaries than available gaps");

    Rng rng(plant.seed);
    std::vector<int> ring_bounds = rng.sorted_subset(ring_gaps, plant.k_r - 1);
    std::vector<int> angle_bounds = rng.sorted_subset(angle_gaps, plant.k_w);

    // ring_bounds[i] = b means a boundary between ring b and ring b+1
    // (0-based); angle_bounds[j] = a means a boundary between spoke a and
    // spoke a+1 (mod nodes_per_ring).
    RingWedgeProvenance prov;
    for (int b : ring_bounds) prov.radii.push_back(b + 1.5);
    for (int a : angle_bounds)
        prov.angles.push_back(kTwoPi * (a + 0.5) / angle_gaps);

    const int k = plant.k_r + plant.k_w - 1;
    Partition part;
    part.k = k;
    part.assignment.resize(g.node_count());

    auto ring_block = [&](int ring) {
        int blk = 0;
        for (int b : ring_bounds)
            if (ring > b) ++blk;
        return blk;  // 0..k_r-1; k_r-1 is the wedge region
    };
    auto wedge_block = [&](int spoke) {
        // arcs are (angle_bounds[j], angle_bounds[j+1]] in spoke index space
        int kw = plant.k_w;
        for (int j = 0; j < kw; ++j) {
            int lo = angle_bounds[j];
            int hi = angle_bounds[(j + 1) % kw];
            bool inside = lo < hi ? (spoke > lo && spoke <= hi)
                                  : (spoke > lo || spoke <= hi);
            if (kw == 1) inside = true;
            if (inside) return j;
        }
        return 0;
    };

    for (NodeId v = 0; v < g.node_count(); ++v) {
        int rb = ring_block(shape.ring_of[v]);
        if (rb < plant.k_r - 1)
            part.assignment[v] = rb;
        else
            part.assignment[v] = plant.k_r - 1 + wedge_block(shape.spoke_of[v]);
    }
    part.provenance = prov;
    part.validate(g.node_count());

    std::vector<Edge> edges = g.edges();
    for (Edge& e : edges) {
        bool cross = part.assignment[e.u] != part.assignment[e.v];
        const auto& pool = cross ? plant.low_weights : plant.high_weights;
        e.w = pool[rng.index(pool.size())];
    }
    PlanarGraph weighted(g.nodes(), std::move(edges), g.center());
    return {std::move(weighted), std::move(part)};
}

PlanarGraph gen_random_weights(const PlanarGraph& g, double lo, double hi,
                               std::uint64_t seed) {
    if (lo >= hi) throw GraphError("need lo < hi");
    Rng rng(seed);
    std::vector<Edge> edges = g.edges();
    for (Edge& e : edges) e.w = rng.uniform(lo, hi);
    return PlanarGraph(g.nodes(), std::move(edges), g.center());
}

PlanarGraph sample_connected_subgraph(const PlanarGraph& g, int n,
                                      std::uint64_t seed) {
    if (n < 1 || n > g.node_count())
        throw GraphError("subgraph size out of range");
    Rng rng(seed);

    std::vector<char> selected(g.node_count(), 0);
    std::vector<NodeId> chosen;
    std::vector<NodeId> frontier;
    std::vector<char> in_frontier(g.node_count(), 0);

    NodeId root = static_cast<NodeId>(rng.index(g.node_count()));
    selected[root] = 1;
    chosen.push_back(root);
    for (auto [u, w] : g.adjacency()[root]) {
        if (!in_frontier[u]) {
            in_frontier[u] = 1;
            frontier.push_back(u);
        }
    }
    while (static_cast<int>(chosen.size()) < n) {
        std::size_t pick = rng.index(frontier.size());
        NodeId v = frontier[pick];
        frontier[pick] = frontier.back();
        frontier.pop_back();
        selected[v] = 1;
        chosen.push_back(v);
        for (auto [u, w] : g.adjacency()[v]) {
            if (!selected[u] && !in_frontier[u]) {
                in_frontier[u] = 1;
                frontier.push_back(u);
            }
        }
    }

    std::sort(chosen.begin(), chosen.end());
    std::vector<int> remap(g.node_count(), -1);
    std::vector<Point> nodes;
    nodes.reserve(n);
    for (int i = 0; i < n; ++i) {
        remap[chosen[i]] = i;
        nodes.push_back(g.nodes()[chosen[i]]);
    }
    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
        if (remap[e.u] >= 0 && remap[e.v] >= 0)
            edges.push_back({remap[e.u], remap[e.v], e.w});
    }
    return PlanarGraph(std::move(nodes), std::move(edges));
}

}  // namespace ringcut
