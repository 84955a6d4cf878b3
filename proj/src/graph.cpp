#include "ringcut/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace ringcut {

PlanarGraph::PlanarGraph(std::vector<Point> nodes, std::vector<Edge> edges,
                         std::optional<Point> center)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    validate();

    const int n = node_count();
    weighted_degree_.assign(n, 0.0);
    adjacency_.assign(n, {});
    for (const Edge& e : edges_) {
        total_weight_ += e.w;
        weighted_degree_[e.u] += e.w;
        weighted_degree_[e.v] += e.w;
        adjacency_[e.u].emplace_back(e.v, e.w);
        adjacency_[e.v].emplace_back(e.u, e.w);
    }

    if (center.has_value()) {
        center_ = *center;
    } else {
        double sx = 0.0, sy = 0.0;
        for (const Point& p : nodes_) {
            sx += p.x;
            sy += p.y;
        }
        center_ = {sx / n, sy / n};
    }
}

void PlanarGraph::validate() const {
    const int n = node_count();
    if (n < 1) throw GraphError("graph must have at least one node");

    std::set<std::pair<NodeId, NodeId>> seen;
    for (const Edge& e : edges_) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw GraphError("edge endpoint out of range");
        if (e.u == e.v) throw GraphError("self-loops are not allowed");
        if (e.w < 0.0) throw GraphError("negative edge weight");
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert({key.first, key.second}).second)
            throw GraphError("duplicate edge " + std::to_string(e.u) + "-" +
                             std::to_string(e.v));
    }

    // Connectivity by traversal.
    std::vector<std::vector<NodeId>> adj(n);
    for (const Edge& e : edges_) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<char> visited(n, 0);
    std::vector<NodeId> stack{0};
    visited[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (NodeId u : adj[v]) {
            if (!visited[u]) {
                visited[u] = 1;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    if (reached != n) throw GraphError("graph is not connected");
}

void PlanarGraph::set_center(Point c) { center_ = c; }

double PlanarGraph::radius_of(NodeId v) const {
    const Point& p = nodes_[v];
    return std::hypot(p.x - center_.x, p.y - center_.y);
}

double PlanarGraph::angle_of(NodeId v) const {
    const Point& p = nodes_[v];
    double a = std::atan2(p.y - center_.y, p.x - center_.x);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    return a;
}

double PlanarGraph::max_radius() const {
    double m = 0.0;
    for (int v = 0; v < node_count(); ++v) m = std::max(m, radius_of(v));
    return m;
}

Point centroid_center(PlanarGraph& g) {
    double sx = 0.0, sy = 0.0;
    for (const Point& p : g.nodes()) {
        sx += p.x;
        sy += p.y;
    }
    Point c{sx / g.node_count(), sy / g.node_count()};
    g.set_center(c);
    return c;
}

void Partition::validate(int n) const {
    if (k <= 0) throw GraphError("partition must have at least one block");
    if (static_cast<int>(assignment.size()) != n)
        throw GraphError("partition assignment size does not match node count");
    std::vector<int> count(k, 0);
    for (int b : assignment) {
        if (b < 0 || b >= k) throw GraphError("block index out of range");
        ++count[b];
    }
    for (int i = 0; i < k; ++i)
        if (count[i] == 0)
            throw GraphError("block " + std::to_string(i) + " is empty");
}

Partition Partition::from_assignment(std::vector<int> assignment) {
    Partition p;
    std::vector<int> relabel;
    p.assignment.resize(assignment.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        int b = assignment[i];
        if (b < 0) throw GraphError("negative block index");
        int found = -1;
        for (std::size_t j = 0; j < relabel.size(); ++j) {
            if (relabel[j] == b) {
                found = static_cast<int>(j);
                break;
            }
        }
        if (found < 0) {
            found = static_cast<int>(relabel.size());
            relabel.push_back(b);
        }
        p.assignment[i] = found;
    }
    p.k = static_cast<int>(relabel.size());
    return p;
}

bool Partition::same_blocks_as(const Partition& other) const {
    if (assignment.size() != other.assignment.size()) return false;
    Partition a = from_assignment(assignment);
    Partition b = from_assignment(other.assignment);
    return a.k == b.k && a.assignment == b.assignment;
}

double cut_of_block(const PlanarGraph& g, const Partition& p, int i) {
    if (i < 0 || i >= p.k) throw GraphError("block index out of range");
    double cut = 0.0;
    for (const Edge& e : g.edges()) {
        bool in_u = p.assignment[e.u] == i;
        bool in_v = p.assignment[e.v] == i;
        if (in_u != in_v) cut += e.w;
    }
    return cut;
}

double volume_of_block(const PlanarGraph& g, const Partition& p, int i,
                       VolumeConvention conv) {
    if (i < 0 || i >= p.k) throw GraphError("block index out of range");
    if (conv == VolumeConvention::DegreeVolume) {
        double vol = 0.0;
        for (int v = 0; v < g.node_count(); ++v)
            if (p.assignment[v] == i) vol += g.weighted_degree(v);
        return vol;
    }
    double intra = 0.0, cut = 0.0;
    for (const Edge& e : g.edges()) {
        bool in_u = p.assignment[e.u] == i;
        bool in_v = p.assignment[e.v] == i;
        if (in_u && in_v)
            intra += e.w;
        else if (in_u != in_v)
            cut += e.w;
    }
    return intra + cut;
}

double normalized_cut(const PlanarGraph& g, const Partition& p,
                      VolumeConvention conv) {
    p.validate(g.node_count());
    const int n = g.node_count();

    std::vector<double> intra(p.k, 0.0), cut(p.k, 0.0), degvol(p.k, 0.0);
    for (const Edge& e : g.edges()) {
        int bu = p.assignment[e.u];
        int bv = p.assignment[e.v];
        if (bu == bv) {
            intra[bu] += e.w;
        } else {
            cut[bu] += e.w;
            cut[bv] += e.w;
        }
    }
    for (int v = 0; v < n; ++v) degvol[p.assignment[v]] += g.weighted_degree(v);

    double nc = 0.0;
    for (int i = 0; i < p.k; ++i) {
        double vol = conv == VolumeConvention::PaperEq2 ? intra[i] + cut[i]
                                                        : degvol[i];
        if (vol <= 0.0)
            throw GraphError("block " + std::to_string(i) +
                             " has zero volume");
        nc = std::max(nc, cut[i] / vol);
    }
    return nc;
}

}  // namespace ringcut
