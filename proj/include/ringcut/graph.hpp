#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ringcut {

using NodeId = int;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    double w = 1.0;
};

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Undirected weighted planar graph with 2-D node coordinates and a center
// point. Node ids are dense 0..n-1; the graph must be connected, loop-free,
// without duplicate edges, and all weights must be nonnegative. When no
// center is supplied the centroid of the node coordinates is used.
class PlanarGraph {
public:
    PlanarGraph(std::vector<Point> nodes, std::vector<Edge> edges,
                std::optional<Point> center = std::nullopt);

    int node_count() const { return static_cast<int>(nodes_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const std::vector<Point>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }

    Point center() const { return center_; }
    void set_center(Point c);

    // Polar coordinates relative to the center. Angles in [0, 2*pi).
    double radius_of(NodeId v) const;
    double angle_of(NodeId v) const;
    double max_radius() const;

    double total_weight() const { return total_weight_; }
    double weighted_degree(NodeId v) const { return weighted_degree_[v]; }

    const std::vector<std::vector<std::pair<NodeId, double>>>& adjacency() const {
        return adjacency_;
    }

private:
    std::vector<Point> nodes_;
    std::vector<Edge> edges_;
    Point center_{};
    double total_weight_ = 0.0;
    std::vector<double> weighted_degree_;
    std::vector<std::vector<std::pair<NodeId, double>>> adjacency_;

    void validate() const;
};

// Arithmetic mean of the node coordinates; stored as the graph center.
Point centroid_center(PlanarGraph& g);

// Ring-wedge origin of a partition: ring radii ascending, wedge angles
// ascending in [0, 2*pi).
struct RingWedgeProvenance {
    std::vector<double> radii;
    std::vector<double> angles;
};

struct Partition {
    std::vector<int> assignment;  // per-node block index in 0..k-1
    int k = 0;
    std::optional<RingWedgeProvenance> provenance;

    // Throws GraphError unless every node is assigned and every block
    // 0..k-1 is non-empty.
    void validate(int n) const;

    // Relabels blocks in order of first appearance so indices are dense.
    static Partition from_assignment(std::vector<int> assignment);

    bool same_blocks_as(const Partition& other) const;
};

enum class VolumeConvention {
    PaperEq2,      // intra-block edge weight + cut
    DegreeVolume,  // sum of weighted degrees of the block's nodes
};

// Total weight of edges with exactly one endpoint in block i.
double cut_of_block(const PlanarGraph& g, const Partition& p, int i);

double volume_of_block(const PlanarGraph& g, const Partition& p, int i,
                       VolumeConvention conv);

// max over blocks of cut/volume. Zero-volume blocks are an error.
double normalized_cut(const PlanarGraph& g, const Partition& p,
                      VolumeConvention conv);

}  // namespace ringcut
