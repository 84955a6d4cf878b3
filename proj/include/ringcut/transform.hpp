#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "ringcut/graph.hpp"

namespace ringcut {

enum class LineKind { Line, Circle };

// Rank-space view of a node subset: the boundary cut vector and covered
// volume matrix of the sequential form, plus exact per-range accumulators.
//
// Boundary i sits between ranks i and i+1 (modular for circles). For lines
// the final boundary n-1 is a virtual zero-cut sentinel. A block (a..b]
// holds ranks a+1..b; on circles it wraps, on lines a=-1 addresses the
// first block.
class RankRegion {
public:
    static RankRegion line_of(const PlanarGraph& g);
    static RankRegion circle_of(const PlanarGraph& g);
    // Circle over an induced subset; edges leaving the subset contribute to
    // block cuts but not to block intra weight.
    static RankRegion circle_of_subset(const PlanarGraph& g,
                                       const std::vector<NodeId>& members);

    int size() const { return static_cast<int>(order_.size()); }
    bool circular() const { return circular_; }
    const std::vector<NodeId>& order() const { return order_; }
    const std::vector<double>& cut() const { return cut_; }
    const Eigen::MatrixXd& volume() const { return volume_; }
    double total_intra() const;
    double total_wsum() const { return wsum_prefix_.back(); }

    // Exact statistics of block (a..b].
    double block_intra(int a, int b) const;
    double block_wsum(int a, int b) const;
    double block_cut(int a, int b) const {
        return block_wsum(a, b) - 2.0 * block_intra(a, b);
    }

    // Boundary cut including the line sentinel / first-block convention.
    double boundary_cut(int b) const;

    // Positions where the sort key strictly increases (radius gaps for
    // lines, angle gaps for circles; circles include the wrap gap).
    const std::vector<int>& distinct_gaps() const { return distinct_gaps_; }

private:
    bool circular_ = false;
    std::vector<NodeId> order_;
    std::vector<double> cut_;
    Eigen::MatrixXd volume_;       // covered-weight matrix, literal convention
    Eigen::MatrixXd intra_;        // exact covered weight of rank range [i..j]
    Eigen::MatrixXd cross_wrap_;   // circle: edges linking [0..j] with [i..m-1]
    std::vector<double> wsum_prefix_;
    std::vector<int> distinct_gaps_;

    struct Span {
        int start;  // first boundary covered
        int len;    // number of boundaries covered
        int lo;     // min endpoint rank
        int hi;     // max endpoint rank
        double w;
    };
    void build(const PlanarGraph& g, std::vector<NodeId> order, bool circular,
               const std::vector<double>& sort_key);
};

// Sequential form of a graph produced by the ring (radius-rank line) or
// wedge (angle-rank circle) transformation. Node order, boundary cuts and
// the covered volume matrix are precomputed.
struct LinearizedGraph {
    LineKind kind = LineKind::Line;
    RankRegion region;
    PlanarGraph source;

    const std::vector<NodeId>& order() const { return region.order(); }
    const std::vector<double>& cut() const { return region.cut(); }
    const Eigen::MatrixXd& volume() const { return region.volume(); }
    int size() const { return region.size(); }
};

// Nodes ranked by distance to the center; ties broken by node id.
LinearizedGraph ring_transform(const PlanarGraph& g);

// Nodes ranked by polar angle, placed at equal angles on the unit circle.
LinearizedGraph wedge_transform(const PlanarGraph& g);

// Boundary cut vector and covered volume matrix recomputed with the
// literal per-edge loops. The transforms build the same data with
// prefix-sum accumulation; these exist as the reference path.
std::pair<std::vector<double>, Eigen::MatrixXd> cut_volume_line(
    const LinearizedGraph& lg);
std::pair<std::vector<double>, Eigen::MatrixXd> cut_volume_circle(
    const LinearizedGraph& lg);

// Contiguous runs of lg.order between the given boundaries, expressed on
// original node ids. Boundaries strictly increasing; lines allow 0..n-2,
// circles 0..n-1 (k boundaries make k arcs; none make one block).
Partition partition_from_boundaries(const LinearizedGraph& lg,
                                    const std::vector<int>& boundaries);

// NC reassembled from the precomputed structures: block cut = sum of the
// two delimiting boundary cuts, block volume = covered weight + cut.
// Matches the direct computation whenever no edge spans an entire block
// from outside, e.g. for boundary sets aligned to radius/angle gaps.
double nc_from_cutvol(const LinearizedGraph& lg,
                      const std::vector<int>& boundaries);

}  // namespace ringcut
