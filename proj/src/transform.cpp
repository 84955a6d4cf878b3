#include "ringcut/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ringcut {

namespace {

constexpr double kGapTol = 1e-9;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<NodeId> ranked_order(const PlanarGraph& g,
                                 const std::vector<double>& key) {
    std::vector<NodeId> order(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (key[a] != key[b]) return key[a] < key[b];
        return a < b;
    });
    return order;
}

// Accumulates point masses P[lo][hi] into M[i][j] = sum of P over
// lo >= i, hi <= j (upper triangle), in O(n^2).
void accumulate_covered(const Eigen::MatrixXd& point, Eigen::MatrixXd& out) {
    const int n = static_cast<int>(point.rows());
    out = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> suffix(n + 1);
    for (int j = 0; j < n; ++j) {
        suffix[n] = 0.0;
        for (int i = n - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + point(i, j);
        for (int i = 0; i < j; ++i)
            out(i, j) = (j > 0 ? out(i, j - 1) : 0.0) + suffix[i];
    }
}

}  // namespace

void RankRegion::build(const PlanarGraph& g, std::vector<NodeId> order,
                       bool circular, const std::vector<double>& sort_key) {
    circular_ = circular;
    order_ = std::move(order);
    const int n = size();

    std::vector<int> rank_of(g.node_count(), -1);
    for (int r = 0; r < n; ++r) rank_of[order_[r]] = r;

    std::vector<Span> spans;
    spans.reserve(g.edge_count());
    for (const Edge& e : g.edges()) {
        int ra = rank_of[e.u], rb = rank_of[e.v];
        if (ra < 0 || rb < 0) continue;  // edge leaves the region
        int lo = std::min(ra, rb), hi = std::max(ra, rb);
        Span s{lo, hi - lo, lo, hi, e.w};
        if (circular_) {
            int fwd = hi - lo, bwd = n - fwd;
            if (bwd < fwd) {
                s.start = hi;
                s.len = bwd;
            }
        }
        spans.push_back(s);
    }

    // Boundary cuts via a difference array (unrolled once for the wrap).
    cut_.assign(n, 0.0);
    std::vector<double> diff(2 * n + 1, 0.0);
    for (const Span& s : spans) {
        diff[s.start] += s.w;
        diff[s.start + s.len] -= s.w;
    }
    double running = 0.0;
    for (int i = 0; i < 2 * n; ++i) {
        running += diff[i];
        if (i < n)
            cut_[i] += running;
        else
            cut_[i - n] += running;
    }

    Eigen::MatrixXd point_cov = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd point_all = Eigen::MatrixXd::Zero(n, n);
    for (const Span& s : spans) {
        point_all(s.lo, s.hi) += s.w;
        if (s.start == s.lo) point_cov(s.lo, s.hi) += s.w;  // forward span
    }
    accumulate_covered(point_cov, volume_);
    accumulate_covered(point_all, intra_);
    if (circular_) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) volume_(i, j) = volume_(j, i);

        // cross_wrap_(i, j) = weight linking [0..j] with [i..n-1], i > j.
        cross_wrap_ = Eigen::MatrixXd::Zero(n, n);
        Eigen::MatrixXd lo_prefix = point_all;
        for (int l = 1; l < n; ++l)
            for (int h = 0; h < n; ++h) lo_prefix(l, h) += lo_prefix(l - 1, h);
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = n - 1; i > j; --i) {
                acc += lo_prefix(j, i);
                cross_wrap_(i, j) = acc;
            }
        }
    }

    wsum_prefix_.assign(n + 1, 0.0);
    for (int r = 0; r < n; ++r)
        wsum_prefix_[r + 1] = wsum_prefix_[r] + g.weighted_degree(order_[r]);

    distinct_gaps_.clear();
    const int last_gap = circular_ ? n : n - 1;
    for (int i = 0; i < last_gap; ++i) {
        double a = sort_key[order_[i]];
        double b = i + 1 < n ? sort_key[order_[i + 1]]
                             : sort_key[order_[0]] + kTwoPi;
        if (b - a > kGapTol) distinct_gaps_.push_back(i);
    }
}

RankRegion RankRegion::line_of(const PlanarGraph& g) {
    std::vector<double> key(g.node_count());
    for (int v = 0; v < g.node_count(); ++v) key[v] = g.radius_of(v);
    RankRegion r;
    r.build(g, ranked_order(g, key), false, key);
    return r;
}

RankRegion RankRegion::circle_of(const PlanarGraph& g) {
    std::vector<double> key(g.node_count());
    for (int v = 0; v < g.node_count(); ++v) key[v] = g.angle_of(v);
    RankRegion r;
    r.build(g, ranked_order(g, key), true, key);
    return r;
}

RankRegion RankRegion::circle_of_subset(const PlanarGraph& g,
                                        const std::vector<NodeId>& members) {
    std::vector<double> key(g.node_count());
    for (int v = 0; v < g.node_count(); ++v) key[v] = g.angle_of(v);
    std::vector<NodeId> order = members;
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (key[a] != key[b]) return key[a] < key[b];
        return a < b;
    });
    RankRegion r;
    r.build(g, std::move(order), true, key);
    return r;
}

double RankRegion::total_intra() const {
    return size() > 1 ? intra_(0, size() - 1) : 0.0;
}

double RankRegion::block_intra(int a, int b) const {
    const int n = size();
    if (!circular_) {
        int lo = a + 1;
        if (lo > b) throw GraphError("empty block");
        return lo == b ? 0.0 : intra_(lo, b);
    }
    if (a == b) return total_intra();  // whole circle
    int lo = (a + 1) % n;
    if (lo <= b) return lo == b ? 0.0 : intra_(lo, b);
    double v = cross_wrap_(lo, b);
    if (lo < n - 1) v += intra_(lo, n - 1);
    if (b > 0) v += intra_(0, b);
    return v;
}

double RankRegion::block_wsum(int a, int b) const {
    const int n = size();
    if (!circular_) {
        int lo = a + 1;
        return wsum_prefix_[b + 1] - wsum_prefix_[lo];
    }
    if (a == b) return total_wsum();
    int lo = (a + 1) % n;
    if (lo <= b) return wsum_prefix_[b + 1] - wsum_prefix_[lo];
    return (wsum_prefix_[n] - wsum_prefix_[lo]) + wsum_prefix_[b + 1];
}

double RankRegion::boundary_cut(int b) const {
    if (!circular_ && b < 0) return 0.0;
    return cut_[b];
}

LinearizedGraph ring_transform(const PlanarGraph& g) {
    return LinearizedGraph{LineKind::Line, RankRegion::line_of(g), g};
}

LinearizedGraph wedge_transform(const PlanarGraph& g) {
    return LinearizedGraph{LineKind::Circle, RankRegion::circle_of(g), g};
}

std::pair<std::vector<double>, Eigen::MatrixXd> cut_volume_line(
    const LinearizedGraph& lg) {
    if (lg.kind != LineKind::Line) throw GraphError("expected a line graph");
    const int n = lg.size();
    std::vector<int> rank_of(n);
    for (int r = 0; r < n; ++r) rank_of[lg.order()[r]] = r;

    std::vector<double> cut(n, 0.0);
    Eigen::MatrixXd vol = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : lg.source.edges()) {
        int x = rank_of[e.u], y = rank_of[e.v];
        if (x > y) std::swap(x, y);
        for (int i = x; i < y; ++i) cut[i] += e.w;
        for (int i = 0; i <= x; ++i)
            for (int j = y; j < n; ++j) vol(i, j) += e.w;
    }
    return {std::move(cut), std::move(vol)};
}

std::pair<std::vector<double>, Eigen::MatrixXd> cut_volume_circle(
    const LinearizedGraph& lg) {
    if (lg.kind != LineKind::Circle) throw GraphError("expected a circle graph");
    const int n = lg.size();
    std::vector<int> rank_of(n);
    for (int r = 0; r < n; ++r) rank_of[lg.order()[r]] = r;

    std::vector<double> cut(n, 0.0);
    Eigen::MatrixXd vol = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : lg.source.edges()) {
        int lo = std::min(rank_of[e.u], rank_of[e.v]);
        int hi = std::max(rank_of[e.u], rank_of[e.v]);
        int x = lo, y = hi;
        if (n - (hi - lo) < hi - lo) {
            x = hi;
            y = lo + n;
        }
        for (int i = x; i < y; ++i) cut[i % n] += e.w;
        if (y < n) {
            for (int i = 0; i <= x; ++i)
                for (int j = y; j < n; ++j) vol(i, j) += e.w;
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) vol(i, j) = vol(j, i);
    return {std::move(cut), std::move(vol)};
}

Partition partition_from_boundaries(const LinearizedGraph& lg,
                                    const std::vector<int>& boundaries) {
    const int n = lg.size();
    const int limit = lg.kind == LineKind::Line ? n - 1 : n;
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        if (boundaries[i] < 0 || boundaries[i] >= limit)
            throw GraphError("boundary index out of range");
        if (i > 0 && boundaries[i] == boundaries[i - 1])
            throw GraphError("duplicate boundary produces an empty block");
        if (i > 0 && boundaries[i] < boundaries[i - 1])
            throw GraphError("boundaries must be strictly increasing");
    }

    Partition p;
    p.assignment.assign(n, 0);
    if (lg.kind == LineKind::Line) {
        p.k = static_cast<int>(boundaries.size()) + 1;
        int block = 0;
        std::size_t next = 0;
        for (int r = 0; r < n; ++r) {
            p.assignment[lg.order()[r]] = block;
            if (next < boundaries.size() && boundaries[next] == r) {
                ++block;
                ++next;
            }
        }
    } else {
        if (boundaries.empty()) {
            p.k = 1;
        } else {
            const int q = static_cast<int>(boundaries.size());
            p.k = q;
            for (int j = 0; j < q; ++j) {
                int a = boundaries[j];
                int b = boundaries[(j + 1) % q];
                for (int r = (a + 1) % n; ; r = (r + 1) % n) {
                    p.assignment[lg.order()[r]] = j;
                    if (r == b) break;
                }
            }
        }
    }
    p.validate(n);
    return p;
}

double nc_from_cutvol(const LinearizedGraph& lg,
                      const std::vector<int>& boundaries) {
    const RankRegion& reg = lg.region;
    const int n = lg.size();
    std::vector<std::pair<int, int>> blocks;  // (left boundary, right boundary)
    if (lg.kind == LineKind::Line) {
        int prev = -1;
        for (int b : boundaries) {
            blocks.emplace_back(prev, b);
            prev = b;
        }
        blocks.emplace_back(prev, n - 1);
    } else {
        if (boundaries.size() <= 1) return 0.0;  // single block, zero cut
        const int q = static_cast<int>(boundaries.size());
        for (int j = 0; j < q; ++j)
            blocks.emplace_back(boundaries[j], boundaries[(j + 1) % q]);
    }

    double nc = 0.0;
    for (auto [a, b] : blocks) {
        double cut = reg.boundary_cut(a) + reg.boundary_cut(b);
        double vol = reg.block_intra(a, b) + cut;
        if (vol <= 0.0) throw GraphError("zero-volume block");
        nc = std::max(nc, cut / vol);
    }
    return nc;
}

}  // namespace ringcut
