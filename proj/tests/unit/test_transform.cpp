#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ringcut/rng.hpp"
#include "ringcut/synth.hpp"
#include "ringcut/transform.hpp"

using namespace ringcut;

namespace {

PlanarGraph rotate90(const PlanarGraph& g) {
    std::vector<Point> nodes;
    for (const Point& p : g.nodes()) nodes.push_back({-p.y, p.x});
    Point c = g.center();
    return PlanarGraph(std::move(nodes), g.edges(), Point{-c.y, c.x});
}

// boundary rank index of the gap after the last node with radius <= r
int rank_of_radius_gap(const LinearizedGraph& lg, double r) {
    int b = -1;
    for (std::size_t i = 0; i < lg.order().size(); ++i)
        if (lg.source.radius_of(lg.order()[i]) <= r) b = static_cast<int>(i);
    return b;
}

}  // namespace

TEST_CASE("ring_transform orders nodes by radius") {
    PlanarGraph g({{2.5, 0}, {1, 0}, {7, 0}}, {{0, 1, 1}, {1, 2, 1}},
                  Point{0, 0});
    LinearizedGraph lg = ring_transform(g);
    CHECK(lg.order() == std::vector<NodeId>{1, 0, 2});
}

TEST_CASE("ring_transform is rotation invariant") {
    PlanarGraph web = gen_random_weights(gen_spider_web({5, 4}), 1, 10, 11);
    LinearizedGraph a = ring_transform(web);
    LinearizedGraph b = ring_transform(rotate90(web));
    CHECK(a.order() == b.order());
    for (std::size_t i = 0; i < a.cut().size(); ++i)
        CHECK(a.cut()[i] == doctest::Approx(b.cut()[i]).epsilon(1e-12));
    CHECK((a.volume() - b.volume()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("equal radii break ties by node id, deterministically") {
    PlanarGraph web = gen_spider_web({6, 3});
    LinearizedGraph a = ring_transform(web);
    LinearizedGraph b = ring_transform(web);
    CHECK(a.order() == b.order());
    for (int r = 0; r + 1 < 18; ++r) {
        double ra = web.radius_of(a.order()[r]);
        double rb = web.radius_of(a.order()[r + 1]);
        if (std::abs(ra - rb) < 1e-9) CHECK(a.order()[r] < a.order()[r + 1]);
    }
}

TEST_CASE("wedge_transform orders by angle and ignores radius") {
    constexpr double d2r = std::numbers::pi / 180.0;
    auto mk = [&](double scale) {
        std::vector<Point> nodes;
        for (double deg : {10.0, 200.0, 350.0})
            nodes.push_back({scale * std::cos(deg * d2r),
                             scale * std::sin(deg * d2r)});
        return PlanarGraph(std::move(nodes), {{0, 1, 1}, {1, 2, 2}},
                           Point{0, 0});
    };
    LinearizedGraph a = wedge_transform(mk(1.0));
    LinearizedGraph b = wedge_transform(mk(3.0));
    CHECK(a.order() == std::vector<NodeId>{0, 1, 2});
    CHECK(a.order() == b.order());
    CHECK((a.volume() - b.volume()).cwiseAbs().maxCoeff() < 1e-12);

    LinearizedGraph c = wedge_transform(mk(1.0));
    CHECK(a.order() == c.order());
}

TEST_CASE("cut_volume_line on a 3-node path") {
    PlanarGraph g({{1, 0}, {2, 0}, {3, 0}}, {{0, 1, 2}, {1, 2, 5}},
                  Point{0, 0});
    LinearizedGraph lg = ring_transform(g);
    auto [cut, vol] = cut_volume_line(lg);
    CHECK(cut == std::vector<double>{2, 5, 0});
    CHECK(vol(0, 1) == 2);
    CHECK(vol(1, 2) == 5);
    CHECK(vol(0, 2) == 7);
    // prefix-sum construction in the transform matches the literal loops
    CHECK(lg.cut() == cut);
    CHECK((lg.volume() - vol).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("an edge skipping a node covers both boundaries") {
    PlanarGraph g({{1, 0}, {2, 0}, {3, 0}}, {{0, 2, 1}, {0, 1, 0}, {1, 2, 0}},
                  Point{0, 0});
    LinearizedGraph lg = ring_transform(g);
    CHECK(lg.cut() == std::vector<double>{1, 1, 0});
}

TEST_CASE("cut_volume_circle on a 4-cycle") {
    PlanarGraph g = gen_spider_web({4, 1});
    LinearizedGraph lg = wedge_transform(g);
    auto [cut, vol] = cut_volume_circle(lg);
    CHECK(cut == std::vector<double>{1, 1, 1, 1});
    CHECK(lg.cut() == cut);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j) CHECK(vol(i, j) == vol(j, i));
    CHECK((lg.volume() - vol).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single edge on a 3-node circle") {
    PlanarGraph g({{1, 0}, {-0.5, 0.87}, {-0.5, -0.87}},
                  {{0, 1, 3.0}, {1, 2, 0.0}}, Point{0, 0});
    LinearizedGraph lg = wedge_transform(g);
    CHECK(lg.cut()[0] == doctest::Approx(3.0));
    CHECK(lg.cut()[1] == doctest::Approx(0.0));
    CHECK(lg.cut()[2] == doctest::Approx(0.0));
}

TEST_CASE("literal loops and prefix-sum construction agree on random webs") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        int m = 3 + static_cast<int>(rng.index(5));
        int n = 1 + static_cast<int>(rng.index(4));
        PlanarGraph g = gen_random_weights(gen_spider_web({m, n}), 1, 10,
                                           rng.next_u64());
        LinearizedGraph line = ring_transform(g);
        auto [lc, lv] = cut_volume_line(line);
        REQUIRE(line.cut().size() == lc.size());
        for (std::size_t i = 0; i < lc.size(); ++i)
            CHECK(line.cut()[i] == doctest::Approx(lc[i]).epsilon(1e-12));
        CHECK((line.volume() - lv).cwiseAbs().maxCoeff() < 1e-9);

        LinearizedGraph circle = wedge_transform(g);
        auto [cc, cv] = cut_volume_circle(circle);
        REQUIRE(circle.cut().size() == cc.size());
        for (std::size_t i = 0; i < cc.size(); ++i)
            CHECK(circle.cut()[i] == doctest::Approx(cc[i]).epsilon(1e-12));
        CHECK((circle.volume() - cv).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("partition_from_boundaries") {
    PlanarGraph g({{1, 0}, {2, 0}, {3, 0}, {4, 0}},
                  {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}, Point{0, 0});
    LinearizedGraph lg = ring_transform(g);

    Partition p = partition_from_boundaries(lg, {1});
    CHECK(p.k == 2);
    CHECK(p.assignment == std::vector<int>{0, 0, 1, 1});

    Partition one = partition_from_boundaries(lg, {});
    CHECK(one.k == 1);

    CHECK_THROWS_AS(partition_from_boundaries(lg, {1, 1}), GraphError);
    CHECK_THROWS_AS(partition_from_boundaries(lg, {3}), GraphError);

    PlanarGraph cg = gen_spider_web({4, 1});
    LinearizedGraph circle = wedge_transform(cg);
    Partition arcs = partition_from_boundaries(circle, {0, 2});
    CHECK(arcs.k == 2);
    CHECK(arcs.assignment[1] == arcs.assignment[2]);
    CHECK(arcs.assignment[3] == arcs.assignment[0]);
    CHECK(arcs.assignment[0] != arcs.assignment[1]);
}

TEST_CASE("NC reassembled from (C,V) matches the direct computation: rings") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        int m = 3 + static_cast<int>(rng.index(6));
        int n = 2 + static_cast<int>(rng.index(5));
        PlanarGraph g = gen_random_weights(gen_spider_web({m, n}), 1, 10,
                                           rng.next_u64());
        LinearizedGraph lg = ring_transform(g);

        int k_r = 2 + static_cast<int>(rng.index(std::min(3, n - 1)));
        std::vector<int> gaps = Rng(rng.next_u64()).sorted_subset(n - 1, k_r - 1);
        std::vector<int> bounds;
        for (int gap : gaps)
            bounds.push_back(rank_of_radius_gap(lg, gap + 1.5));

        double via_cutvol = nc_from_cutvol(lg, bounds);
        Partition p = partition_from_boundaries(lg, bounds);
        double direct = normalized_cut(g, p, VolumeConvention::PaperEq2);
        CHECK(via_cutvol == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("NC reassembled from (C,V) matches the direct computation: wedges") {
    Rng rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        int m = 4 + static_cast<int>(rng.index(6));
        int n = 1 + static_cast<int>(rng.index(4));
        PlanarGraph g = gen_random_weights(gen_spider_web({m, n}), 1, 10,
                                           rng.next_u64());
        LinearizedGraph lg = wedge_transform(g);

        // wedge boundaries at angle gaps: spoke gap s covers ranks
        // [s*n, (s+1)*n); its boundary is the last rank of the spoke
        int k_w = 2 + static_cast<int>(rng.index(std::min(3, m - 1)));
        std::vector<int> spokes = Rng(rng.next_u64()).sorted_subset(m, k_w);
        std::vector<int> bounds;
        for (int s : spokes) bounds.push_back(s * n + n - 1);

        double via_cutvol = nc_from_cutvol(lg, bounds);
        Partition p = partition_from_boundaries(lg, bounds);
        double direct = normalized_cut(g, p, VolumeConvention::PaperEq2);
        CHECK(via_cutvol == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("covered volume widens monotonically on lines") {
    PlanarGraph g = gen_random_weights(gen_spider_web({5, 3}), 1, 10, 31);
    LinearizedGraph lg = ring_transform(g);
    const auto& v = lg.volume();
    for (int i = 0; i < lg.size(); ++i)
        for (int j = i + 1; j < lg.size(); ++j) {
            if (i > 0) CHECK(v(i - 1, j) >= v(i, j));
            CHECK(v(i, j) >= v(i, j - 1));
        }
}

TEST_CASE("relabeling nodes leaves C and V unchanged") {
    // distinct radii and angles so the rank order is id-independent
    std::vector<Point> pts;
    for (int i = 0; i < 10; ++i) {
        double r = 1.0 + 0.37 * i;
        double a = 2.39996 * i;
        pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    std::vector<Edge> base_edges;
    for (int i = 0; i + 1 < 10; ++i)
        base_edges.push_back({i, i + 1, 1.0 + 0.1 * i});
    base_edges.push_back({0, 5, 2.0});
    base_edges.push_back({2, 7, 3.0});
    PlanarGraph g(std::move(pts), std::move(base_edges), Point{0, 0});

    const int n = g.node_count();
    std::vector<Point> nodes(n);
    std::vector<Edge> edges = g.edges();
    for (int v = 0; v < n; ++v) nodes[n - 1 - v] = g.nodes()[v];
    for (Edge& e : edges) {
        e.u = n - 1 - e.u;
        e.v = n - 1 - e.v;
    }
    PlanarGraph relabeled(std::move(nodes), std::move(edges), g.center());

    LinearizedGraph a = ring_transform(g);
    LinearizedGraph b = ring_transform(relabeled);
    for (std::size_t i = 0; i < a.cut().size(); ++i)
        CHECK(a.cut()[i] == doctest::Approx(b.cut()[i]).epsilon(1e-12));
    CHECK((a.volume() - b.volume()).cwiseAbs().maxCoeff() < 1e-9);
}
