#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "ringcut/graph.hpp"
#include "ringcut/rng.hpp"
#include "ringcut/solver.hpp"
#include "ringcut/synth.hpp"
#include "ringcut/transform.hpp"

using namespace ringcut;

namespace {

// Independent minimax enumeration over all boundary sets; same segment
// objective as dp_ring_partition.
double dp_oracle(const std::vector<double>& cut, const Eigen::MatrixXd& vol,
                 int k, int last) {
    auto sector = [&](int a, int b) {
        double s = (a < 0 ? 0.0 : cut[a]) + cut[b];
        double v = vol(a + 1, b) + s;
        return v > 0.0 ? s / v : std::numeric_limits<double>::infinity();
    };
    std::vector<int> combo(k - 1);
    for (int i = 0; i < k - 1; ++i) combo[i] = i;
    double best = std::numeric_limits<double>::infinity();
    if (k == 1) return sector(-1, last);
    while (true) {
        double worst = 0.0;
        int prev = -1;
        for (int b : combo) {
            worst = std::max(worst, sector(prev, b));
            prev = b;
        }
        worst = std::max(worst, sector(prev, last));
        best = std::min(best, worst);

        int i = k - 2;
        while (i >= 0 && combo[i] == last - (k - 1 - i)) --i;
        if (i < 0) break;
        ++combo[i];
        for (int j = i + 1; j < k - 1; ++j) combo[j] = combo[j - 1] + 1;
    }
    return best;
}

// Exhaustive candidate enumeration with the direct Eq.-3 objective.
double brute_oracle(const PlanarGraph& g, const RingWedgeConfig& cfg) {
    LinearizedGraph line = ring_transform(g);
    const int n = g.node_count();
    double best = std::numeric_limits<double>::infinity();

    auto eval_wedges = [&](const std::vector<int>& ring_bounds) {
        int interface = ring_bounds.empty() ? -1 : ring_bounds.back();
        std::vector<NodeId> members(line.order().begin() + interface + 1,
                                    line.order().end());
        PlanarGraph sub = g;  // angles come from the shared center
        LinearizedGraph circle = wedge_transform(sub);
        // circle ranks of the region in angular order
        std::vector<int> region;
        for (NodeId v : circle.order()) {
            for (NodeId m : members)
                if (m == v) region.push_back(v);
        }
        const int msz = static_cast<int>(region.size());

        std::vector<int> combo(cfg.k_w);
        for (int i = 0; i < cfg.k_w; ++i) combo[i] = i;
        while (true) {
            // assemble the partition directly
            Partition p;
            p.k = cfg.k();
            p.assignment.assign(n, 0);
            int blk = 0;
            std::size_t next = 0;
            for (int r = 0; r <= interface; ++r) {
                p.assignment[line.order()[r]] = blk;
                if (next < ring_bounds.size() && ring_bounds[next] == r)
                    ++blk, ++next;
            }
            const int q = cfg.k_w;
            for (int j = 0; j < q; ++j) {
                int a = combo[j];
                int b = combo[(j + 1) % q];
                for (int r = (a + 1) % msz;; r = (r + 1) % msz) {
                    p.assignment[region[r]] = cfg.k_r - 1 + j;
                    if (r == b) break;
                }
            }
            best = std::min(
                best, normalized_cut(g, p, VolumeConvention::PaperEq2));

            int i = cfg.k_w - 1;
            while (i >= 0 && combo[i] == msz - (cfg.k_w - i)) --i;
            if (i < 0) break;
            ++combo[i];
            for (int j = i + 1; j < cfg.k_w; ++j) combo[j] = combo[j - 1] + 1;
        }
    };

    if (cfg.k_r == 1) {
        eval_wedges({});
        return best;
    }
    std::vector<int> rcombo(cfg.k_r - 1);
    for (int i = 0; i < cfg.k_r - 1; ++i) rcombo[i] = i;
    while (true) {
        if (n - 1 - rcombo.back() >= cfg.k_w) eval_wedges(rcombo);
        int i = cfg.k_r - 2;
        while (i >= 0 && rcombo[i] == n - 2 - (cfg.k_r - 2 - i)) --i;
        if (i < 0) break;
        ++rcombo[i];
        for (int j = i + 1; j < cfg.k_r - 1; ++j) rcombo[j] = rcombo[j - 1] + 1;
    }
    return best;
}

}  // namespace

TEST_CASE("enumerate_configs") {
    auto two = enumerate_configs(2);
    REQUIRE(two.size() == 2);
    CHECK(two[0].k_r == 1);
    CHECK(two[0].k_w == 2);
    CHECK(two[1].k_r == 2);
    CHECK(two[1].k_w == 1);
    CHECK(enumerate_configs(4).size() == 4);
    CHECK(enumerate_configs(6).size() == 6);
    CHECK_THROWS_AS(enumerate_configs(1), GraphError);
}

TEST_CASE("dp with a single segment is free") {
    PlanarGraph g = gen_random_weights(gen_spider_web({4, 3}), 1, 10, 3);
    LinearizedGraph lg = ring_transform(g);
    DpResult dp = dp_ring_partition(lg.cut(), lg.volume(), 1);
    CHECK(dp.nc == doctest::Approx(0.0));
    CHECK(dp.boundaries.empty());
}

TEST_CASE("dp on the 3-node example equals the split-point check") {
    std::vector<double> cut{2, 5, 0};
    Eigen::MatrixXd vol = Eigen::MatrixXd::Zero(3, 3);
    vol(0, 1) = 2;
    vol(1, 2) = 5;
    vol(0, 2) = 7;
    DpResult dp = dp_ring_partition(cut, vol, 2);
    CHECK(dp.nc == doctest::Approx(dp_oracle(cut, vol, 2, 2)));
    REQUIRE(dp.boundaries.size() == 1);
}

TEST_CASE("dp equals the exhaustive oracle on random lines") {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        int m = 3 + static_cast<int>(rng.index(4));
        int rings = 1 + static_cast<int>(rng.index(4));
        if (m * rings > 25) continue;
        PlanarGraph g = gen_random_weights(gen_spider_web({m, rings}), 1, 10,
                                           rng.next_u64());
        LinearizedGraph lg = ring_transform(g);
        for (int k = 2; k <= 4; ++k) {
            if (k > lg.size()) continue;
            DpResult dp = dp_ring_partition(lg.cut(), lg.volume(), k);
            double oracle = dp_oracle(lg.cut(), lg.volume(), k, lg.size() - 1);
            CHECK(std::abs(dp.nc - oracle) <= 1e-12);

            // the reconstructed boundaries reproduce the value
            double worst = 0.0;
            int prev = -1;
            auto sector = [&](int a, int b) {
                double s = (a < 0 ? 0.0 : lg.cut()[a]) + lg.cut()[b];
                return s / (lg.volume()(a + 1, b) + s);
            };
            for (int b : dp.boundaries) {
                worst = std::max(worst, sector(prev, b));
                prev = b;
            }
            worst = std::max(worst, sector(prev, lg.size() - 1));
            CHECK(worst == doctest::Approx(dp.nc).epsilon(1e-12));
        }
    }
}

TEST_CASE("dp rejects more segments than nodes") {
    PlanarGraph g = gen_spider_web({4, 1});
    LinearizedGraph lg = ring_transform(g);
    CHECK_THROWS_AS(dp_ring_partition(lg.cut(), lg.volume(), 5), GraphError);
}

TEST_CASE("brute force on a 4-cycle equals full enumeration") {
    PlanarGraph g = gen_random_weights(gen_spider_web({4, 1}), 1, 10, 13);
    RingWedgeConfig cfg{1, 2};
    SolveResult r = brute_force(g, cfg);
    CHECK(r.nc == doctest::Approx(brute_oracle(g, cfg)).epsilon(1e-12));
    CHECK(r.nc == doctest::Approx(normalized_cut(g, r.partition,
                                                 VolumeConvention::PaperEq2))
                      .epsilon(1e-12));
}

TEST_CASE("brute force equals the direct-enumeration oracle on small webs") {
    Rng rng(29);
    for (int trial = 0; trial < 6; ++trial) {
        PlanarGraph g = gen_random_weights(gen_spider_web({4, 2}), 1, 10,
                                           rng.next_u64());
        for (const RingWedgeConfig& cfg :
             {RingWedgeConfig{1, 3}, RingWedgeConfig{2, 2},
              RingWedgeConfig{2, 1}}) {
            SolveResult r = brute_force(g, cfg);
            CHECK(r.nc ==
                  doctest::Approx(brute_oracle(g, cfg)).epsilon(1e-12));
        }
    }
}

TEST_CASE("brute force recovers a planted partition") {
    PlanarGraph web = gen_spider_web({6, 6});
    PlantSpec spec;
    spec.k_r = 2;
    spec.k_w = 3;
    spec.low_weights = {2};
    spec.high_weights = {20};
    spec.seed = 77;
    PlantedInstance inst = plant_partition(web, spec);
    SolveResult r = brute_force(inst.graph, {spec.k_r, spec.k_w});
    CHECK(r.partition.same_blocks_as(inst.partition));
    CHECK(r.nc == doctest::Approx(normalized_cut(
                      inst.graph, inst.partition, VolumeConvention::PaperEq2)));
}

TEST_CASE("brute force rejects more rings than radius gaps") {
    PlanarGraph g = gen_spider_web({4, 3});
    CHECK_THROWS_AS(brute_force(g, {4, 1}), GraphError);   // 4 rings, 3 radii
    CHECK_THROWS_AS(brute_force(g, {1, 5}), GraphError);   // 5 wedges, 4 angles
    CHECK_NOTHROW(brute_force(g, {3, 1}));
}

TEST_CASE("brute force budget guard") {
    PlanarGraph g = gen_spider_web({8, 8});
    CHECK_THROWS_AS(brute_force(g, {1, 4}, 100), GraphError);
}

TEST_CASE("random search is seed-deterministic and dominated by brute force") {
    PlanarGraph g = gen_random_weights(gen_spider_web({5, 3}), 1, 10, 51);
    RingWedgeConfig cfg{2, 2};
    SolveResult a = random_search(g, cfg, 200, 9);
    SolveResult b = random_search(g, cfg, 200, 9);
    CHECK(a.nc == b.nc);
    CHECK(a.partition.assignment == b.partition.assignment);

    SolveResult brute = brute_force(g, cfg);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        SolveResult r = random_search(g, cfg, 100, seed);
        CHECK(brute.nc <= r.nc + 1e-12);
    }
}

TEST_CASE("random search saturates tiny candidate spaces") {
    PlanarGraph g = gen_random_weights(gen_spider_web({3, 2}), 1, 10, 61);
    RingWedgeConfig cfg{2, 2};
    // the candidate space holds 20 boundary pairs; 1000 = 50x draws
    SolveResult r = random_search(g, cfg, 1000, 4);
    SolveResult brute = brute_force(g, cfg);
    CHECK(r.nc == doctest::Approx(brute.nc).epsilon(1e-12));
}
