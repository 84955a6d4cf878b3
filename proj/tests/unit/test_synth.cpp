#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ringcut/graph.hpp"
#include "ringcut/synth.hpp"

using namespace ringcut;

TEST_CASE("spider web node and edge counts") {
    PlanarGraph a = gen_spider_web({4, 1});
    CHECK(a.node_count() == 4);
    CHECK(a.edge_count() == 4);

    PlanarGraph b = gen_spider_web({4, 2});
    CHECK(b.node_count() == 8);
    CHECK(b.edge_count() == 12);

    PlanarGraph c = gen_spider_web({6, 6});
    CHECK(c.node_count() == 36);
    CHECK(c.edge_count() == 66);

    CHECK_THROWS_AS(gen_spider_web({2, 3}), GraphError);
}

TEST_CASE("spider web geometry: ring i sits at radius i") {
    PlanarGraph web = gen_spider_web({5, 3});
    for (int v = 0; v < web.node_count(); ++v)
        CHECK(web.radius_of(v) == doctest::Approx(1.0 + v / 5).epsilon(1e-12));
    CHECK(web.center().x == 0.0);
    CHECK(web.center().y == 0.0);
}

TEST_CASE("plant_partition marks cross edges low and intra edges high") {
    PlanarGraph web = gen_spider_web({6, 6});
    PlantSpec spec;
    spec.k_r = 2;
    spec.k_w = 2;
    spec.low_weights = {2};
    spec.high_weights = {20};
    spec.seed = 7;
    PlantedInstance inst = plant_partition(web, spec);
    inst.partition.validate(web.node_count());
    CHECK(inst.partition.k == 3);
    CHECK(inst.partition.provenance.has_value());
    CHECK(inst.partition.provenance->radii.size() == 1);
    CHECK(inst.partition.provenance->angles.size() == 2);

    for (const Edge& e : inst.graph.edges()) {
        bool cross = inst.partition.assignment[e.u] !=
                     inst.partition.assignment[e.v];
        CHECK(e.w == (cross ? 2.0 : 20.0));
    }
}

TEST_CASE("pure 2-ring plant cuts exactly M radial edges") {
    PlanarGraph web = gen_spider_web({5, 4});
    PlantSpec spec;
    spec.k_r = 2;
    spec.k_w = 1;
    spec.low_weights = {2};
    spec.high_weights = {20};
    spec.seed = 3;
    PlantedInstance inst = plant_partition(web, spec);
    int low_edges = 0;
    for (const Edge& e : inst.graph.edges())
        if (e.w == 2.0) ++low_edges;
    CHECK(low_edges == 5);
}

TEST_CASE("degenerate single-block plant is rejected") {
    PlanarGraph web = gen_spider_web({4, 2});
    PlantSpec spec;
    spec.k_r = 1;
    spec.k_w = 1;
    CHECK_THROWS_AS(plant_partition(web, spec), GraphError);

    PlantSpec too_many;
    too_many.k_r = 4;  // 3 ring boundaries, only 1 gap
    too_many.k_w = 1;
    CHECK_THROWS_AS(plant_partition(web, too_many), GraphError);
}

TEST_CASE("plant determinism under seed") {
    PlanarGraph web = gen_spider_web({6, 5});
    PlantSpec spec;
    spec.k_r = 2;
    spec.k_w = 3;
    spec.seed = 99;
    PlantedInstance a = plant_partition(web, spec);
    PlantedInstance b = plant_partition(web, spec);
    CHECK(a.partition.assignment == b.partition.assignment);
    for (int e = 0; e < a.graph.edge_count(); ++e)
        CHECK(a.graph.edges()[e].w == b.graph.edges()[e].w);
}

TEST_CASE("gen_random_weights ranges and determinism") {
    PlanarGraph web = gen_spider_web({6, 4});
    PlanarGraph a = gen_random_weights(web, 1.0, 10.0, 5);
    PlanarGraph b = gen_random_weights(web, 1.0, 10.0, 5);
    PlanarGraph c = gen_random_weights(web, 1.0, 10.0, 6);
    bool any_diff = false;
    for (int e = 0; e < a.edge_count(); ++e) {
        CHECK(a.edges()[e].w >= 1.0);
        CHECK(a.edges()[e].w < 10.0);
        CHECK(a.edges()[e].w == b.edges()[e].w);
        any_diff |= a.edges()[e].w != c.edges()[e].w;
    }
    CHECK(any_diff);
    CHECK_THROWS_AS(gen_random_weights(web, 2.0, 2.0, 1), GraphError);

    PlanarGraph tiny = gen_random_weights(web, 5.0, 5.0 + 1e-9, 2);
    for (const Edge& e : tiny.edges()) CHECK(e.w == doctest::Approx(5.0));
}

TEST_CASE("sample_connected_subgraph") {
    PlanarGraph web = gen_spider_web({10, 10});
    PlanarGraph whole = sample_connected_subgraph(web, 100, 1);
    CHECK(whole.node_count() == 100);
    CHECK(whole.edge_count() == web.edge_count());

    PlanarGraph single = sample_connected_subgraph(web, 1, 2);
    CHECK(single.node_count() == 1);
    CHECK(single.edge_count() == 0);

    PlanarGraph mid = sample_connected_subgraph(web, 50, 3);
    CHECK(mid.node_count() == 50);  // construction validates connectivity

    CHECK_THROWS_AS(sample_connected_subgraph(web, 101, 4), GraphError);
}
