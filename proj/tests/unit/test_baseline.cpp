#include <doctest.h>

#include "helpers.hpp"

using namespace mareach;
using testutil::random_vec;

TEST_CASE("augmented simulation equals the per-agent recursion") {
    Scenario s = testutil::random_chain_scenario(3, 3, 2, {4}, 61, 0.3);
    require_valid(s);
    AugmentedSystem aug = augment(s);
    CHECK(aug.total_dim() == 4 * 3);  // static lead + 3 vehicles
    CHECK(aug.verified_ids == std::vector<int>{2, 3, 4});

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        std::map<int, Vec> state;
        for (const auto& a : s.graph.agents)
            state[a.id] = a.is_static ? a.static_state_at(0) : random_vec(3, rng);

        // One augmented step.
        Vec x(aug.total_dim());
        for (const auto& [id, v] : state) x.segment(aug.block_offset(id), 3) = v;
        Vec u = evaluate(aug.net_aug, x).u;
        Vec x_next = aug.A_aug * x + aug.B_aug * u + aug.w_at(s, 0);

        Trajectory t = simulate(s, state, 1);
        for (const auto& a : s.graph.agents) {
            Vec got = x_next.segment(aug.block_offset(a.id), 3);
            CHECK((got - t[a.id][1]).lpNorm<Eigen::Infinity>() <= 1e-10);
        }
    }
}

TEST_CASE("chain topology gives a lower-block-bidiagonal augmented matrix") {
    Scenario s = testutil::platoon_scenario(2, 77, {4, 4});
    AugmentedSystem aug = augment(s);
    const int n = 3;
    for (int bi = 0; bi < 3; ++bi)
        for (int bj = 0; bj < 3; ++bj) {
            Mat blk = aug.A_aug.block(bi * n, bj * n, n, n);
            const bool expected_nonzero = (bi == bj) || (bj == bi - 1);
            if (!expected_nonzero) CHECK(blk.cwiseAbs().maxCoeff() == 0.0);
        }
}

TEST_CASE("M=1: monolithic bounds match per-agent bounds") {
    Scenario s = testutil::platoon_scenario(1, 99, {3, 3}, 0.5, 0.2);
    require_valid(s);
    ReachResult per_agent = multi_step(s, 2);
    ReachResult mono = monolithic_multi_step(s, 2);
    CHECK(mono.mode == "monolithic");
    for (int k = 0; k <= 2; ++k) {
        const Box& a = per_agent.boxes.at(2)[static_cast<size_t>(k)];
        const Box& b = mono.boxes.at(2)[static_cast<size_t>(k)];
        CHECK((a.lower - b.lower).cwiseAbs().maxCoeff() <= 1e-6);
        CHECK((a.upper - b.upper).cwiseAbs().maxCoeff() <= 1e-6);
    }
}

TEST_CASE("M=2: bounds agree across modes and both stay sound") {
    Scenario s = testutil::platoon_scenario(2, 123, {4, 4}, 0.5, 0.15);
    require_valid(s);
    ReachResult per_agent = multi_step(s, 2);
    ReachResult mono = monolithic_multi_step(s, 2);

    double max_diff = 0.0;
    for (int id : s.verified_ids())
        for (int k = 0; k <= 2; ++k) {
            const Box& a = per_agent.boxes.at(id)[static_cast<size_t>(k)];
            const Box& b = mono.boxes.at(id)[static_cast<size_t>(k)];
            max_diff = std::max(max_diff, (a.lower - b.lower).cwiseAbs().maxCoeff());
            max_diff = std::max(max_diff, (a.upper - b.upper).cwiseAbs().maxCoeff());
        }
    CHECK(max_diff <= 1e-3);

    CHECK(containment_check(per_agent.boxes, s, 500, 1e-6, 3).ok());
    CHECK(containment_check(mono.boxes, s, 500, 1e-6, 3).ok());
}

TEST_CASE("monolithic solve count and per-step facet layout") {
    Scenario s = testutil::platoon_scenario(2, 31, {3, 3}, 0.5, 0.1);
    ReachResult mono = monolithic_multi_step(s, 1);
    // 2 * M * n_x facets over the verified agents; the static block advances
    // analytically.
    CHECK(mono.solves.size() == 2 * 2 * 3);
}

TEST_CASE("monolithic mode rejects model uncertainty") {
    Scenario s = testutil::platoon_scenario(1, 5, {3, 3});
    UncertaintySpec u;
    u.A_vertices[2] = {0.99 * s.graph.agent(2).A_self, 1.01 * s.graph.agent(2).A_self};
    s.uncertainty = u;
    CHECK_THROWS_AS(monolithic_multi_step(s, 1), Error);
}
