#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rlc/error.hpp"
#include "rlc/io.hpp"
#include "rlc/pathing.hpp"
#include "rlc/roadmap.hpp"
#include "support.hpp"

#include <algorithm>

using namespace rlc;
using rlc::test::config;

namespace {

BuildParams params(int n, int k, std::uint64_t seed = 3) {
    BuildParams p;
    p.n = n;
    p.k = k;
    p.trials = 20;
    p.gamma = 0.95;
    p.seed = seed;
    return p;
}

const RoadmapEdge* find_edge(const Roadmap& r, int from, int to) {
    for (const auto& e : r.edges())
        if (e.from == from && e.to == to) return &e;
    return nullptr;
}

Roadmap line_roadmap(std::vector<double> xs) {
    BuildParams p = params(static_cast<int>(xs.size()) + 1, 2);
    std::vector<Configuration> ms{Configuration()};
    for (double x : xs) ms.push_back(config({x, 0.5}));
    ms.emplace_back();
    return Roadmap(p, ms, {});
}

} // namespace

TEST_CASE("two milestones in an empty world connect both ways") {
    const auto s = test::open_square();
    const auto r = build_roadmap(s, params(3, 1));
    REQUIRE(r.node_count() == 4);
    CHECK(r.is_sampled(1));
    CHECK(r.is_sampled(2));
    CHECK_FALSE(r.is_sampled(0));
    CHECK_FALSE(r.is_sampled(3));
    REQUIRE(r.edges().size() == 2);
    for (const auto& [a, b] : {std::pair{1, 2}, std::pair{2, 1}}) {
        const auto* e = find_edge(r, a, b);
        REQUIRE(e);
        CHECK(e->stats.p_hat == 1.0);
        CHECK(e->stats.p_lower == 1.0);
        CHECK(*e->stats.c_hat <= config_distance(r.milestones()[1], r.milestones()[2]));
    }
}

TEST_CASE("zero neighbors is rejected") {
    CHECK_THROWS_AS(build_roadmap(test::open_square(), params(5, 0)), Error);
    CHECK_THROWS_AS(build_roadmap(test::open_square(), params(1, 3)), Error);
}

TEST_CASE("roadmap construction is deterministic") {
    auto s = test::open_square({0.02});
    s.obstacles = {test::disc_obstacle(0.15, 0.5, 0.5, 0.05, 0.05)};
    auto p = params(50, 5, 17);
    p.controller.actuation_noise_std = 0.003;
    const auto a = io::to_json(build_roadmap(s, p)).dump();
    const auto b = io::to_json(build_roadmap(s, p)).dump();
    CHECK(a == b);
    p.seed = 18;
    CHECK(io::to_json(build_roadmap(s, p)).dump() != a);
}

TEST_CASE("edges come from nearest neighbor pairs in either direction") {
    const auto s = test::open_square();
    const auto r = build_roadmap(s, params(30, 3));
    for (int i = 1; i < 30; ++i) {
        const auto nn = nearest_neighbors(r, r.milestones()[static_cast<std::size_t>(i)], 3, i);
        for (int j : nn) {
            CHECK(find_edge(r, i, j));
            CHECK(find_edge(r, j, i));
        }
    }
    for (const auto& e : r.edges()) {
        const auto nf = nearest_neighbors(r, r.milestones()[static_cast<std::size_t>(e.from)], 3, e.from);
        const auto nt = nearest_neighbors(r, r.milestones()[static_cast<std::size_t>(e.to)], 3, e.to);
        const bool listed = std::count(nf.begin(), nf.end(), e.to) || std::count(nt.begin(), nt.end(), e.from);
        CHECK(listed);
        CHECK(e.from != e.to);
        CHECK(e.stats.p_lower > 0.0);
        CHECK(e.stats.p_lower <= e.stats.p_hat);
    }
}

TEST_CASE("blocked pairs produce no edge") {
    auto s = test::open_square({0.02});
    s.obstacles = {test::rect_obstacle(0.04, 2.0, 0.5, 0.5)};
    const auto r = build_roadmap(s, params(80, 6));
    for (const auto& e : r.edges()) {
        const double xa = r.milestones()[static_cast<std::size_t>(e.from)][0];
        const double xb = r.milestones()[static_cast<std::size_t>(e.to)][0];
        CHECK((xa - 0.5) * (xb - 0.5) > 0);
    }
}

TEST_CASE("nearest neighbors ordering") {
    const auto r = line_roadmap({0.1, 0.2, 0.3});
    const auto all = nearest_neighbors(r, config({0.0, 0.5}), 10);
    CHECK(all == std::vector<int>{1, 2, 3});
    CHECK(nearest_neighbors(r, config({0.0, 0.5}), 2) == std::vector<int>{1, 2});
    const auto at = nearest_neighbors(r, config({0.3, 0.5}), 3);
    CHECK(at.front() == 3);
    CHECK(nearest_neighbors(r, config({0.3, 0.5}), 3, 3) == std::vector<int>{2, 1});
}

TEST_CASE("query in an empty world connects to k milestones") {
    const auto s = test::open_square();
    const auto r = build_roadmap(s, params(12, 4));
    const auto q = insert_query(s, r, config({0.2, 0.2}), config({0.8, 0.8}), 4, 10, 0.95, 9);
    CHECK(q.start_id == 0);
    CHECK(q.goal_id == 12);
    CHECK(q.roadmap.out_edges(q.start_id).size() == 4);
    int into_goal = 0;
    for (const auto& e : q.roadmap.edges()) into_goal += e.to == q.goal_id;
    CHECK(into_goal == 4);

    const auto wide = insert_query(s, r, config({0.2, 0.2}), config({0.8, 0.8}), 50, 10, 0.95, 9);
    CHECK(wide.roadmap.out_edges(0).size() == 11);
}

TEST_CASE("goal on top of a milestone is still a separate node") {
    const auto s = test::open_square();
    const auto r = build_roadmap(s, params(10, 3));
    const Configuration at = r.milestones()[4];
    const auto q = insert_query(s, r, config({0.05, 0.05}), at, 3, 10, 0.95, 9);
    CHECK(q.goal_id != 4);
    const auto* e = find_edge(q.roadmap, 4, q.goal_id);
    REQUIRE(e);
    CHECK(e->stats.p_lower == 1.0);
    CHECK(*e->stats.c_hat == 0.0);
}

TEST_CASE("query endpoints inside obstacles are rejected") {
    auto s = test::open_square();
    s.obstacles = {test::disc_obstacle(0.1, 0.5, 0.5)};
    const auto r = build_roadmap(s, params(10, 3));
    try {
        insert_query(s, r, config({0.5, 0.5}), config({0.9, 0.9}), 3, 10, 0.95, 1);
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::validation);
    }
}

TEST_CASE("isolated goal is unreachable") {
    auto s = test::open_square({0.02});
    // The goal sits in a sealed pocket in the corner.
    s.obstacles = {test::rect_obstacle(0.02, 0.2, 0.91, 0.0), test::rect_obstacle(0.2, 0.02, 1.0, 0.09)};
    const auto r = build_roadmap(s, params(40, 5));
    try {
        const auto q = insert_query(s, r, config({0.2, 0.8}), config({0.96, 0.04}), 5, 10, 0.95, 1);
        max_prob_path(planning_graph(q.roadmap), q.start_id, q.goal_id);
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unreachable);
    }
}

TEST_CASE("a second query replaces the first") {
    const auto s = test::open_square();
    const auto r = build_roadmap(s, params(12, 3));
    const auto q1 = insert_query(s, r, config({0.2, 0.2}), config({0.8, 0.8}), 3, 10, 0.95, 9);
    const auto q2 = insert_query(s, q1.roadmap, config({0.3, 0.7}), config({0.7, 0.3}), 3, 10, 0.95, 9);
    const auto fresh = insert_query(s, r, config({0.3, 0.7}), config({0.7, 0.3}), 3, 10, 0.95, 9);
    CHECK(io::to_json(q2.roadmap).dump() == io::to_json(fresh.roadmap).dump());
}
