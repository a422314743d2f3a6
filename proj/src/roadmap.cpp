#include "rlc/roadmap.hpp"

#include "rlc/error.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace rlc {

namespace {

constexpr std::uint64_t milestone_stream_tag = 0x6d696c6573746f6eULL;

std::vector<RoadmapEdge> connect(const Scenario& scn, const BuildParams& params,
                                 const std::vector<Configuration>& milestones,
                                 const std::set<std::pair<int, int>>& pairs) {
    std::vector<RoadmapEdge> edges;
    for (const auto& [from, to] : pairs) {
        const auto outcomes = run_trials(scn, params.controller, milestones[static_cast<std::size_t>(from)],
                                         milestones[static_cast<std::size_t>(to)], params.trials,
                                         EdgeKey{params.seed, static_cast<std::uint64_t>(from),
                                                 static_cast<std::uint64_t>(to)});
        EdgeStats st = edge_stats(outcomes, params.gamma, params.mode);
        if (st.p_lower > 0.0 && st.c_hat) edges.push_back({from, to, st});
    }
    return edges;
}

} // namespace

Roadmap::Roadmap(BuildParams params, std::vector<Configuration> milestones, std::vector<RoadmapEdge> edges)
    : params_(std::move(params)), milestones_(std::move(milestones)), edges_(std::move(edges)) {
    require(static_cast<int>(milestones_.size()) == params_.n + 1, "roadmap needs n + 1 milestone slots");
    has_query_ = milestones_.front().size() > 0 && milestones_.back().size() > 0;
    index_edges();
}

void Roadmap::index_edges() {
    std::sort(edges_.begin(), edges_.end(),
              [](const RoadmapEdge& a, const RoadmapEdge& b) { return std::pair(a.from, a.to) < std::pair(b.from, b.to); });
    out_.assign(milestones_.size(), {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& edge = edges_[e];
        require(edge.from >= 0 && edge.from < node_count() && edge.to >= 0 && edge.to < node_count(),
                "roadmap edge references an unknown node");
        out_[static_cast<std::size_t>(edge.from)].push_back(static_cast<int>(e));
    }
}

Roadmap Roadmap::with_query(const Configuration& start, const Configuration& goal,
                            std::vector<RoadmapEdge> query_edges) const {
    Roadmap r = *this;
    r.milestones_.front() = start;
    r.milestones_.back() = goal;
    r.has_query_ = true;
    // a previous query's edges are replaced
    std::erase_if(r.edges_, [&](const RoadmapEdge& e) {
        return !is_sampled(e.from) || !is_sampled(e.to);
    });
    r.edges_.insert(r.edges_.end(), query_edges.begin(), query_edges.end());
    r.index_edges();
    return r;
}

std::vector<int> nearest_neighbors(const Roadmap& roadmap, const Configuration& config, int k, int exclude) {
    require(k >= 1, "neighbor count k must be >= 1");
    std::vector<std::pair<double, int>> candidates;
    const auto& ms = roadmap.milestones();
    for (int id = 1; id < roadmap.params().n; ++id) {
        if (id == exclude) continue;
        candidates.emplace_back(config_distance(ms[static_cast<std::size_t>(id)], config), id);
    }
    const auto keep = std::min<std::size_t>(static_cast<std::size_t>(k), candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end());
    std::vector<int> ids;
    ids.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) ids.push_back(candidates[i].second);
    return ids;
}

Roadmap build_roadmap(const Scenario& scn, const BuildParams& params) {
    require(params.n >= 2, "milestone count n must be >= 2");
    require(params.k >= 1, "neighbor count k must be >= 1");
    require(params.trials >= 1, "trials per edge must be >= 1");
    require(params.gamma > 0.0 && params.gamma < 1.0, "gamma must lie in (0, 1)");
    validate(scn);

    std::vector<Configuration> milestones(static_cast<std::size_t>(params.n) + 1);
    for (int id = 1; id < params.n; ++id) {
        StreamRng rng = StreamRng::derive({params.seed, milestone_stream_tag, static_cast<std::uint64_t>(id)});
        milestones[static_cast<std::size_t>(id)] = sample_free_config(scn, rng);
    }
    Roadmap skeleton(params, milestones, {});

    std::set<std::pair<int, int>> pairs;
    for (int id = 1; id < params.n; ++id) {
        for (int nb : nearest_neighbors(skeleton, milestones[static_cast<std::size_t>(id)], params.k, id)) {
            pairs.emplace(id, nb);
            pairs.emplace(nb, id);
        }
    }
    return Roadmap(params, std::move(milestones), connect(scn, params, skeleton.milestones(), pairs));
}

QueryResult insert_query(const Scenario& scn, const Roadmap& roadmap, const Configuration& start,
                         const Configuration& goal, int k, int trials, double gamma, std::uint64_t seed) {
    require(k >= 1, "neighbor count k must be >= 1");
    require(trials >= 1, "trials per edge must be >= 1");
    require(start.size() == scn.dof() && goal.size() == scn.dof(), "query endpoints have wrong dimension");
    const WorldSample nominal = nominal_world(scn);
    require(!collides(scn, start, nominal), "query start collides with the nominal obstacles");
    require(!collides(scn, goal, nominal), "query goal collides with the nominal obstacles");

    const int s = roadmap.start_id();
    const int g = roadmap.goal_id();
    std::vector<Configuration> ms = roadmap.milestones();
    ms.front() = start;
    ms.back() = goal;

    BuildParams params = roadmap.params();
    params.trials = trials;
    params.gamma = gamma;
    params.seed = seed;

    std::set<std::pair<int, int>> start_pairs, goal_pairs;
    for (int nb : nearest_neighbors(roadmap, start, k)) start_pairs.emplace(s, nb);
    for (int nb : nearest_neighbors(roadmap, goal, k)) goal_pairs.emplace(nb, g);

    auto start_edges = connect(scn, params, ms, start_pairs);
    auto goal_edges = connect(scn, params, ms, goal_pairs);
    if (start_edges.empty()) fail(ErrorKind::unreachable, "disconnected query: no successful connection from start");
    if (goal_edges.empty()) fail(ErrorKind::unreachable, "disconnected query: no successful connection into goal");

    start_edges.insert(start_edges.end(), goal_edges.begin(), goal_edges.end());
    return {s, g, roadmap.with_query(start, goal, std::move(start_edges))};
}

QueryResult insert_query(const Scenario& scn, const Roadmap& roadmap, const Configuration& start,
                         const Configuration& goal) {
    const auto& p = roadmap.params();
    return insert_query(scn, roadmap, start, goal, p.k, p.trials, p.gamma, p.seed);
}

} // namespace rlc
