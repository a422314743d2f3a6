#include "rlc/pathing.hpp"

#include "rlc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <utility>

namespace rlc {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t execution_stream_tag = 0x657865637574650aULL;

void check_graph(const PlanningGraph& g, int start, int goal) {
    require(g.node_count > 0, "planning graph is empty");
    require(start >= 0 && start < g.node_count, "start id out of range");
    require(goal >= 0 && goal < g.node_count, "goal id out of range");
    for (const auto& e : g.edges) {
        require(e.from >= 0 && e.from < g.node_count && e.to >= 0 && e.to < g.node_count,
                "edge references an unknown node");
        require(e.p > 0.0 && e.p <= 1.0, "edge probability must lie in (0, 1]");
        require(e.c >= 0.0 && std::isfinite(e.c), "edge cost must be finite and >= 0");
    }
}

/// Edge indices grouped by source (or target) node, each list sorted by the
/// opposite endpoint so that scanning order realizes lower-index tie-breaking.
std::vector<std::vector<int>> adjacency(const PlanningGraph& g, bool incoming) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.node_count));
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& edge = g.edges[e];
        adj[static_cast<std::size_t>(incoming ? edge.to : edge.from)].push_back(static_cast<int>(e));
    }
    for (auto& list : adj) {
        std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
            const auto& ea = g.edges[static_cast<std::size_t>(a)];
            const auto& eb = g.edges[static_cast<std::size_t>(b)];
            return incoming ? ea.from < eb.from : ea.to < eb.to;
        });
    }
    return adj;
}

PlannedPath path_from_edges(const PlanningGraph& g, int start, const std::vector<int>& edge_chain) {
    PlannedPath path;
    path.node_ids.push_back(start);
    double cost = 0.0;
    double prob = 1.0;
    for (int e : edge_chain) {
        const auto& edge = g.edges[static_cast<std::size_t>(e)];
        path.node_ids.push_back(edge.to);
        cost += edge.c;
        prob *= edge.p;
    }
    path.total_cost = cost;
    path.success_lower_bound = prob;
    return path;
}

using Label = std::pair<double, int>;
using MinQueue = std::priority_queue<Label, std::vector<Label>, std::greater<>>;

} // namespace

PlanningGraph planning_graph(const Roadmap& roadmap, EdgeWeighting weighting) {
    PlanningGraph g;
    g.node_count = roadmap.node_count();
    g.edges.reserve(roadmap.edges().size());
    for (const auto& e : roadmap.edges()) {
        const double p = weighting == EdgeWeighting::lower_bound ? e.stats.p_lower : e.stats.p_hat;
        if (p <= 0.0 || !e.stats.c_hat) continue;
        g.edges.push_back({e.from, e.to, p, *e.stats.c_hat});
    }
    return g;
}

PlannedPath max_prob_path(const PlanningGraph& g, int start, int goal) {
    check_graph(g, start, goal);
    const auto out = adjacency(g, false);
    std::vector<double> dist(static_cast<std::size_t>(g.node_count), inf);
    std::vector<int> pred(static_cast<std::size_t>(g.node_count), -1);
    std::vector<char> done(static_cast<std::size_t>(g.node_count), 0);
    MinQueue queue;
    dist[static_cast<std::size_t>(start)] = 0.0;
    queue.emplace(0.0, start);
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (done[static_cast<std::size_t>(u)]) continue;
        done[static_cast<std::size_t>(u)] = 1;
        if (u == goal) break;
        for (int e : out[static_cast<std::size_t>(u)]) {
            const auto& edge = g.edges[static_cast<std::size_t>(e)];
            const double nd = d - std::log(edge.p);
            if (nd < dist[static_cast<std::size_t>(edge.to)]) {
                dist[static_cast<std::size_t>(edge.to)] = nd;
                pred[static_cast<std::size_t>(edge.to)] = e;
                queue.emplace(nd, edge.to);
            }
        }
    }
    if (dist[static_cast<std::size_t>(goal)] == inf)
        fail(ErrorKind::unreachable, "goal " + std::to_string(goal) + " is unreachable from start " +
                                         std::to_string(start));
    std::vector<int> chain;
    for (int v = goal; v != start;) {
        const int e = pred[static_cast<std::size_t>(v)];
        chain.push_back(e);
        v = g.edges[static_cast<std::size_t>(e)].from;
    }
    std::reverse(chain.begin(), chain.end());
    return path_from_edges(g, start, chain);
}

ValueTable::ValueTable(int levels, int nodes, double p_min)
    : levels_(levels), nodes_(nodes), p_min_(p_min),
      values_(static_cast<std::size_t>(levels + 1) * static_cast<std::size_t>(nodes), inf),
      back_(values_.size()) {}

bool ValueTable::reachable(int s, int j) const { return std::isfinite(value(s, j)); }

ValueTable constrained_value_table(const PlanningGraph& g, int start, double p_min, int levels) {
    check_graph(g, start, start);
    require(p_min > 0.0 && p_min < 1.0, "p_min must lie in (0, 1)");
    require(levels >= 1, "level count S must be >= 1");

    const auto in = adjacency(g, true);
    const auto out = adjacency(g, false);
    const double log_p_min = std::log(p_min);
    std::vector<double> level_cost(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e)
        level_cost[e] = g.edges[e].p < 1.0 ? levels * std::log(g.edges[e].p) / log_p_min : 0.0;

    ValueTable table(levels, g.node_count, p_min);

    // relax probability-one edges within level s, cheapest label first
    auto close_level = [&](int s) {
        MinQueue queue;
        for (int j = 0; j < g.node_count; ++j)
            if (table.reachable(s, j)) queue.emplace(table.value(s, j), j);
        std::vector<char> settled(static_cast<std::size_t>(g.node_count), 0);
        while (!queue.empty()) {
            const auto [v, u] = queue.top();
            queue.pop();
            if (settled[static_cast<std::size_t>(u)] || v > table.value(s, u)) continue;
            settled[static_cast<std::size_t>(u)] = 1;
            for (int e : out[static_cast<std::size_t>(u)]) {
                const auto& edge = g.edges[static_cast<std::size_t>(e)];
                if (edge.p < 1.0 || edge.to == start) continue;
                const double cand = v + edge.c;
                if (cand < table.value(s, edge.to)) {
                    table.value_ref(s, edge.to) = cand;
                    table.backpointer_ref(s, edge.to) = {s, e};
                    queue.emplace(cand, edge.to);
                }
            }
        }
    };

    for (int s = 0; s <= levels; ++s) {
        table.value_ref(s, start) = 0.0;
        table.backpointer_ref(s, start) = {-1, -1};
        if (s > 0) {
            for (int j = 0; j < g.node_count; ++j) {
                if (j == start) continue;
                double best = table.value(s - 1, j);
                ValueTable::Backpointer bp{s - 1, -1};
                for (int e : in[static_cast<std::size_t>(j)]) {
                    const auto& edge = g.edges[static_cast<std::size_t>(e)];
                    if (edge.p >= 1.0) continue;
                    const double from_level = std::floor(s - level_cost[static_cast<std::size_t>(e)]);
                    if (from_level < 0) continue;
                    const int lvl = static_cast<int>(from_level);
                    const double cand = table.value(lvl, edge.from) + edge.c;
                    if (cand < best) {
                        best = cand;
                        bp = {lvl, e};
                    }
                }
                table.value_ref(s, j) = best;
                table.backpointer_ref(s, j) = bp;
            }
        }
        close_level(s);
    }
    return table;
}

PlannedPath constrained_shortest_path(const PlanningGraph& g, int start, int goal, double p_min, int levels) {
    check_graph(g, start, goal);
    const ValueTable table = constrained_value_table(g, start, p_min, levels);
    if (!table.reachable(levels, goal)) {
        double best = 0.0;
        try {
            best = max_prob_path(g, start, goal).success_lower_bound;
        } catch (const Error&) {
        }
        throw InfeasibleError("no path reaches the goal with success probability >= " + std::to_string(p_min) +
                                  " (best achievable " + std::to_string(best) + ")",
                              best);
    }
    std::vector<int> chain;
    int s = levels;
    int j = goal;
    while (!(j == start && table.backpointer(s, j).level < 0)) {
        const auto bp = table.backpointer(s, j);
        if (bp.edge >= 0) {
            chain.push_back(bp.edge);
            j = g.edges[static_cast<std::size_t>(bp.edge)].from;
        }
        s = bp.level;
    }
    std::reverse(chain.begin(), chain.end());
    PlannedPath path = path_from_edges(g, start, chain);
    path.total_cost = table.value(levels, goal);
    return path;
}

double path_probability(const PlanningGraph& g, const std::vector<int>& nodes) {
    double prob = 1.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        auto it = std::find_if(g.edges.begin(), g.edges.end(),
                               [&](const PlanEdge& e) { return e.from == nodes[i] && e.to == nodes[i + 1]; });
        require(it != g.edges.end(), "path hop is not an edge of the graph");
        prob *= it->p;
    }
    return prob;
}

ExecutionStats execute_policy(const Scenario& scn, const ControllerSpec& controller, const Roadmap& roadmap,
                              const PlannedPath& path, int runs, std::uint64_t seed) {
    require(runs >= 1, "run count must be >= 1");
    require(!path.node_ids.empty(), "path is empty");
    const auto& ms = roadmap.milestones();
    for (int id : path.node_ids)
        require(id >= 0 && id < roadmap.node_count() && ms[static_cast<std::size_t>(id)].size() == scn.dof(),
                "path visits a node without a configuration");

    ExecutionStats st;
    st.runs = runs;
    double cost_sum = 0.0;
    for (int r = 0; r < runs; ++r) {
        bool ok = true;
        double cost = 0.0;
        for (std::size_t leg = 0; ok && leg + 1 < path.node_ids.size(); ++leg) {
            StreamRng rng = StreamRng::derive(
                {seed, execution_stream_tag, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(leg)});
            const auto outcome = simulate_transition(scn, controller, ms[static_cast<std::size_t>(path.node_ids[leg])],
                                                     ms[static_cast<std::size_t>(path.node_ids[leg + 1])], rng);
            ok = outcome.success;
            cost += outcome.cost;
        }
        if (ok) {
            ++st.successes;
            cost_sum += cost;
        }
    }
    st.success_rate = static_cast<double>(st.successes) / runs;
    if (st.successes > 0) st.mean_cost = cost_sum / st.successes;
    return st;
}

std::uint64_t milestone_bound(double epsilon, double alpha, double beta, double gamma) {
    for (double v : {epsilon, alpha, beta, gamma})
        require(v > 0.0 && v <= 1.0 && std::isfinite(v), "expansiveness constants must lie in (0, 1]");
    const double ea = epsilon * alpha;
    const double inner = 8.0 * std::log(8.0 / (ea * gamma)) / ea + 3.0 / beta;
    return 2 * static_cast<std::uint64_t>(std::ceil(inner)) + 2;
}

} // namespace rlc
