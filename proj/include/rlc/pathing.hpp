#pragma once

#include "rlc/roadmap.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rlc {

struct PlanEdge {
    int from = 0;
    int to = 0;
    /// Success probability in (0, 1].
    double p = 1.0;
    /// Nonnegative traversal cost.
    double c = 0.0;
};

/// Plain weighted digraph consumed by the planners.
struct PlanningGraph {
    int node_count = 0;
    std::vector<PlanEdge> edges;
};

/// Which edge probability the planners see.
enum class EdgeWeighting {
    lower_bound,
    empirical,
};

PlanningGraph planning_graph(const Roadmap& roadmap, EdgeWeighting weighting = EdgeWeighting::lower_bound);

struct PlannedPath {
    std::vector<int> node_ids;
    std::optional<double> total_cost;
    double success_lower_bound = 1.0;
};

/// Dijkstra on -log p. Throws Error(unreachable) when goal cannot be reached.
PlannedPath max_prob_path(const PlanningGraph& graph, int start, int goal);

/// Dynamic-programming table of the constrained planner.
///
/// `value(s, j)` is the least cost of reaching j from the start with success
/// probability at least p_min^(s/S); infinity marks "unreachable at that level".
class ValueTable {
public:
    /// Where V(s, j) came from: edge `edge` out of (level, edge.from), or a
    /// copy of (level, j) when `edge` is -1. level -1 marks the start state.
    struct Backpointer {
        int level = -1;
        int edge = -1;
    };

    ValueTable(int levels, int nodes, double p_min);

    int levels() const { return levels_; }
    int nodes() const { return nodes_; }
    double p_min() const { return p_min_; }

    double value(int s, int j) const { return values_[index(s, j)]; }
    bool reachable(int s, int j) const;
    const Backpointer& backpointer(int s, int j) const { return back_[index(s, j)]; }

    double& value_ref(int s, int j) { return values_[index(s, j)]; }
    Backpointer& backpointer_ref(int s, int j) { return back_[index(s, j)]; }

private:
    std::size_t index(int s, int j) const {
        return static_cast<std::size_t>(s) * static_cast<std::size_t>(nodes_) + static_cast<std::size_t>(j);
    }

    int levels_;
    int nodes_;
    double p_min_;
    std::vector<double> values_;
    std::vector<Backpointer> back_;
};

/// Fills the table for levels s = 0..S. Edges with p < 1 follow the recursion
///   V(s, j) = min{ V(s-1, j), min_k V(floor(s - s_kj), k) + c_kj },
///   s_kj = S log p_kj / log p_min,
/// and edges with p = 1 are relaxed inside each level by a cost-ordered
/// label-setting pass until no label changes.
ValueTable constrained_value_table(const PlanningGraph& graph, int start, double p_min, int levels);

/// Least-cost path with success product >= p_min (up to the level
/// discretization). Throws InfeasibleError carrying the max-probability bound
/// when V(S, goal) is infinite.
PlannedPath constrained_shortest_path(const PlanningGraph& graph, int start, int goal, double p_min, int levels);

struct ExecutionStats {
    int runs = 0;
    int successes = 0;
    double success_rate = 0.0;
    std::optional<double> mean_cost;
};

/// Replays the path with the local controller `runs` times, fresh noise per run.
ExecutionStats execute_policy(const Scenario& scenario, const ControllerSpec& controller, const Roadmap& roadmap,
                              const PlannedPath& path, int runs, std::uint64_t seed);

/// Milestone count 2 * ceil(8 ln(8 / (eps alpha gamma)) / (eps alpha) + 3 / beta) + 2
/// that makes a roadmap connect any two milestones of a component, through a
/// path of success probability at least p^(3/beta + 1), with probability 1 - gamma.
std::uint64_t milestone_bound(double epsilon, double alpha, double beta, double gamma);

/// Product of edge probabilities along `nodes`; throws if a hop is not an edge.
double path_probability(const PlanningGraph& graph, const std::vector<int>& nodes);

} // namespace rlc
