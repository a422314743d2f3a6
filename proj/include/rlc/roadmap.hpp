#pragma once

#include "rlc/estimation.hpp"

#include <cstdint>
#include <vector>

namespace rlc {

struct RoadmapEdge {
    int from = 0;
    int to = 0;
    EdgeStats stats;
};

struct BuildParams {
    int n = 0;
    int k = 0;
    int trials = 0;
    double gamma = 0.95;
    BoundMode mode = BoundMode::verbatim;
    std::uint64_t seed = 0;
    ControllerSpec controller;
};

/// Directed milestone graph.
///
/// Node ids follow the query convention: sampled milestones occupy 1..n-1,
/// id 0 is reserved for a query start and id n for a query goal. The reserved
/// slots hold empty configurations until insert_query fills them.
class Roadmap {
public:
    Roadmap() = default;
    Roadmap(BuildParams params, std::vector<Configuration> milestones, std::vector<RoadmapEdge> edges);

    const BuildParams& params() const { return params_; }
    /// n + 1 slots, see class comment.
    const std::vector<Configuration>& milestones() const { return milestones_; }
    const std::vector<RoadmapEdge>& edges() const { return edges_; }
    /// Indices into edges(), grouped by source node.
    const std::vector<int>& out_edges(int node) const { return out_[static_cast<std::size_t>(node)]; }

    int node_count() const { return static_cast<int>(milestones_.size()); }
    int start_id() const { return 0; }
    int goal_id() const { return params_.n; }
    bool has_query() const { return has_query_; }
    bool is_sampled(int id) const { return id >= 1 && id < params_.n; }

    /// Adds a query start/goal pair and its edges; used by insert_query.
    Roadmap with_query(const Configuration& start, const Configuration& goal,
                       std::vector<RoadmapEdge> query_edges) const;

private:
    void index_edges();

    BuildParams params_;
    std::vector<Configuration> milestones_;
    std::vector<RoadmapEdge> edges_;
    std::vector<std::vector<int>> out_;
    bool has_query_ = false;
};

/// Sampled milestone ids sorted by (Euclidean distance to config, id); at most k.
/// `exclude` (if >= 0) is skipped.
std::vector<int> nearest_neighbors(const Roadmap& roadmap, const Configuration& config, int k, int exclude = -1);

/// Samples n - 1 free milestones and connects each one to its k nearest
/// neighbors with T controller trials in each direction. A pair that appears in
/// both neighbor lists is simulated once per direction. Edges whose lower
/// bound is zero are dropped.
Roadmap build_roadmap(const Scenario& scenario, const BuildParams& params);

struct QueryResult {
    int start_id = 0;
    int goal_id = 0;
    Roadmap roadmap;
};

/// Connects `start` to its k nearest milestones (outgoing trials) and `goal`
/// from its k nearest milestones (incoming trials). Throws Error(validation)
/// when an endpoint collides in the nominal world and Error(unreachable) when
/// no start edge or no goal edge survives.
QueryResult insert_query(const Scenario& scenario, const Roadmap& roadmap, const Configuration& start,
                         const Configuration& goal, int k, int trials, double gamma, std::uint64_t seed);

/// Convenience overload reusing the roadmap's build parameters.
QueryResult insert_query(const Scenario& scenario, const Roadmap& roadmap, const Configuration& start,
                         const Configuration& goal);

} // namespace rlc
