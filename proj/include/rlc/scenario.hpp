#pragma once

#include "rlc/random.hpp"

#include <Eigen/Core>

#include <variant>
#include <vector>

namespace rlc {

/// A point in configuration space. Disc robots: concatenated (x, y) centers.
/// Planar arms: relative joint angles in radians.
using Configuration = Eigen::VectorXd;

struct Disc {
    double radius = 0.0;
};

/// Axis-aligned rectangle, centered on the obstacle position.
struct Rect {
    double width = 0.0;
    double height = 0.0;
};

struct Obstacle {
    std::variant<Disc, Rect> shape;
    Eigen::Vector2d nominal_position = Eigen::Vector2d::Zero();
    /// Per-axis standard deviation of the Gaussian position noise.
    Eigen::Vector2d position_std = Eigen::Vector2d::Zero();

    /// Smallest length scale of the shape (radius, or half of the shorter side).
    double feature_size() const;
};

struct DiscSet {
    std::vector<double> radii;
};

/// Serial chain of segment links anchored at `base`; joint angles are relative
/// to the previous link.
struct PlanarArm {
    Eigen::Vector2d base = Eigen::Vector2d::Zero();
    std::vector<double> link_lengths;
};

using RobotModel = std::variant<DiscSet, PlanarArm>;

int degrees_of_freedom(const RobotModel& robot);

struct Box {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    bool contains(const Eigen::VectorXd& x) const;
    int dimension() const { return static_cast<int>(lo.size()); }
};

struct Scenario {
    /// Bounds of configuration coordinates.
    Box cspace;
    /// 2-D box the robot body must stay inside.
    Box workspace;
    RobotModel robot;
    std::vector<Obstacle> obstacles;
    Configuration start;
    Configuration goal;
    double endgame_radius = 0.0;
    double step_size = 0.0;
    int max_steps = 1;

    int dof() const { return degrees_of_freedom(robot); }
};

/// Throws Error(validation) describing the first violated invariant.
void validate(const Scenario& scenario);

/// One realization of all obstacle positions.
struct WorldSample {
    std::vector<Eigen::Vector2d> obstacle_positions;
};

WorldSample nominal_world(const Scenario& scenario);

WorldSample sample_world(const Scenario& scenario, StreamRng& rng);

/// True iff the robot body overlaps an obstacle at its sampled position,
/// two robot discs overlap, nonadjacent arm links cross, or any body element
/// leaves the workspace box.
bool collides(const Scenario& scenario, const Configuration& config, const WorldSample& world);

/// Body points of a planar arm: base followed by every joint and the tip.
std::vector<Eigen::Vector2d> arm_joints(const PlanarArm& arm, const Configuration& angles);

/// Uniform draw over the configuration box, rejecting draws that collide in the
/// nominal (noise-free) world. Throws Error(sampling_budget) after
/// `max_attempts` rejections. `attempts_used`, when given, receives the number
/// of draws consumed.
Configuration sample_free_config(const Scenario& scenario, StreamRng& rng, int max_attempts = 100000,
                                 int* attempts_used = nullptr);

/// Euclidean distance on raw configuration coordinates (angles are not wrapped).
inline double config_distance(const Configuration& a, const Configuration& b) { return (a - b).norm(); }

} // namespace rlc
