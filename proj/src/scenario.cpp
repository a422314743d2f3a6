#include "rlc/scenario.hpp"

#include "rlc/error.hpp"
#include "rlc/geometry.hpp"

#include <cmath>
#include <string>

namespace rlc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using geometry::Point2;

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

bool disc_hits_obstacle(const Eigen::Vector2d& center, double radius, const Obstacle& obstacle,
                        const Eigen::Vector2d& position) {
    return std::visit(overloaded{
                          [&](const Disc& d) { return (center - position).norm() < radius + d.radius; },
                          [&](const Rect& r) {
                              const Eigen::Vector2d half(r.width / 2, r.height / 2);
                              return geometry::point_rect_distance<double>(center, position, half) < radius;
                          },
                      },
                      obstacle.shape);
}

bool segment_hits_obstacle(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Obstacle& obstacle,
                           const Eigen::Vector2d& position) {
    return std::visit(overloaded{
                          [&](const Disc& d) {
                              return geometry::point_segment_distance<double>(position, a, b) < d.radius;
                          },
                          [&](const Rect& r) {
                              const Eigen::Vector2d half(r.width / 2, r.height / 2);
                              return geometry::segment_intersects_rect<double>(a, b, position, half);
                          },
                      },
                      obstacle.shape);
}

bool inside_workspace(const Box& ws, const Eigen::Vector2d& p, double margin) {
    return p.x() - margin >= ws.lo[0] && p.x() + margin <= ws.hi[0] && p.y() - margin >= ws.lo[1] &&
           p.y() + margin <= ws.hi[1];
}

bool disc_set_collides(const Scenario& scn, const DiscSet& robot, const Configuration& q, const WorldSample& world) {
    const auto m = robot.radii.size();
    for (std::size_t d = 0; d < m; ++d) {
        const Eigen::Vector2d c(q[2 * d], q[2 * d + 1]);
        const double r = robot.radii[d];
        if (!inside_workspace(scn.workspace, c, r)) return true;
        for (std::size_t o = 0; o < scn.obstacles.size(); ++o)
            if (disc_hits_obstacle(c, r, scn.obstacles[o], world.obstacle_positions[o])) return true;
        for (std::size_t e = d + 1; e < m; ++e) {
            const Eigen::Vector2d c2(q[2 * e], q[2 * e + 1]);
            if ((c - c2).norm() < r + robot.radii[e]) return true;
        }
    }
    return false;
}

bool arm_collides(const Scenario& scn, const PlanarArm& arm, const Configuration& q, const WorldSample& world) {
    const auto joints = arm_joints(arm, q);
    for (const auto& p : joints)
        if (!inside_workspace(scn.workspace, p, 0.0)) return true;
    const auto links = arm.link_lengths.size();
    for (std::size_t l = 0; l < links; ++l)
        for (std::size_t o = 0; o < scn.obstacles.size(); ++o)
            if (segment_hits_obstacle(joints[l], joints[l + 1], scn.obstacles[o], world.obstacle_positions[o]))
                return true;
    for (std::size_t l = 0; l < links; ++l)
        for (std::size_t m = l + 2; m < links; ++m)
            if (geometry::segments_intersect<double>(joints[l], joints[l + 1], joints[m], joints[m + 1])) return true;
    return false;
}

} // namespace

double Obstacle::feature_size() const {
    return std::visit(overloaded{
                          [](const Disc& d) { return d.radius; },
                          [](const Rect& r) { return std::min(r.width, r.height) / 2; },
                      },
                      shape);
}

int degrees_of_freedom(const RobotModel& robot) {
    return std::visit(overloaded{
                          [](const DiscSet& d) { return static_cast<int>(2 * d.radii.size()); },
                          [](const PlanarArm& a) { return static_cast<int>(a.link_lengths.size()); },
                      },
                      robot);
}

bool Box::contains(const Eigen::VectorXd& x) const {
    if (x.size() != lo.size()) return false;
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

void validate(const Scenario& scn) {
    const int dof = scn.dof();
    require(dof > 0, "robot has no degrees of freedom");
    std::visit(overloaded{
                   [](const DiscSet& d) {
                       for (double r : d.radii) require(r > 0 && std::isfinite(r), "robot disc radius must be > 0");
                   },
                   [](const PlanarArm& a) {
                       require(a.base.allFinite(), "arm base must be finite");
                       for (double l : a.link_lengths)
                           require(l > 0 && std::isfinite(l), "arm link length must be > 0");
                   },
               },
               scn.robot);
    require(scn.cspace.lo.size() == dof && scn.cspace.hi.size() == dof,
            "configuration bounds must have " + std::to_string(dof) + " coordinates");
    require(all_finite(scn.cspace.lo) && all_finite(scn.cspace.hi), "configuration bounds must be finite");
    require((scn.cspace.lo.array() < scn.cspace.hi.array()).all(), "configuration bounds must satisfy lo < hi");
    require(scn.workspace.lo.size() == 2 && scn.workspace.hi.size() == 2, "workspace box must be 2-D");
    require(all_finite(scn.workspace.lo) && all_finite(scn.workspace.hi), "workspace box must be finite");
    require((scn.workspace.lo.array() < scn.workspace.hi.array()).all(), "workspace box must satisfy lo < hi");
    for (const auto& o : scn.obstacles) {
        const bool ok_shape = std::visit(overloaded{
                                             [](const Disc& d) { return d.radius > 0; },
                                             [](const Rect& r) { return r.width > 0 && r.height > 0; },
                                         },
                                         o.shape);
        require(ok_shape, "obstacle dimensions must be > 0");
        require(o.nominal_position.allFinite(), "obstacle position must be finite");
        require(o.position_std.allFinite() && (o.position_std.array() >= 0).all(),
                "obstacle position std must be >= 0");
    }
    require(scn.start.size() == dof && scn.goal.size() == dof, "start/goal must have dof coordinates");
    require(all_finite(scn.start) && all_finite(scn.goal), "start/goal must be finite");
    require(scn.cspace.contains(scn.start), "start lies outside the configuration bounds");
    require(scn.cspace.contains(scn.goal), "goal lies outside the configuration bounds");
    require(scn.endgame_radius > 0 && std::isfinite(scn.endgame_radius), "endgame_radius must be > 0");
    require(scn.step_size > 0 && std::isfinite(scn.step_size), "step_size must be > 0");
    require(scn.max_steps >= 1, "max_steps must be >= 1");
}

WorldSample nominal_world(const Scenario& scn) {
    WorldSample w;
    w.obstacle_positions.reserve(scn.obstacles.size());
    for (const auto& o : scn.obstacles) w.obstacle_positions.push_back(o.nominal_position);
    return w;
}

WorldSample sample_world(const Scenario& scn, StreamRng& rng) {
    WorldSample w;
    w.obstacle_positions.reserve(scn.obstacles.size());
    for (const auto& o : scn.obstacles) {
        Eigen::Vector2d p = o.nominal_position;
        // draws are consumed for every axis so the stream layout does not depend on which stds are zero
        for (int axis = 0; axis < 2; ++axis) p[axis] += o.position_std[axis] * standard_normal(rng);
        w.obstacle_positions.push_back(p);
    }
    return w;
}

std::vector<Eigen::Vector2d> arm_joints(const PlanarArm& arm, const Configuration& angles) {
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(arm.link_lengths.size() + 1);
    pts.push_back(arm.base);
    double heading = 0.0;
    for (std::size_t l = 0; l < arm.link_lengths.size(); ++l) {
        heading += angles[static_cast<Eigen::Index>(l)];
        pts.push_back(pts.back() + arm.link_lengths[l] * Eigen::Vector2d(std::cos(heading), std::sin(heading)));
    }
    return pts;
}

bool collides(const Scenario& scn, const Configuration& config, const WorldSample& world) {
    require(config.size() == scn.dof(), "configuration has " + std::to_string(config.size()) +
                                            " coordinates, robot has " + std::to_string(scn.dof()));
    require(world.obstacle_positions.size() == scn.obstacles.size(), "world sample does not match obstacle list");
    return std::visit(overloaded{
                          [&](const DiscSet& d) { return disc_set_collides(scn, d, config, world); },
                          [&](const PlanarArm& a) { return arm_collides(scn, a, config, world); },
                      },
                      scn.robot);
}

Configuration sample_free_config(const Scenario& scn, StreamRng& rng, int max_attempts, int* attempts_used) {
    const WorldSample nominal = nominal_world(scn);
    const Eigen::Index dof = scn.dof();
    Configuration q(dof);
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        for (Eigen::Index i = 0; i < dof; ++i)
            q[i] = scn.cspace.lo[i] + (scn.cspace.hi[i] - scn.cspace.lo[i]) * rng.uniform();
        if (!collides(scn, q, nominal)) {
            if (attempts_used) *attempts_used = attempt;
            return q;
        }
    }
    if (attempts_used) *attempts_used = max_attempts;
    fail(ErrorKind::sampling_budget,
         "no collision-free configuration found in " + std::to_string(max_attempts) + " uniform draws");
}

} // namespace rlc
