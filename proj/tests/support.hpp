#pragma once

// Test-side oracles. Nothing here calls the planners or solvers under test.

#include "rlc/mdp.hpp"
#include "rlc/pathing.hpp"
#include "rlc/scenario.hpp"

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace rlc::test {

inline Scenario open_square(std::vector<double> radii = {0.01}, double step = 0.01) {
    Scenario s;
    s.workspace = {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)};
    const auto dof = static_cast<Eigen::Index>(2 * radii.size());
    s.cspace = {Eigen::VectorXd::Zero(dof), Eigen::VectorXd::Ones(dof)};
    s.robot = DiscSet{std::move(radii)};
    s.start = Eigen::VectorXd::Constant(dof, 0.2);
    s.goal = Eigen::VectorXd::Constant(dof, 0.8);
    s.endgame_radius = 0.01;
    s.step_size = step;
    s.max_steps = 2000;
    return s;
}

inline Obstacle disc_obstacle(double r, double x, double y, double sx = 0, double sy = 0) {
    Obstacle o;
    o.shape = Disc{r};
    o.nominal_position = {x, y};
    o.position_std = {sx, sy};
    return o;
}

inline Obstacle rect_obstacle(double w, double h, double x, double y, double sx = 0, double sy = 0) {
    Obstacle o;
    o.shape = Rect{w, h};
    o.nominal_position = {x, y};
    o.position_std = {sx, sy};
    return o;
}

inline Configuration config(std::initializer_list<double> xs) {
    Configuration q(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) q[i++] = x;
    return q;
}

/// Standard normal cdf through erfc, independent of the library's quantile code.
inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Composite Simpson integral of the normal density over [0, x].
inline double simpson_normal_mass(double x, int panels = 20000) {
    const double h = x / panels;
    auto f = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
    double s = f(0) + f(x);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return s * h / 3.0;
}

/// Quantile by bisection on the Simpson integral (gamma > 1/2).
inline double simpson_quantile(double gamma) {
    double lo = 0.0, hi = 10.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (0.5 + simpson_normal_mass(mid) < gamma ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Random digraph on `nodes` vertices with p in [0.5, 1] (some exactly 1) and c in [0, 10].
inline PlanningGraph random_graph(std::mt19937_64& gen, int nodes, double density = 0.4) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PlanningGraph g;
    g.node_count = nodes;
    for (int a = 0; a < nodes; ++a)
        for (int b = 0; b < nodes; ++b) {
            if (a == b || u(gen) > density) continue;
            const double p = u(gen) < 0.15 ? 1.0 : 0.5 + 0.5 * u(gen);
            g.edges.push_back({a, b, p, 10.0 * u(gen)});
        }
    return g;
}

/// Calls `visit(prob, cost, nodes)` for every simple path from s to t. Parallel
/// edges are each enumerated.
inline void for_each_simple_path(const PlanningGraph& g, int s, int t,
                                 const std::function<void(double, double, const std::vector<int>&)>& visit) {
    std::vector<char> on(static_cast<std::size_t>(g.node_count), 0);
    std::vector<int> nodes{s};
    on[static_cast<std::size_t>(s)] = 1;
    std::function<void(int, double, double)> rec = [&](int u, double p, double c) {
        if (u == t) {
            visit(p, c, nodes);
            return;
        }
        for (const auto& e : g.edges) {
            if (e.from != u || on[static_cast<std::size_t>(e.to)]) continue;
            on[static_cast<std::size_t>(e.to)] = 1;
            nodes.push_back(e.to);
            rec(e.to, p * e.p, c + e.c);
            nodes.pop_back();
            on[static_cast<std::size_t>(e.to)] = 0;
        }
    };
    rec(s, 1.0, 0.0);
}

/// Vertices of {lo <= p <= hi, mlo <= sum(p) <= mhi}: at most one coordinate
/// strictly between its bounds, pinned by an active mass constraint.
inline std::vector<Eigen::VectorXd> box_budget_vertices(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                                        double mlo, double mhi) {
    const auto n = static_cast<int>(lo.size());
    std::vector<Eigen::VectorXd> out;
    int combos = 1;
    for (int i = 0; i < n; ++i) combos *= 2;
    for (int mask = 0; mask < combos; ++mask) {
        Eigen::VectorXd p(n);
        for (int i = 0; i < n; ++i) p[i] = (mask >> i) & 1 ? hi[i] : lo[i];
        const double s = p.sum();
        if (s >= mlo - 1e-12 && s <= mhi + 1e-12) out.push_back(p);
        for (int free = 0; free < n; ++free)
            for (double target : {mlo, mhi}) {
                Eigen::VectorXd q = p;
                q[free] = target - (s - p[free]);
                if (q[free] >= lo[free] - 1e-12 && q[free] <= hi[free] + 1e-12) out.push_back(q);
            }
    }
    return out;
}

/// Interval VI where every inner optimization is a scan over polytope vertices.
/// `pessimistic` selects (c_hi, max) versus (c_lo, min).
inline Eigen::VectorXd vertex_value_iteration(const IntervalMdp& im, bool pessimistic, double tol = 1e-13) {
    const int n = im.states();
    std::vector<std::vector<std::vector<Eigen::VectorXd>>> verts(static_cast<std::size_t>(im.action_count()));
    for (int a = 0; a < im.action_count(); ++a)
        for (int i = 0; i < n; ++i)
            verts[static_cast<std::size_t>(a)].push_back(box_budget_vertices(
                im.P_lo[a].row(i).transpose(), im.P_hi[a].row(i).transpose(), im.mass_lo[a][i], im.mass_hi[a][i]));
    Eigen::VectorXd V = Eigen::VectorXd::Zero(n);
    for (int it = 0; it < 100000; ++it) {
        Eigen::VectorXd next(n);
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int a = 0; a < im.action_count(); ++a) {
                double inner = pessimistic ? -std::numeric_limits<double>::infinity()
                                           : std::numeric_limits<double>::infinity();
                for (const auto& p : verts[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)])
                    inner = pessimistic ? std::max(inner, p.dot(V)) : std::min(inner, p.dot(V));
                best = std::min(best, (pessimistic ? im.c_hi[a][i] : im.c_lo[a][i]) + inner);
            }
            next[i] = best;
        }
        const double change = (next - V).cwiseAbs().maxCoeff();
        V = next;
        if (change < tol) break;
    }
    return V;
}

/// Random interval MDP with every row mass bound at most 0.9.
inline IntervalMdp random_interval_mdp(std::mt19937_64& gen, int states, int actions) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    IntervalMdp im;
    for (int a = 0; a < actions; ++a) {
        Eigen::MatrixXd lo(states, states), hi(states, states);
        Eigen::VectorXd clo(states), chi(states), mlo(states), mhi(states), mhat(states);
        for (int i = 0; i < states; ++i) {
            for (int j = 0; j < states; ++j) {
                lo(i, j) = 0.2 * u(gen);
                hi(i, j) = lo(i, j) + 0.1 * u(gen);
            }
            const double slo = lo.row(i).sum(), shi = hi.row(i).sum();
            mlo[i] = slo + 0.4 * u(gen) * (shi - slo);
            mhi[i] = std::min(0.9, slo + (0.6 + 0.4 * u(gen)) * (shi - slo));
            mhat[i] = 0.5 * (mlo[i] + mhi[i]);
            clo[i] = 5.0 * u(gen);
            chi[i] = clo[i] + 2.0 * u(gen);
        }
        im.P_lo.push_back(lo);
        im.P_hi.push_back(hi);
        im.c_lo.push_back(clo);
        im.c_hi.push_back(chi);
        im.mass_lo.push_back(mlo);
        im.mass_hi.push_back(mhi);
        im.mass_hat.push_back(mhat);
    }
    return im;
}

/// Best p.V + delta w.V over random boundary points of {w' Omega w <= 1, sum(w) = 0}.
inline double ellipsoid_random_search(const Eigen::VectorXd& p, const Eigen::MatrixXd& omega, double delta,
                                      const Eigen::VectorXd& V, int samples, std::mt19937_64& gen) {
    std::normal_distribution<double> z(0.0, 1.0);
    const auto n = p.size();
    double best = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd w(n);
    for (int k = 0; k < samples; ++k) {
        for (Eigen::Index i = 0; i < n; ++i) w[i] = z(gen);
        w.array() -= w.mean();
        const double norm = std::sqrt(w.dot(omega * w));
        if (norm == 0.0) continue;
        best = std::max(best, (w / norm).dot(V));
    }
    return p.dot(V) + delta * std::max(best, 0.0);
}

inline Eigen::MatrixXd random_spd(std::mt19937_64& gen, int n) {
    std::normal_distribution<double> z(0.0, 1.0);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = z(gen);
    return A * A.transpose() + 0.3 * Eigen::MatrixXd::Identity(n, n);
}

} // namespace rlc::test
