#pragma once

#include "rlc/controller.hpp"
#include "rlc/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace rlc {

/// An action of the region MDP: run `controller` toward the `neighbor_rank`-th
/// nearest other milestone of the current region (rank 0 = nearest).
struct MdpAction {
    ControllerSpec controller;
    int neighbor_rank = 0;
};

/// Every (controller, rank) pair with rank < `ranks`.
std::vector<MdpAction> neighbor_actions(std::span<const ControllerSpec> controllers, int ranks);

/// Outcome of one region-exit simulation.
struct TrialRecord {
    static constexpr int absorbed = -1;

    /// Region entered on exit, or `absorbed` after a collision / step budget.
    int destination = absorbed;
    /// Stopping time in steps (>= 1).
    int tau = 1;
    /// sum_t alpha^(t-1) * (length of step t).
    double discounted_cost = 0.0;

    bool operator==(const TrialRecord&) const = default;
};

/// Discounted transition estimates, one n x n matrix per action.
struct MdpEstimate {
    double alpha = 0.0;
    int states = 0;
    std::vector<MdpAction> actions;
    std::vector<Eigen::MatrixXd> P_hat;
    std::vector<Eigen::VectorXd> c_hat;
    /// records[a][i]: trials of action a started in region i.
    std::vector<std::vector<std::vector<TrialRecord>>> records;

    int action_count() const { return static_cast<int>(P_hat.size()); }
};

/// P_hat(i, j) = mean over trials of alpha^(tau-1) 1{dest = j};
/// c_hat(i) = mean discounted cost. Absorbed trials add no transition mass.
MdpEstimate estimate_from_records(std::vector<std::vector<std::vector<TrialRecord>>> records, int states,
                                  double alpha, std::vector<MdpAction> actions = {});

/// Simulates every action from `trials_per_state` uniform starts inside each
/// Voronoi region of `milestones` until the trajectory becomes closer to
/// another milestone. Throws Error(sampling_budget) when a region cannot be
/// sampled.
MdpEstimate estimate(const Scenario& scenario, std::span<const Configuration> milestones,
                     std::span<const MdpAction> actions, double alpha, int trials_per_state, std::uint64_t seed,
                     int max_start_attempts = 200000);

/// Index of the nearest milestone, ties to the lower index.
int nearest_milestone(std::span<const Configuration> milestones, const Configuration& x);

struct IntervalMdp {
    std::vector<Eigen::MatrixXd> P_lo, P_hi;
    std::vector<Eigen::VectorXd> c_lo, c_hi;
    /// Bounds and point estimate of the total discounted mass of each row; [a](i).
    std::vector<Eigen::VectorXd> mass_lo, mass_hi, mass_hat;

    int states() const { return P_lo.empty() ? 0 : static_cast<int>(P_lo.front().rows()); }
    int action_count() const { return static_cast<int>(P_lo.size()); }
};

/// Elementwise mean +- z(gamma) * SE of the per-trial contributions, clipped
/// to [0, 1] (costs: clipped below at 0). gamma < 1/2 collapses to the mean.
IntervalMdp interval_bounds(const MdpEstimate& estimate, double gamma);

/// Point intervals around a known model.
IntervalMdp point_intervals(std::span<const Eigen::MatrixXd> P, std::span<const Eigen::VectorXd> c);

/// Extreme value of p.V over {lo <= p <= hi, mass_lo <= sum(p) <= mass_hi}.
/// Greedy: start from lo, then add mass in decreasing (maximize) or increasing
/// (minimize) order of V, capped per entry, until the objective stops improving
/// and the lower mass bound is met.
double box_budget_response(const Eigen::Ref<const Eigen::VectorXd>& V, const Eigen::Ref<const Eigen::VectorXd>& lo,
                           const Eigen::Ref<const Eigen::VectorXd>& hi, double mass_lo, double mass_hi,
                           bool maximize);

struct ValueInterval {
    Eigen::VectorXd V_lo, V_hi;
    /// Argmin action of the pessimistic backup per state.
    std::vector<int> policy_hi;
    std::vector<double> residuals;
    int iterations = 0;
};

/// Pessimistic/optimistic interval value iteration from V = 0 until the
/// sup-norm change drops below `tol`. Throws Error(non_contractive) listing
/// every (state, action) whose row mass reaches 1, Error(no_convergence)
/// after `max_iters` sweeps.
ValueInterval interval_value_iteration(const IntervalMdp& imdp, double tol, int max_iters);

struct ValueSolution {
    Eigen::VectorXd V;
    std::vector<int> policy;
    std::vector<double> residuals;
    int iterations = 0;
    /// Sweeps x rows whose worst-case transition row left [0, 1]^n.
    int box_violations = 0;
};

/// Classic discounted value iteration with substochastic rows.
ValueSolution value_iteration(std::span<const Eigen::MatrixXd> P, std::span<const Eigen::VectorXd> c, double tol,
                              int max_iters);

/// max over { p_row + delta w : w' Omega w <= 1, w' 1 = 0 } of p.V, closed form
///   p_row.V + delta * sqrt((V - l 1)' Omega^-1 (V - l 1)),  l = 1'Omega^-1 V / 1'Omega^-1 1.
/// The simplex box 0 <= p <= 1 is not imposed.
template <typename DerivedP, typename DerivedV>
double ellipsoid_inner_max(const Eigen::MatrixBase<DerivedP>& p_row, const Eigen::LLT<Eigen::MatrixXd>& omega,
                           double delta, const Eigen::MatrixBase<DerivedV>& V) {
    const double base = p_row.dot(V);
    if (delta == 0.0) return base;
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(V.size());
    // the form is shift invariant; shifting first makes a constant V exactly zero
    const Eigen::VectorXd shifted = V.derived().template cast<double>().array() - static_cast<double>(V[0]);
    const Eigen::VectorXd inv_v = omega.solve(shifted);
    const Eigen::VectorXd inv_1 = omega.solve(ones);
    const double lambda = ones.dot(inv_v) / ones.dot(inv_1);
    const Eigen::VectorXd centered = shifted - lambda * ones;
    const double q = std::max(0.0, centered.dot(inv_v - lambda * inv_1));
    return base + delta * std::sqrt(q);
}

/// Factorizes Omega; throws Error(validation) unless it is symmetric positive definite.
Eigen::LLT<Eigen::MatrixXd> factor_omega(const Eigen::MatrixXd& omega);

template <typename DerivedP, typename DerivedV>
double ellipsoid_inner_max(const Eigen::MatrixBase<DerivedP>& p_row, const Eigen::MatrixXd& omega, double delta,
                           const Eigen::MatrixBase<DerivedV>& V) {
    require(delta >= 0.0, "ellipsoid radius must be >= 0");
    return ellipsoid_inner_max(p_row, factor_omega(omega), delta, V);
}

/// The maximizing transition row of ellipsoid_inner_max.
Eigen::VectorXd ellipsoid_worst_row(const Eigen::Ref<const Eigen::VectorXd>& p_row,
                                    const Eigen::LLT<Eigen::MatrixXd>& omega, double delta,
                                    const Eigen::Ref<const Eigen::VectorXd>& V);

struct EllipsoidalRow {
    Eigen::VectorXd center;
    Eigen::MatrixXd omega;
    double delta = 0.0;
};

struct EllipsoidalMdp {
    /// rows[a][i]
    std::vector<std::vector<EllipsoidalRow>> rows;

    int action_count() const { return static_cast<int>(rows.size()); }
    int states() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }
};

struct OmegaFit {
    Eigen::MatrixXd omega;
    double delta = 0.0;
};

/// Omega = T (Cov + eps I)^-1 over the per-trial vectors alpha^(tau-1) e_dest;
/// delta = sqrt of the chi-square quantile at `gamma` with states - 1 degrees of freedom.
OmegaFit fit_omega(std::span<const TrialRecord> records, int states, double alpha, double gamma, double eps);

EllipsoidalMdp ellipsoidal_model(const MdpEstimate& estimate, double gamma, double eps);

/// Value iteration with the backup min_a { c_a(i) + ellipsoid_inner_max(...) }.
ValueSolution robust_value_iteration_ellipsoidal(const EllipsoidalMdp& emdp, std::span<const Eigen::VectorXd> costs,
                                                 double tol, int max_iters);

} // namespace rlc
