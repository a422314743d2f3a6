#include "rlc/mdp.hpp"

#include "rlc/estimation.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace rlc {

namespace {

constexpr std::uint64_t region_stream_tag = 0x726567696f6e730aULL;
constexpr double contraction_margin = 1e-9;

double discount(double alpha, int tau) { return std::pow(alpha, tau - 1); }

/// Mean and standard error of `xs`; the SE is 0 for fewer than two samples.
std::pair<double, double> mean_and_se(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() < 2) return {mean, 0.0};
    if (std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) == xs.end()) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

std::vector<int> order_by_value(const Eigen::Ref<const Eigen::VectorXd>& V, bool descending) {
    std::vector<int> idx(static_cast<std::size_t>(V.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return descending ? V[a] > V[b] : V[a] < V[b]; });
    return idx;
}

/// Effective upper row mass: rows whose bound reaches 1 are pulled back below 1
/// when the point estimate itself is contractive; anything else is reported.
Eigen::VectorXd effective_mass_hi(const IntervalMdp& imdp, int a, std::vector<std::string>& offending) {
    Eigen::VectorXd hi = imdp.mass_hi[static_cast<std::size_t>(a)];
    const auto& hat = imdp.mass_hat[static_cast<std::size_t>(a)];
    for (Eigen::Index i = 0; i < hi.size(); ++i) {
        if (hi[i] < 1.0) continue;
        if (hat[i] < 1.0)
            hi[i] = std::max(1.0 - contraction_margin, hat[i]);
        else
            offending.push_back("(state " + std::to_string(i) + ", action " + std::to_string(a) + ")");
    }
    return hi;
}

void check_model_shapes(std::span<const Eigen::MatrixXd> P, std::span<const Eigen::VectorXd> c) {
    require(!P.empty() && P.size() == c.size(), "model needs one transition matrix and cost vector per action");
    const auto n = P.front().rows();
    for (std::size_t a = 0; a < P.size(); ++a)
        require(P[a].rows() == n && P[a].cols() == n && c[a].size() == n, "inconsistent model dimensions");
}

std::string join(const std::vector<std::string>& parts) {
    std::ostringstream os;
    for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? ", " : "") << parts[i];
    return os.str();
}

} // namespace

std::vector<MdpAction> neighbor_actions(std::span<const ControllerSpec> controllers, int ranks) {
    require(ranks >= 1, "need at least one neighbor rank");
    std::vector<MdpAction> actions;
    for (const auto& c : controllers)
        for (int r = 0; r < ranks; ++r) actions.push_back({c, r});
    return actions;
}

int nearest_milestone(std::span<const Configuration> milestones, const Configuration& x) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < milestones.size(); ++m) {
        const double d = (milestones[m] - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(m);
        }
    }
    return best;
}

MdpEstimate estimate_from_records(std::vector<std::vector<std::vector<TrialRecord>>> records, int states,
                                  double alpha, std::vector<MdpAction> actions) {
    require(alpha >= 0.0 && alpha < 1.0, "discount alpha must lie in [0, 1)");
    require(states >= 1, "need at least one state");
    MdpEstimate est;
    est.alpha = alpha;
    est.states = states;
    est.actions = std::move(actions);
    for (const auto& per_state : records) {
        require(static_cast<int>(per_state.size()) == states, "trial records must cover every state");
        Eigen::MatrixXd P = Eigen::MatrixXd::Zero(states, states);
        Eigen::VectorXd c = Eigen::VectorXd::Zero(states);
        for (int i = 0; i < states; ++i) {
            const auto& trials = per_state[static_cast<std::size_t>(i)];
            require(!trials.empty(), "every (state, action) needs at least one trial");
            const double T = static_cast<double>(trials.size());
            for (const auto& r : trials) {
                require(r.tau >= 1, "stopping time must be >= 1");
                require(r.destination == TrialRecord::absorbed || (r.destination >= 0 && r.destination < states),
                        "trial destination out of range");
                if (r.destination != TrialRecord::absorbed) P(i, r.destination) += discount(alpha, r.tau) / T;
                c[i] += r.discounted_cost / T;
            }
        }
        est.P_hat.push_back(std::move(P));
        est.c_hat.push_back(std::move(c));
    }
    est.records = std::move(records);
    return est;
}

MdpEstimate estimate(const Scenario& scn, std::span<const Configuration> milestones, std::span<const MdpAction> actions,
                     double alpha, int trials_per_state, std::uint64_t seed, int max_start_attempts) {
    validate(scn);
    require(alpha >= 0.0 && alpha < 1.0, "discount alpha must lie in [0, 1)");
    require(milestones.size() >= 2, "need at least two milestones");
    require(!actions.empty(), "need at least one action");
    require(trials_per_state >= 1, "trials per state must be >= 1");
    const int n = static_cast<int>(milestones.size());
    for (int i = 0; i < n; ++i) {
        require(milestones[static_cast<std::size_t>(i)].size() == scn.dof(), "milestone has wrong dimension");
        for (int j = 0; j < i; ++j)
            require((milestones[static_cast<std::size_t>(i)] - milestones[static_cast<std::size_t>(j)]).norm() > 0,
                    "milestones must be distinct");
    }
    for (const auto& a : actions)
        require(a.neighbor_rank >= 0 && a.neighbor_rank < n - 1, "action neighbor rank exceeds milestone count");

    // neighbors[i]: other milestones by increasing distance
    std::vector<std::vector<int>> neighbors(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& nb = neighbors[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j)
            if (j != i) nb.push_back(j);
        const auto& xi = milestones[static_cast<std::size_t>(i)];
        std::stable_sort(nb.begin(), nb.end(), [&](int a, int b) {
            return (milestones[static_cast<std::size_t>(a)] - xi).squaredNorm() <
                   (milestones[static_cast<std::size_t>(b)] - xi).squaredNorm();
        });
    }

    const WorldSample nominal = nominal_world(scn);
    const Eigen::Index dof = scn.dof();
    std::vector<std::vector<std::vector<TrialRecord>>> records(actions.size());
    for (std::size_t a = 0; a < actions.size(); ++a) {
        const auto& action = actions[a];
        records[a].resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const auto& target = milestones[static_cast<std::size_t>(
                neighbors[static_cast<std::size_t>(i)][static_cast<std::size_t>(action.neighbor_rank)])];
            auto& out = records[a][static_cast<std::size_t>(i)];
            for (int t = 0; t < trials_per_state; ++t) {
                StreamRng rng = StreamRng::derive({seed, region_stream_tag, a, static_cast<std::uint64_t>(i),
                                                   static_cast<std::uint64_t>(t)});
                Configuration x(dof);
                bool found = false;
                for (int attempt = 0; attempt < max_start_attempts && !found; ++attempt) {
                    for (Eigen::Index d = 0; d < dof; ++d)
                        x[d] = scn.cspace.lo[d] + (scn.cspace.hi[d] - scn.cspace.lo[d]) * rng.uniform();
                    found = nearest_milestone(milestones, x) == i && !collides(scn, x, nominal);
                }
                if (!found)
                    fail(ErrorKind::sampling_budget,
                         "could not sample a free start in the region of milestone " + std::to_string(i));

                const WorldSample world = sample_world(scn, rng);
                TrialRecord rec;
                if (collides(scn, x, world)) {
                    out.push_back(rec);
                    continue;
                }
                double weight = 1.0;
                for (int step = 1;; ++step, weight *= alpha) {
                    const Configuration gap = target - x;
                    const double remaining = gap.norm();
                    Configuration delta = remaining > 0 ? Configuration(gap * (std::min(scn.step_size, remaining) / remaining))
                                                        : Configuration::Zero(dof);
                    if (action.controller.actuation_noise_std > 0)
                        for (Eigen::Index d = 0; d < dof; ++d)
                            delta[d] += action.controller.actuation_noise_std * standard_normal(rng);
                    x += delta;
                    rec.discounted_cost += weight * delta.norm();
                    rec.tau = step;
                    if (collides(scn, x, world)) break;
                    const int region = nearest_milestone(milestones, x);
                    if (region != i) {
                        rec.destination = region;
                        break;
                    }
                    if (step >= scn.max_steps) break;
                }
                out.push_back(rec);
            }
        }
    }
    return estimate_from_records(std::move(records), n, alpha, {actions.begin(), actions.end()});
}

IntervalMdp interval_bounds(const MdpEstimate& est, double gamma) {
    require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
    require(est.records.size() == est.P_hat.size(), "estimate carries no trial records");
    const double z = std::max(0.0, inv_norm_cdf(gamma));
    const int n = est.states;
    IntervalMdp im;
    for (std::size_t a = 0; a < est.records.size(); ++a) {
        Eigen::MatrixXd lo(n, n), hi(n, n);
        Eigen::VectorXd clo(n), chi(n), mlo(n), mhi(n), mhat(n);
        for (int i = 0; i < n; ++i) {
            const auto& trials = est.records[a][static_cast<std::size_t>(i)];
            std::vector<double> xs(trials.size());
            for (int j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < trials.size(); ++k)
                    xs[k] = trials[k].destination == j ? discount(est.alpha, trials[k].tau) : 0.0;
                // centred on the stored estimate so zero spread reproduces it bit for bit
                const double m = est.P_hat[a](i, j), se = mean_and_se(xs).second;
                lo(i, j) = std::clamp(m - z * se, 0.0, 1.0);
                hi(i, j) = std::clamp(m + z * se, 0.0, 1.0);
            }
            for (std::size_t k = 0; k < trials.size(); ++k) xs[k] = trials[k].discounted_cost;
            {
                const double m = est.c_hat[a][i], se = mean_and_se(xs).second;
                clo[i] = std::max(0.0, m - z * se);
                chi[i] = m + z * se;
            }
            for (std::size_t k = 0; k < trials.size(); ++k)
                xs[k] = trials[k].destination == TrialRecord::absorbed ? 0.0 : discount(est.alpha, trials[k].tau);
            const auto [m, se] = mean_and_se(xs);
            mhat[i] = m;
            mlo[i] = std::clamp(m - z * se, 0.0, 1.0);
            mhi[i] = std::clamp(m + z * se, 0.0, 1.0);
        }
        im.P_lo.push_back(std::move(lo));
        im.P_hi.push_back(std::move(hi));
        im.c_lo.push_back(std::move(clo));
        im.c_hi.push_back(std::move(chi));
        im.mass_lo.push_back(std::move(mlo));
        im.mass_hi.push_back(std::move(mhi));
        im.mass_hat.push_back(std::move(mhat));
    }
    return im;
}

IntervalMdp point_intervals(std::span<const Eigen::MatrixXd> P, std::span<const Eigen::VectorXd> c) {
    check_model_shapes(P, c);
    IntervalMdp im;
    for (std::size_t a = 0; a < P.size(); ++a) {
        im.P_lo.push_back(P[a]);
        im.P_hi.push_back(P[a]);
        im.c_lo.push_back(c[a]);
        im.c_hi.push_back(c[a]);
        const Eigen::VectorXd mass = P[a].rowwise().sum();
        im.mass_lo.push_back(mass);
        im.mass_hi.push_back(mass);
        im.mass_hat.push_back(mass);
    }
    return im;
}

double box_budget_response(const Eigen::Ref<const Eigen::VectorXd>& V, const Eigen::Ref<const Eigen::VectorXd>& lo,
                           const Eigen::Ref<const Eigen::VectorXd>& hi, double mass_lo, double mass_hi,
                           bool maximize) {
    Eigen::VectorXd p = lo;
    double mass = lo.sum();
    for (int j : order_by_value(V, maximize)) {
        const bool improves = maximize ? V[j] > 0.0 : V[j] < 0.0;
        const double budget = improves ? mass_hi - mass : mass_lo - mass;
        const double add = std::clamp(budget, 0.0, hi[j] - lo[j]);
        p[j] += add;
        mass += add;
    }
    return p.dot(V);
}

ValueInterval interval_value_iteration(const IntervalMdp& im, double tol, int max_iters) {
    require(tol > 0.0, "tolerance must be > 0");
    require(max_iters >= 1, "max_iters must be >= 1");
    const int n = im.states();
    const int A = im.action_count();
    require(n >= 1 && A >= 1, "interval MDP is empty");

    std::vector<std::string> offending;
    std::vector<Eigen::VectorXd> mass_hi;
    for (int a = 0; a < A; ++a) {
        const auto sa = static_cast<std::size_t>(a);
        require(im.P_lo[sa].rows() == n && im.P_hi[sa].rows() == n && im.P_lo[sa].cols() == n &&
                    im.P_hi[sa].cols() == n && im.c_lo[sa].size() == n && im.c_hi[sa].size() == n,
                "inconsistent interval MDP dimensions");
        require((im.P_lo[sa].array() <= im.P_hi[sa].array()).all() && (im.P_lo[sa].array() >= 0).all(),
                "transition bounds must satisfy 0 <= P_lo <= P_hi");
        require((im.c_lo[sa].array() <= im.c_hi[sa].array()).all() && (im.c_lo[sa].array() >= 0).all(),
                "cost bounds must satisfy 0 <= c_lo <= c_hi");
        mass_hi.push_back(effective_mass_hi(im, a, offending));
    }
    if (!offending.empty())
        fail(ErrorKind::non_contractive, "row mass upper bound reaches 1 at " + join(offending) +
                                             "; lower alpha or run more trials");
    for (int a = 0; a < A; ++a) {
        const auto sa = static_cast<std::size_t>(a);
        for (int i = 0; i < n; ++i)
            require(im.P_lo[sa].row(i).sum() <= mass_hi[sa][i] + 1e-12 &&
                        im.P_hi[sa].row(i).sum() >= im.mass_lo[sa][i] - 1e-12,
                    "empty transition set at state " + std::to_string(i) + ", action " + std::to_string(a));
    }

    ValueInterval out;
    out.V_lo = Eigen::VectorXd::Zero(n);
    out.V_hi = Eigen::VectorXd::Zero(n);
    out.policy_hi.assign(static_cast<std::size_t>(n), 0);
    for (int it = 1; it <= max_iters; ++it) {
        Eigen::VectorXd next_hi(n), next_lo(n);
        for (int i = 0; i < n; ++i) {
            double best_hi = std::numeric_limits<double>::infinity();
            double best_lo = std::numeric_limits<double>::infinity();
            int arg = 0;
            for (int a = 0; a < A; ++a) {
                const auto sa = static_cast<std::size_t>(a);
                const double q_hi =
                    im.c_hi[sa][i] + box_budget_response(out.V_hi, im.P_lo[sa].row(i).transpose(),
                                                         im.P_hi[sa].row(i).transpose(), im.mass_lo[sa][i],
                                                         mass_hi[sa][i], true);
                const double q_lo =
                    im.c_lo[sa][i] + box_budget_response(out.V_lo, im.P_lo[sa].row(i).transpose(),
                                                         im.P_hi[sa].row(i).transpose(), im.mass_lo[sa][i],
                                                         mass_hi[sa][i], false);
                if (q_hi < best_hi) {
                    best_hi = q_hi;
                    arg = a;
                }
                best_lo = std::min(best_lo, q_lo);
            }
            next_hi[i] = best_hi;
            next_lo[i] = best_lo;
            out.policy_hi[static_cast<std::size_t>(i)] = arg;
        }
        const double residual =
            std::max((next_hi - out.V_hi).cwiseAbs().maxCoeff(), (next_lo - out.V_lo).cwiseAbs().maxCoeff());
        out.V_hi = std::move(next_hi);
        out.V_lo = std::move(next_lo);
        out.residuals.push_back(residual);
        out.iterations = it;
        if (residual < tol) return out;
    }
    fail(ErrorKind::no_convergence,
         "interval value iteration did not converge in " + std::to_string(max_iters) + " sweeps");
}

ValueSolution value_iteration(std::span<const Eigen::MatrixXd> P, std::span<const Eigen::VectorXd> c, double tol,
                              int max_iters) {
    check_model_shapes(P, c);
    require(tol > 0.0 && max_iters >= 1, "tolerance must be > 0 and max_iters >= 1");
    const auto n = P.front().rows();
    std::vector<std::string> offending;
    for (std::size_t a = 0; a < P.size(); ++a) {
        require((P[a].array() >= 0).all(), "transition entries must be >= 0");
        for (Eigen::Index i = 0; i < n; ++i)
            if (P[a].row(i).sum() >= 1.0)
                offending.push_back("(state " + std::to_string(i) + ", action " + std::to_string(a) + ")");
    }
    if (!offending.empty()) fail(ErrorKind::non_contractive, "row mass reaches 1 at " + join(offending));

    ValueSolution out;
    out.V = Eigen::VectorXd::Zero(n);
    out.policy.assign(static_cast<std::size_t>(n), 0);
    for (int it = 1; it <= max_iters; ++it) {
        Eigen::VectorXd next = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
        for (std::size_t a = 0; a < P.size(); ++a) {
            const Eigen::VectorXd q = c[a] + P[a] * out.V;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (q[i] < next[i]) {
                    next[i] = q[i];
                    out.policy[static_cast<std::size_t>(i)] = static_cast<int>(a);
                }
            }
        }
        const double residual = (next - out.V).cwiseAbs().maxCoeff();
        out.V = std::move(next);
        out.residuals.push_back(residual);
        out.iterations = it;
        if (residual < tol) return out;
    }
    fail(ErrorKind::no_convergence, "value iteration did not converge in " + std::to_string(max_iters) + " sweeps");
}

Eigen::LLT<Eigen::MatrixXd> factor_omega(const Eigen::MatrixXd& omega) {
    require(omega.rows() == omega.cols() && omega.rows() > 0, "Omega must be square");
    require(omega.allFinite(), "Omega must be finite");
    const double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
    require((omega - omega.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * scale, "Omega must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(omega);
    require(llt.info() == Eigen::Success, "Omega is not positive definite");
    return llt;
}

Eigen::VectorXd ellipsoid_worst_row(const Eigen::Ref<const Eigen::VectorXd>& p_row,
                                    const Eigen::LLT<Eigen::MatrixXd>& omega, double delta,
                                    const Eigen::Ref<const Eigen::VectorXd>& V) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(V.size());
    const Eigen::VectorXd shifted = V.array() - V[0];
    const Eigen::VectorXd inv_v = omega.solve(shifted);
    const Eigen::VectorXd inv_1 = omega.solve(ones);
    const double lambda = ones.dot(inv_v) / ones.dot(inv_1);
    const Eigen::VectorXd direction = inv_v - lambda * inv_1;
    const double q = (shifted - lambda * ones).dot(direction);
    if (delta == 0.0 || q <= 0.0) return p_row;
    return p_row + delta * direction / std::sqrt(q);
}

OmegaFit fit_omega(std::span<const TrialRecord> records, int states, double alpha, double gamma, double eps) {
    require(records.size() >= 2, "fitting Omega needs at least two trials");
    require(states >= 2, "fitting Omega needs at least two states");
    require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
    require(eps > 0.0, "regularization eps must be > 0");
    const auto T = static_cast<Eigen::Index>(records.size());
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(T, states);
    for (Eigen::Index k = 0; k < T; ++k) {
        const auto& r = records[static_cast<std::size_t>(k)];
        require(r.destination == TrialRecord::absorbed || (r.destination >= 0 && r.destination < states),
                "trial destination out of range");
        if (r.destination != TrialRecord::absorbed) X(k, r.destination) = discount(alpha, r.tau);
    }
    const Eigen::MatrixXd centered = X.rowwise() - X.colwise().mean();
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(T - 1);
    cov.diagonal().array() += eps;
    OmegaFit fit;
    fit.omega = static_cast<double>(T) * cov.llt().solve(Eigen::MatrixXd::Identity(states, states));
    fit.omega = 0.5 * (fit.omega + fit.omega.transpose());
    const boost::math::chi_squared_distribution<double> chi2(states - 1);
    fit.delta = std::sqrt(boost::math::quantile(chi2, gamma));
    return fit;
}

EllipsoidalMdp ellipsoidal_model(const MdpEstimate& est, double gamma, double eps) {
    require(est.records.size() == est.P_hat.size(), "estimate carries no trial records");
    EllipsoidalMdp em;
    for (std::size_t a = 0; a < est.P_hat.size(); ++a) {
        std::vector<EllipsoidalRow> rows;
        for (int i = 0; i < est.states; ++i) {
            const auto fit = fit_omega(est.records[a][static_cast<std::size_t>(i)], est.states, est.alpha, gamma, eps);
            rows.push_back({est.P_hat[a].row(i).transpose(), fit.omega, fit.delta});
        }
        em.rows.push_back(std::move(rows));
    }
    return em;
}

ValueSolution robust_value_iteration_ellipsoidal(const EllipsoidalMdp& em, std::span<const Eigen::VectorXd> costs,
                                                 double tol, int max_iters) {
    require(tol > 0.0 && max_iters >= 1, "tolerance must be > 0 and max_iters >= 1");
    const int n = em.states();
    const int A = em.action_count();
    require(n >= 1 && A >= 1, "ellipsoidal MDP is empty");
    require(static_cast<int>(costs.size()) == A, "need one cost vector per action");

    std::vector<std::vector<Eigen::LLT<Eigen::MatrixXd>>> factors(static_cast<std::size_t>(A));
    for (int a = 0; a < A; ++a) {
        const auto sa = static_cast<std::size_t>(a);
        require(static_cast<int>(em.rows[sa].size()) == n && costs[sa].size() == n,
                "inconsistent ellipsoidal MDP dimensions");
        for (const auto& row : em.rows[sa]) {
            require(row.center.size() == n && row.delta >= 0.0, "invalid ellipsoidal row");
            factors[sa].push_back(factor_omega(row.omega));
        }
    }

    ValueSolution out;
    out.V = Eigen::VectorXd::Zero(n);
    out.policy.assign(static_cast<std::size_t>(n), 0);
    for (int it = 1; it <= max_iters; ++it) {
        Eigen::VectorXd next(n);
        std::vector<std::string> offending;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int arg = 0;
            for (int a = 0; a < A; ++a) {
                const auto sa = static_cast<std::size_t>(a);
                const auto& row = em.rows[sa][static_cast<std::size_t>(i)];
                const auto& llt = factors[sa][static_cast<std::size_t>(i)];
                const Eigen::VectorXd worst = ellipsoid_worst_row(row.center, llt, row.delta, out.V);
                if (worst.sum() >= 1.0)
                    offending.push_back("(state " + std::to_string(i) + ", action " + std::to_string(a) + ")");
                if ((worst.array() < 0.0).any() || (worst.array() > 1.0).any()) ++out.box_violations;
                const double q = costs[sa][i] + ellipsoid_inner_max(row.center, llt, row.delta, out.V);
                if (q < best) {
                    best = q;
                    arg = a;
                }
            }
            next[i] = best;
            out.policy[static_cast<std::size_t>(i)] = arg;
        }
        if (!offending.empty())
            fail(ErrorKind::non_contractive, "worst-case row mass reaches 1 at " + join(offending));
        const double residual = (next - out.V).cwiseAbs().maxCoeff();
        out.V = std::move(next);
        out.residuals.push_back(residual);
        out.iterations = it;
        if (residual < tol) return out;
    }
    fail(ErrorKind::no_convergence,
         "robust value iteration did not converge in " + std::to_string(max_iters) + " sweeps");
}

} // namespace rlc
