#include "rlc/cli.hpp"

#include "rlc/error.hpp"
#include "rlc/io.hpp"
#include "rlc/svg.hpp"

#include <CLI11.hpp>

#include <array>
#include <optional>
#include <ostream>
#include <sstream>

namespace rlc::cli {

namespace {

using io::Json;

struct BuildOptions {
    std::string scenario, out;
    int n = 500, k = 10, trials = 100;
    double gamma = 0.95;
    std::uint64_t seed = 1;
    std::string bound_mode = "verbatim";
};

struct PlanOptions {
    std::string scenario, roadmap, out, render, sweep, weights = "lower";
    std::optional<double> p_min;
    int levels = 1024;
    std::optional<std::uint64_t> seed;
    int execute = 0;
};

struct EstimateOptions {
    std::string scenario, out;
    int n = 8, actions = 2, trials_per_state = 100;
    double alpha = 0.9;
    std::uint64_t seed = 1;
};

struct SolveOptions {
    std::string estimate, out, mode = "interval";
    double gamma = 0.95, tolerance = 1e-8, eps = 1e-6;
    int max_iters = 100000;
    bool verbose = false;
};

struct BoundOptions {
    double epsilon = 1, alpha = 1, beta = 1, gamma = 1;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// 10 equal-width bins over [0, 1]; p = 1 falls in the last bin.
Json histogram(const Roadmap& r) {
    std::array<int, 10> counts{};
    int below_one = 0;
    for (const auto& e : r.edges()) {
        const double p = e.stats.p_lower;
        counts[static_cast<std::size_t>(std::min(9, static_cast<int>(p * 10)))]++;
        if (p < 1.0) ++below_one;
    }
    Json edges = Json::array();
    for (int b = 0; b < 10; ++b) edges.push_back(b / 10.0);
    edges.push_back(1.0);
    return Json{{"bin_edges", edges}, {"counts", counts}, {"edges_below_one", below_one}};
}

std::vector<double> parse_sweep(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            require(used == item.size() || item.find_first_not_of(" \t", used) == std::string::npos,
                    "bad sweep value \"" + item + "\"");
            require(v > 0.0 && v < 1.0, "sweep values must lie in (0, 1)");
            values.push_back(v);
        } catch (const std::logic_error&) {
            fail(ErrorKind::validation, "bad sweep value \"" + item + "\"");
        }
    }
    require(!values.empty(), "sweep list is empty");
    return values;
}

std::vector<Configuration> waypoints(const Roadmap& r, const PlannedPath& path) {
    std::vector<Configuration> out;
    for (int id : path.node_ids) out.push_back(r.milestones()[static_cast<std::size_t>(id)]);
    return out;
}

Json waypoint_json(const Roadmap& r, const PlannedPath& path) {
    Json a = Json::array();
    for (const auto& q : waypoints(r, path)) a.push_back(io::to_json(Eigen::VectorXd(q)));
    return a;
}

int cmd_validate(const std::string& scenario_path, std::ostream& out) {
    const auto file = io::load_scenario(scenario_path);
    out << dump({{"status", "ok"}, {"dof", file.scenario.dof()}, {"obstacles", file.scenario.obstacles.size()}});
    return 0;
}

int cmd_build(const BuildOptions& o, std::ostream& out) {
    const auto file = io::load_scenario(o.scenario);
    BuildParams p;
    p.n = o.n;
    p.k = o.k;
    p.trials = o.trials;
    p.gamma = o.gamma;
    p.seed = o.seed;
    p.controller = file.controller;
    p.mode = o.bound_mode == "verbatim" ? BoundMode::verbatim : BoundMode::standard_error;
    const Roadmap r = build_roadmap(file.scenario, p);
    io::write_file_atomic(o.out, dump(io::to_json(r)));
    out << dump({{"status", "ok"},
                 {"roadmap", o.out},
                 {"milestones", p.n - 1},
                 {"edges", r.edges().size()},
                 {"histogram", histogram(r)}});
    return 0;
}

int cmd_plan(const PlanOptions& o, std::ostream& out, std::ostream& err) {
    const auto file = io::load_scenario(o.scenario);
    const Roadmap base = io::load_roadmap(o.roadmap);
    require(base.milestones()[1].size() == file.scenario.dof(), "roadmap does not match the scenario dimension");
    const auto& bp = base.params();
    const QueryResult q = insert_query(file.scenario, base, file.scenario.start, file.scenario.goal, bp.k, bp.trials,
                                       bp.gamma, o.seed.value_or(bp.seed));
    const PlanningGraph graph =
        planning_graph(q.roadmap, o.weights == "empirical" ? EdgeWeighting::empirical : EdgeWeighting::lower_bound);

    std::vector<std::vector<Configuration>> drawn;
    auto record = [&](const PlannedPath& path, std::optional<double> p_min) {
        Json j = io::to_json(path);
        j["status"] = "ok";
        j["p_min"] = p_min ? Json(*p_min) : Json();
        j["S"] = p_min ? Json(o.levels) : Json();
        j["waypoints"] = waypoint_json(q.roadmap, path);
        if (o.execute > 0) {
            const auto st = execute_policy(file.scenario, file.controller, q.roadmap, path, o.execute,
                                           o.seed.value_or(bp.seed));
            j["execution"] = {{"runs", st.runs},
                              {"success_rate", st.success_rate},
                              {"mean_cost", st.mean_cost ? Json(*st.mean_cost) : Json()}};
        }
        drawn.push_back(waypoints(q.roadmap, path));
        return j;
    };

    Json result;
    int code = 0;
    if (!o.sweep.empty()) {
        result = Json::array();
        for (double p_min : parse_sweep(o.sweep)) {
            try {
                result.push_back(record(constrained_shortest_path(graph, q.start_id, q.goal_id, p_min, o.levels), p_min));
            } catch (const InfeasibleError& e) {
                result.push_back({{"status", "infeasible"},
                                  {"p_min", p_min},
                                  {"S", o.levels},
                                  {"best_achievable", e.best_probability()}});
            }
        }
    } else if (o.p_min) {
        try {
            result = record(constrained_shortest_path(graph, q.start_id, q.goal_id, *o.p_min, o.levels), o.p_min);
        } catch (const InfeasibleError& e) {
            err << "error: " << e.what() << "\n";
            result = {{"status", "infeasible"},
                      {"p_min", *o.p_min},
                      {"S", o.levels},
                      {"best_achievable", e.best_probability()}};
            code = exit_code(ErrorKind::infeasible);
        }
    } else {
        result = record(max_prob_path(graph, q.start_id, q.goal_id), std::nullopt);
    }

    if (!o.render.empty()) io::write_file_atomic(o.render, render_svg(file.scenario, &q.roadmap, drawn));
    if (!o.out.empty()) io::write_file_atomic(o.out, dump(result));
    out << dump(result);
    return code;
}

int cmd_estimate(const EstimateOptions& o, std::ostream& out) {
    const auto file = io::load_scenario(o.scenario);
    require(o.n >= 2, "need at least two milestones");
    std::vector<Configuration> milestones;
    for (int m = 0; m < o.n; ++m) {
        StreamRng rng = StreamRng::derive({o.seed, 0x6d64706d696c6573ULL, static_cast<std::uint64_t>(m)});
        milestones.push_back(sample_free_config(file.scenario, rng));
    }
    const std::array<ControllerSpec, 1> controllers{file.controller};
    const auto actions = neighbor_actions(controllers, std::min(o.actions, o.n - 1));
    const auto est = estimate(file.scenario, milestones, actions, o.alpha, o.trials_per_state, o.seed);
    io::write_file_atomic(o.out, dump(io::to_json(est, milestones)));
    Json mass = Json::array();
    for (const auto& P : est.P_hat) mass.push_back(io::to_json(Eigen::VectorXd(P.rowwise().sum())));
    out << dump({{"status", "ok"},
                 {"estimate", o.out},
                 {"states", est.states},
                 {"actions", est.action_count()},
                 {"row_mass", mass}});
    return 0;
}

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
    const auto est = io::estimate_from_json(io::read_json(o.estimate));
    Json result{{"status", "ok"}, {"mode", o.mode}};
    std::vector<double> residuals;
    if (o.mode == "interval") {
        const auto sol = interval_value_iteration(interval_bounds(est, o.gamma), o.tolerance, o.max_iters);
        result["gamma"] = o.gamma;
        result["V_lo"] = io::to_json(sol.V_lo);
        result["V_hi"] = io::to_json(sol.V_hi);
        result["policy"] = sol.policy_hi;
        result["iterations"] = sol.iterations;
        residuals = sol.residuals;
    } else if (o.mode == "ellipsoid") {
        const auto sol =
            robust_value_iteration_ellipsoidal(ellipsoidal_model(est, o.gamma, o.eps), est.c_hat, o.tolerance, o.max_iters);
        if (sol.box_violations > 0)
            err << "warning: worst-case transition rows left [0, 1] in " << sol.box_violations
                << " row evaluations\n";
        result["gamma"] = o.gamma;
        result["eps"] = o.eps;
        result["V"] = io::to_json(sol.V);
        result["policy"] = sol.policy;
        result["iterations"] = sol.iterations;
        result["box_violations"] = sol.box_violations;
        residuals = sol.residuals;
    } else {
        const auto sol = value_iteration(est.P_hat, est.c_hat, o.tolerance, o.max_iters);
        result["V"] = io::to_json(sol.V);
        result["policy"] = sol.policy;
        result["iterations"] = sol.iterations;
        residuals = sol.residuals;
    }
    if (o.verbose) result["residuals"] = residuals;
    if (!o.out.empty()) io::write_file_atomic(o.out, dump(result));
    out << dump(result);
    return 0;
}

int cmd_bound(const BoundOptions& o, std::ostream& out) {
    out << milestone_bound(o.epsilon, o.alpha, o.beta, o.gamma) << "\n";
    return 0;
}

Json error_json(const Error& e) {
    Json j{{"status", to_string(e.kind())}, {"message", e.what()}};
    return j;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust planning with stochastic local controllers", args.empty() ? "rlc" : args.front()};
    app.require_subcommand(1);
    const auto unit_open = CLI::Range(0.0, 1.0);

    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
    std::string validate_path;
    validate_cmd->add_option("--scenario", validate_path, "Scenario JSON")->required();

    BuildOptions bo;
    auto* build_cmd = app.add_subcommand("build", "Sample milestones and estimate edge statistics");
    build_cmd->add_option("--scenario", bo.scenario, "Scenario JSON")->required();
    build_cmd->add_option("--out", bo.out, "Roadmap JSON to write")->required();
    build_cmd->add_option("--n", bo.n, "Milestone index bound (n - 1 milestones are sampled)")->check(CLI::Range(2, 1 << 20));
    build_cmd->add_option("--k", bo.k, "Nearest neighbors per milestone")->check(CLI::Range(1, 1 << 20));
    build_cmd->add_option("--trials", bo.trials, "Controller trials per edge")->check(CLI::Range(1, 1 << 24));
    build_cmd->add_option("--gamma", bo.gamma, "Reliability of the success lower bound")->check(unit_open);
    build_cmd->add_option("--seed", bo.seed, "Random seed");
    build_cmd->add_option("--bound-mode", bo.bound_mode, "verbatim | stderr")
        ->check(CLI::IsMember({"verbatim", "stderr"}));

    PlanOptions po;
    auto* plan_cmd = app.add_subcommand("plan", "Plan from the scenario start to its goal");
    plan_cmd->add_option("--scenario", po.scenario, "Scenario JSON")->required();
    plan_cmd->add_option("--roadmap", po.roadmap, "Roadmap JSON")->required();
    auto* p_min_opt = plan_cmd->add_option("--p-min", po.p_min, "Minimum success probability")->check(unit_open);
    plan_cmd->add_option("--sweep", po.sweep, "Comma-separated p_min values")->excludes(p_min_opt);
    plan_cmd->add_option("--levels", po.levels, "Probability discretization levels S")->check(CLI::Range(1, 1 << 24));
    plan_cmd->add_option("--seed", po.seed, "Seed for query edges and execution (default: roadmap seed)");
    plan_cmd->add_option("--weights", po.weights, "lower | empirical")->check(CLI::IsMember({"lower", "empirical"}));
    plan_cmd->add_option("--execute", po.execute, "Replay the planned path this many times")->check(CLI::Range(0, 1 << 24));
    plan_cmd->add_option("--render", po.render, "SVG file to write");
    plan_cmd->add_option("--out", po.out, "Also write the result JSON here");

    auto* mdp_cmd = app.add_subcommand("mdp", "Region MDP estimation and robust solving");
    mdp_cmd->require_subcommand(1);
    EstimateOptions eo;
    auto* est_cmd = mdp_cmd->add_subcommand("estimate", "Simulate discounted region transitions");
    est_cmd->add_option("--scenario", eo.scenario, "Scenario JSON")->required();
    est_cmd->add_option("--out", eo.out, "Estimate JSON to write")->required();
    est_cmd->add_option("--n", eo.n, "Number of milestones (regions)")->check(CLI::Range(2, 1 << 16));
    est_cmd->add_option("--actions", eo.actions, "Neighbor ranks used as actions")->check(CLI::Range(1, 1 << 16));
    est_cmd->add_option("--alpha", eo.alpha, "Discount factor in [0, 1)")->check(CLI::Range(0.0, 0.999999999));
    est_cmd->add_option("--trials", eo.trials_per_state, "Trials per (region, action)")->check(CLI::Range(1, 1 << 24));
    est_cmd->add_option("--seed", eo.seed, "Random seed");
    SolveOptions so;
    auto* solve_cmd = mdp_cmd->add_subcommand("solve", "Solve an estimated MDP");
    solve_cmd->add_option("--estimate", so.estimate, "Estimate JSON")->required();
    solve_cmd->add_option("--mode", so.mode, "interval | ellipsoid | nominal")
        ->check(CLI::IsMember({"interval", "ellipsoid", "nominal"}));
    solve_cmd->add_option("--gamma", so.gamma, "Confidence level of the uncertainty set")->check(unit_open);
    solve_cmd->add_option("--tolerance", so.tolerance, "Sup-norm stopping tolerance")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--max-iters", so.max_iters, "Sweep budget")->check(CLI::Range(1, 1 << 30));
    solve_cmd->add_option("--eps", so.eps, "Covariance regularization (ellipsoid mode)")->check(CLI::PositiveNumber);
    solve_cmd->add_flag("--verbose", so.verbose, "Include per-sweep residuals");
    solve_cmd->add_option("--out", so.out, "Also write the result JSON here");

    BoundOptions bdo;
    auto* bound_cmd = app.add_subcommand("bound", "Milestone count for an expansive space");
    const auto unit_closed = CLI::Range(std::numeric_limits<double>::min(), 1.0);
    bound_cmd->add_option("--epsilon", bdo.epsilon, "epsilon in (0, 1]")->required()->check(unit_closed);
    bound_cmd->add_option("--alpha", bdo.alpha, "alpha in (0, 1]")->required()->check(unit_closed);
    bound_cmd->add_option("--beta", bdo.beta, "beta in (0, 1]")->required()->check(unit_closed);
    bound_cmd->add_option("--gamma", bdo.gamma, "gamma in (0, 1]")->required()->check(unit_closed);

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        out << dump({{"status", "validation"}, {"message", e.what()}});
        return exit_code(ErrorKind::validation);
    }

    try {
        if (validate_cmd->parsed()) return cmd_validate(validate_path, out);
        if (build_cmd->parsed()) {
            require(bo.gamma > 0.0 && bo.gamma < 1.0, "gamma must lie in (0, 1)");
            return cmd_build(bo, out);
        }
        if (plan_cmd->parsed()) {
            require(!po.p_min || (*po.p_min > 0.0 && *po.p_min < 1.0), "p_min must lie in (0, 1)");
            return cmd_plan(po, out, err);
        }
        if (est_cmd->parsed()) return cmd_estimate(eo, out);
        if (solve_cmd->parsed()) {
            require(so.gamma > 0.0 && so.gamma < 1.0, "gamma must lie in (0, 1)");
            return cmd_solve(so, out, err);
        }
        if (bound_cmd->parsed()) return cmd_bound(bdo, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        out << dump(error_json(e));
        return exit_code(e.kind());
    }
    return exit_code(ErrorKind::validation);
}

} // namespace rlc::cli
