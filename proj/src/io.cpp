#include "rlc/io.hpp"

#include "rlc/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace rlc::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Eigen::VectorXd vector_from(const Json& j, const char* what) {
    require(j.is_array(), std::string(what) + " must be an array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        require(j[i].is_number(), std::string(what) + " must be an array of numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

Eigen::Vector2d point_from(const Json& j, const char* what) {
    const Eigen::VectorXd v = vector_from(j, what);
    require(v.size() == 2, std::string(what) + " must have two coordinates");
    return v;
}

Box box_from(const Json& j, const char* what) {
    require(j.is_object() && j.contains("lo") && j.contains("hi"), std::string(what) + " needs lo and hi arrays");
    return {vector_from(j.at("lo"), what), vector_from(j.at("hi"), what)};
}

Json vec_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

void check_format(const Json& doc, const char* kind) {
    require(doc.is_object(), std::string(kind) + " document must be a JSON object");
    require(doc.contains("format") && doc.at("format").is_number_integer(),
            std::string(kind) + " document lacks an integer \"format\" field");
    const int fmt = doc.at("format").get<int>();
    require(fmt == format_version, std::string(kind) + " format " + std::to_string(fmt) + " is not supported");
}

const char* mode_name(BoundMode m) { return m == BoundMode::verbatim ? "verbatim" : "stderr"; }

BoundMode mode_from(const std::string& s) {
    if (s == "verbatim") return BoundMode::verbatim;
    if (s == "stderr" || s == "standard_error") return BoundMode::standard_error;
    fail(ErrorKind::validation, "unknown bound mode \"" + s + "\"");
}

Json controller_json(const ControllerSpec& c) {
    return Json{{"kind", "straight_line"}, {"actuation_noise_std", c.actuation_noise_std}};
}

ControllerSpec controller_from(const Json& j) {
    ControllerSpec c;
    if (j.is_null()) return c;
    const auto kind = j.value("kind", std::string("straight_line"));
    require(kind == "straight_line", "unknown controller kind \"" + kind + "\"");
    c.actuation_noise_std = j.value("actuation_noise_std", 0.0);
    require(c.actuation_noise_std >= 0.0 && std::isfinite(c.actuation_noise_std),
            "actuation_noise_std must be >= 0");
    return c;
}

/// Maps nlohmann exceptions onto validation errors with context.
template <class F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::validation, std::string("malformed ") + what + ": " + e.what());
    }
}

} // namespace

ScenarioFile scenario_from_json(const Json& doc) {
    return guarded("scenario", [&] {
        check_format(doc, "scenario");
        ScenarioFile file;
        Scenario& s = file.scenario;
        s.cspace = box_from(doc.at("cspace"), "cspace");
        s.workspace = box_from(doc.at("workspace"), "workspace");

        const auto& robot = doc.at("robot");
        const auto type = robot.at("type").get<std::string>();
        if (type == "discs") {
            s.robot = DiscSet{robot.at("radii").get<std::vector<double>>()};
        } else if (type == "arm") {
            s.robot = PlanarArm{point_from(robot.at("base"), "robot.base"),
                                robot.at("links").get<std::vector<double>>()};
        } else {
            fail(ErrorKind::validation, "unknown robot type \"" + type + "\"");
        }

        for (const auto& o : doc.value("obstacles", Json::array())) {
            Obstacle ob;
            const auto shape = o.at("shape").get<std::string>();
            if (shape == "disc")
                ob.shape = Disc{o.at("radius").get<double>()};
            else if (shape == "rect")
                ob.shape = Rect{o.at("width").get<double>(), o.at("height").get<double>()};
            else
                fail(ErrorKind::validation, "unknown obstacle shape \"" + shape + "\"");
            ob.nominal_position = point_from(o.at("position"), "obstacle position");
            if (o.contains("std")) ob.position_std = point_from(o.at("std"), "obstacle std");
            s.obstacles.push_back(ob);
        }

        s.start = vector_from(doc.at("start"), "start");
        s.goal = vector_from(doc.at("goal"), "goal");
        s.endgame_radius = doc.at("endgame_radius").get<double>();
        s.max_steps = doc.at("max_steps").get<int>();
        if (doc.contains("step_size")) {
            s.step_size = doc.at("step_size").get<double>();
        } else {
            require(!s.obstacles.empty(), "step_size may only be omitted when obstacles define a length scale");
            double feature = s.obstacles.front().feature_size();
            for (const auto& o : s.obstacles) feature = std::min(feature, o.feature_size());
            s.step_size = feature / 2;
        }
        file.controller = controller_from(doc.value("controller", Json()));
        validate(s);
        return file;
    });
}

Json to_json(const ScenarioFile& file) {
    const Scenario& s = file.scenario;
    Json doc;
    doc["format"] = format_version;
    doc["workspace"] = {{"lo", vec_json(s.workspace.lo)}, {"hi", vec_json(s.workspace.hi)}};
    doc["cspace"] = {{"lo", vec_json(s.cspace.lo)}, {"hi", vec_json(s.cspace.hi)}};
    doc["robot"] = std::visit(overloaded{
                                  [](const DiscSet& d) { return Json{{"type", "discs"}, {"radii", d.radii}}; },
                                  [](const PlanarArm& a) {
                                      return Json{{"type", "arm"}, {"base", vec_json(a.base)}, {"links", a.link_lengths}};
                                  },
                              },
                              s.robot);
    Json obs = Json::array();
    for (const auto& o : s.obstacles) {
        Json j = std::visit(overloaded{
                                [](const Disc& d) { return Json{{"shape", "disc"}, {"radius", d.radius}}; },
                                [](const Rect& r) {
                                    return Json{{"shape", "rect"}, {"width", r.width}, {"height", r.height}};
                                },
                            },
                            o.shape);
        j["position"] = vec_json(o.nominal_position);
        j["std"] = vec_json(o.position_std);
        obs.push_back(j);
    }
    doc["obstacles"] = obs;
    doc["start"] = vec_json(s.start);
    doc["goal"] = vec_json(s.goal);
    doc["endgame_radius"] = s.endgame_radius;
    doc["step_size"] = s.step_size;
    doc["max_steps"] = s.max_steps;
    doc["controller"] = controller_json(file.controller);
    return doc;
}

Json to_json(const Roadmap& roadmap) {
    const auto& p = roadmap.params();
    Json doc;
    doc["format"] = format_version;
    doc["kind"] = "roadmap";
    doc["build"] = {{"n", p.n},          {"k", p.k},       {"trials", p.trials},
                    {"gamma", p.gamma},  {"bound_mode", mode_name(p.mode)},
                    {"seed", p.seed},    {"controller", controller_json(p.controller)}};
    Json ms = Json::array();
    for (int id = 0; id < roadmap.node_count(); ++id) {
        const auto& q = roadmap.milestones()[static_cast<std::size_t>(id)];
        if (q.size() == 0) continue;
        ms.push_back({{"id", id}, {"coords", vec_json(q)}});
    }
    doc["milestones"] = ms;
    Json edges = Json::array();
    for (const auto& e : roadmap.edges()) {
        edges.push_back({{"from", e.from},
                         {"to", e.to},
                         {"T", e.stats.trials},
                         {"T_success", e.stats.successes},
                         {"c_hat", e.stats.c_hat ? Json(*e.stats.c_hat) : Json()},
                         {"gamma", e.stats.gamma},
                         {"p_lower", e.stats.p_lower}});
    }
    doc["edges"] = edges;
    return doc;
}

Roadmap roadmap_from_json(const Json& doc) {
    return guarded("roadmap", [&] {
        check_format(doc, "roadmap");
        require(doc.value("kind", std::string()) == "roadmap", "document is not a roadmap");
        const auto& b = doc.at("build");
        BuildParams p;
        p.n = b.at("n").get<int>();
        p.k = b.at("k").get<int>();
        p.trials = b.at("trials").get<int>();
        p.gamma = b.at("gamma").get<double>();
        p.mode = mode_from(b.at("bound_mode").get<std::string>());
        p.seed = b.at("seed").get<std::uint64_t>();
        p.controller = controller_from(b.value("controller", Json()));
        require(p.n >= 2, "roadmap n must be >= 2");

        std::vector<Configuration> ms(static_cast<std::size_t>(p.n) + 1);
        for (const auto& m : doc.at("milestones")) {
            const int id = m.at("id").get<int>();
            require(id >= 0 && id <= p.n, "milestone id out of range");
            ms[static_cast<std::size_t>(id)] = vector_from(m.at("coords"), "milestone coords");
        }
        for (int id = 1; id < p.n; ++id)
            require(ms[static_cast<std::size_t>(id)].size() > 0, "milestone " + std::to_string(id) + " is missing");

        std::vector<RoadmapEdge> edges;
        for (const auto& e : doc.at("edges")) {
            RoadmapEdge edge;
            edge.from = e.at("from").get<int>();
            edge.to = e.at("to").get<int>();
            const int T = e.at("T").get<int>();
            const int S = e.at("T_success").get<int>();
            const double gamma = e.at("gamma").get<double>();
            require(T >= 1 && S >= 0 && S <= T, "edge trial counts are inconsistent");
            require(gamma > 0.0 && gamma < 1.0, "edge gamma must lie in (0, 1)");
            EdgeStats& st = edge.stats;
            st.trials = T;
            st.successes = S;
            st.p_hat = static_cast<double>(S) / T;
            st.sigma2_hat = bernoulli_variance(T, S);
            st.gamma = gamma;
            st.mode = p.mode;
            st.p_lower = success_lower_bound(T, S, gamma, p.mode);
            if (!e.at("c_hat").is_null()) st.c_hat = e.at("c_hat").get<double>();
            const double stored = e.at("p_lower").get<double>();
            require(std::abs(stored - st.p_lower) <= 1e-12,
                    "edge " + std::to_string(edge.from) + "->" + std::to_string(edge.to) +
                        " p_lower does not match its trial counts");
            require(st.c_hat.has_value() && st.p_lower > 0.0, "stored roadmap edges need successes and p_lower > 0");
            edges.push_back(edge);
        }
        return Roadmap(p, std::move(ms), std::move(edges));
    });
}

Json to_json(const Eigen::MatrixXd& m) {
    Json data = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Json to_json(const Eigen::VectorXd& v) { return vec_json(v); }

Json to_json(const MdpEstimate& est, std::span<const Configuration> milestones) {
    Json doc;
    doc["format"] = format_version;
    doc["kind"] = "mdp_estimate";
    doc["alpha"] = est.alpha;
    doc["states"] = est.states;
    Json ms = Json::array();
    for (const auto& m : milestones) ms.push_back(vec_json(m));
    doc["milestones"] = ms;
    Json actions = Json::array();
    for (const auto& a : est.actions)
        actions.push_back({{"controller", controller_json(a.controller)}, {"neighbor_rank", a.neighbor_rank}});
    doc["actions"] = actions;
    Json P = Json::array(), c = Json::array(), rec = Json::array();
    for (int a = 0; a < est.action_count(); ++a) {
        P.push_back(to_json(est.P_hat[static_cast<std::size_t>(a)]));
        c.push_back(vec_json(est.c_hat[static_cast<std::size_t>(a)]));
        Json per_state = Json::array();
        for (const auto& trials : est.records[static_cast<std::size_t>(a)]) {
            Json ts = Json::array();
            for (const auto& r : trials) ts.push_back(Json::array({r.destination, r.tau, r.discounted_cost}));
            per_state.push_back(ts);
        }
        rec.push_back(per_state);
    }
    doc["P_hat"] = P;
    doc["c_hat"] = c;
    doc["records"] = rec;
    return doc;
}

MdpEstimate estimate_from_json(const Json& doc) {
    return guarded("MDP estimate", [&] {
        check_format(doc, "MDP estimate");
        require(doc.value("kind", std::string()) == "mdp_estimate", "document is not an MDP estimate");
        const double alpha = doc.at("alpha").get<double>();
        const int states = doc.at("states").get<int>();
        std::vector<MdpAction> actions;
        for (const auto& a : doc.value("actions", Json::array()))
            actions.push_back({controller_from(a.at("controller")), a.at("neighbor_rank").get<int>()});
        std::vector<std::vector<std::vector<TrialRecord>>> records;
        for (const auto& per_state : doc.at("records")) {
            std::vector<std::vector<TrialRecord>> rs;
            for (const auto& trials : per_state) {
                std::vector<TrialRecord> ts;
                for (const auto& r : trials) ts.push_back({r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<double>()});
                rs.push_back(std::move(ts));
            }
            records.push_back(std::move(rs));
        }
        // the transition estimates are recomputed from the trial records, which are authoritative
        return estimate_from_records(std::move(records), states, alpha, std::move(actions));
    });
}

Json to_json(const PlannedPath& path) {
    Json j;
    j["path"] = path.node_ids;
    j["cost"] = path.total_cost ? Json(*path.total_cost) : Json();
    j["success_lower_bound"] = path.success_lower_bound;
    return j;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) fail(ErrorKind::io, "error while reading " + path.string());
    return os.str();
}

Json read_json(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::validation, path.string() + " is not valid JSON: " + e.what());
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            fail(ErrorKind::io, "error while writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        fail(ErrorKind::io, "cannot move output into place at " + path.string());
    }
}

ScenarioFile load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_json(path)); }

Roadmap load_roadmap(const std::filesystem::path& path) { return roadmap_from_json(read_json(path)); }

} // namespace rlc::io
