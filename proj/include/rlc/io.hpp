#pragma once

#include "rlc/mdp.hpp"
#include "rlc/pathing.hpp"
#include "rlc/roadmap.hpp"
#include "rlc/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace rlc::io {

using Json = nlohmann::ordered_json;

/// Current version of every file format written here.
constexpr int format_version = 1;

/// Scenario documents carry the local controller alongside the world.
struct ScenarioFile {
    Scenario scenario;
    ControllerSpec controller;
};

ScenarioFile scenario_from_json(const Json& doc);
Json to_json(const ScenarioFile& file);

Json to_json(const Roadmap& roadmap);
Roadmap roadmap_from_json(const Json& doc);

Json to_json(const MdpEstimate& estimate, std::span<const Configuration> milestones);
MdpEstimate estimate_from_json(const Json& doc);

Json to_json(const PlannedPath& path);
Json to_json(const Eigen::MatrixXd& m);
Json to_json(const Eigen::VectorXd& v);

std::string read_file(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

ScenarioFile load_scenario(const std::filesystem::path& path);
Roadmap load_roadmap(const std::filesystem::path& path);

} // namespace rlc::io
