#pragma once

#include "rlc/roadmap.hpp"

#include <string>
#include <vector>

namespace rlc {

/// Renders the workspace: obstacles with translucent 2-sigma halos, optional
/// roadmap milestones, and one <path> element per configuration-space path
/// (the workspace trace of every robot disc, or of the arm tip; arms also get
/// their link chain drawn at each waypoint).
std::string render_svg(const Scenario& scenario, const Roadmap* roadmap,
                       const std::vector<std::vector<Configuration>>& paths);

} // namespace rlc
