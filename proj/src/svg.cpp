#include "rlc/svg.hpp"

#include <array>
#include <cstdio>
#include <sstream>

namespace rlc {

namespace {

constexpr double canvas_width = 640.0;
constexpr std::array<const char*, 6> palette{"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

struct Canvas {
    Eigen::Vector2d lo, hi;
    double scale;

    double x(double wx) const { return (wx - lo.x()) * scale; }
    double y(double wy) const { return (hi.y() - wy) * scale; }
    double len(double l) const { return l * scale; }
};

/// Workspace points of every body element that gets a trace: disc centers or the arm tip.
std::vector<Eigen::Vector2d> trace_points(const Scenario& scn, const Configuration& q) {
    std::vector<Eigen::Vector2d> pts;
    if (const auto* discs = std::get_if<DiscSet>(&scn.robot)) {
        for (std::size_t d = 0; d < discs->radii.size(); ++d)
            pts.emplace_back(q[static_cast<Eigen::Index>(2 * d)], q[static_cast<Eigen::Index>(2 * d + 1)]);
    } else {
        pts.push_back(arm_joints(std::get<PlanarArm>(scn.robot), q).back());
    }
    return pts;
}

} // namespace

std::string render_svg(const Scenario& scn, const Roadmap* roadmap, const std::vector<std::vector<Configuration>>& paths) {
    const Canvas cv{scn.workspace.lo, scn.workspace.hi,
                    canvas_width / (scn.workspace.hi[0] - scn.workspace.lo[0])};
    const double height = cv.len(scn.workspace.hi[1] - scn.workspace.lo[1]);

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(canvas_width) << "\" height=\"" << num(height)
       << "\" viewBox=\"0 0 " << num(canvas_width) << ' ' << num(height) << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << num(canvas_width) << "\" height=\"" << num(height)
       << "\" fill=\"white\" stroke=\"black\"/>\n";

    os << "<g class=\"obstacles\">\n";
    for (const auto& o : scn.obstacles) {
        const Eigen::Vector2d c = o.nominal_position;
        const Eigen::Vector2d halo = 2.0 * o.position_std;
        if (const auto* d = std::get_if<Disc>(&o.shape)) {
            if (halo.maxCoeff() > 0)
                os << "<ellipse cx=\"" << num(cv.x(c.x())) << "\" cy=\"" << num(cv.y(c.y())) << "\" rx=\""
                   << num(cv.len(d->radius + halo.x())) << "\" ry=\"" << num(cv.len(d->radius + halo.y()))
                   << "\" fill=\"gray\" fill-opacity=\"0.3\"/>\n";
            os << "<circle cx=\"" << num(cv.x(c.x())) << "\" cy=\"" << num(cv.y(c.y())) << "\" r=\""
               << num(cv.len(d->radius)) << "\" fill=\"dimgray\"/>\n";
        } else {
            const auto& r = std::get<Rect>(o.shape);
            auto rect = [&](double w, double h, const char* style) {
                os << "<rect x=\"" << num(cv.x(c.x() - w / 2)) << "\" y=\"" << num(cv.y(c.y() + h / 2))
                   << "\" width=\"" << num(cv.len(w)) << "\" height=\"" << num(cv.len(h)) << "\" " << style
                   << "/>\n";
            };
            if (halo.maxCoeff() > 0)
                rect(r.width + 2 * halo.x(), r.height + 2 * halo.y(), "fill=\"gray\" fill-opacity=\"0.3\"");
            rect(r.width, r.height, "fill=\"dimgray\"");
        }
    }
    os << "</g>\n";

    if (roadmap) {
        os << "<g class=\"milestones\" fill=\"steelblue\">\n";
        for (const auto& q : roadmap->milestones()) {
            if (q.size() != scn.dof()) continue;
            for (const auto& p : trace_points(scn, q))
                os << "<circle cx=\"" << num(cv.x(p.x())) << "\" cy=\"" << num(cv.y(p.y())) << "\" r=\"1.5\"/>\n";
        }
        os << "</g>\n";
    }

    const auto* arm = std::get_if<PlanarArm>(&scn.robot);
    for (std::size_t k = 0; k < paths.size(); ++k) {
        const auto& path = paths[k];
        const char* color = palette[k % palette.size()];
        if (arm) {
            os << "<g class=\"arm-poses\" stroke=\"" << color << "\" stroke-opacity=\"0.35\" fill=\"none\">\n";
            for (const auto& q : path) {
                os << "<polyline points=\"";
                for (const auto& p : arm_joints(*arm, q)) os << num(cv.x(p.x())) << ',' << num(cv.y(p.y())) << ' ';
                os << "\"/>\n";
            }
            os << "</g>\n";
        }
        std::ostringstream d;
        if (!path.empty()) {
            const auto bodies = trace_points(scn, path.front()).size();
            for (std::size_t b = 0; b < bodies; ++b) {
                for (std::size_t w = 0; w < path.size(); ++w) {
                    const auto p = trace_points(scn, path[w])[b];
                    d << (w == 0 ? (b == 0 ? "M" : " M") : " L") << num(cv.x(p.x())) << ' ' << num(cv.y(p.y()));
                }
            }
        }
        os << "<path class=\"planned-path\" d=\"" << d.str() << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"2\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace rlc
