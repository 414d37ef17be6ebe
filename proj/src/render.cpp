#include "lassoplan/render.hpp"

#include <cstdio>
#include <set>
#include <sstream>

namespace lasso {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

std::string render_svg(const Artifact& artifact, const TaskSpec& task, const LatentGraph& graph,
                       const Plan& plan, const ExecTrace& trace) {
    const Maze& m = artifact.maze;
    const double scale = 24.0;
    const double w = m.width() * scale;
    const double h = m.height() * scale;
    auto px = [&](double x) { return num(x * scale); };
    auto py = [&](double y) { return num(h - y * scale); };  // flip: world y grows upward

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\""
       << num(h) << "\" viewBox=\"0 0 " << num(w) << " " << num(h) << "\">\n";
    os << "<rect width=\"" << num(w) << "\" height=\"" << num(h) << "\" fill=\"#ffffff\"/>\n";

    for (int cy = 0; cy < m.rows; ++cy) {
        for (int cx = 0; cx < m.cols; ++cx) {
            if (!m.wall_cell(cx, cy)) continue;
            os << "<rect x=\"" << px(cx * m.cell_size) << "\" y=\""
               << py((cy + 1) * m.cell_size) << "\" width=\"" << num(m.cell_size * scale)
               << "\" height=\"" << num(m.cell_size * scale) << "\" fill=\"#444444\"/>\n";
        }
    }

    for (std::size_t i = 0; i < task.regions.size(); ++i) {
        const Region& r = task.regions[i];
        const char* fill = "#9ecae1";
        if (r.shape == RegionShape::Circle) {
            os << "<circle cx=\"" << px(r.a.x) << "\" cy=\"" << py(r.a.y) << "\" r=\""
               << num(r.radius * scale) << "\" fill=\"" << fill
               << "\" fill-opacity=\"0.6\" stroke=\"#3182bd\"/>\n";
        } else {
            os << "<rect x=\"" << px(r.a.x) << "\" y=\"" << py(r.b.y) << "\" width=\""
               << num((r.b.x - r.a.x) * scale) << "\" height=\"" << num((r.b.y - r.a.y) * scale)
               << "\" fill=\"" << fill << "\" fill-opacity=\"0.6\" stroke=\"#3182bd\"/>\n";
        }
        const Vec2 c = r.shape == RegionShape::Circle
                           ? r.a
                           : Vec2{0.5 * (r.a.x + r.b.x), 0.5 * (r.a.y + r.b.y)};
        os << "<text x=\"" << px(c.x) << "\" y=\"" << py(c.y)
           << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#08306b\">"
           << task.label_names[i] << "</text>\n";
    }

    // anchor markers for the plan's anchor nodes
    std::set<int> plan_nodes(plan.prefix.begin(), plan.prefix.end());
    plan_nodes.insert(plan.suffix.begin(), plan.suffix.end());
    for (int v : plan_nodes) {
        if (v < 0 || v >= graph.num_nodes() || !graph.is_anchor(v)) continue;
        const Vec2 p = graph.anchor[static_cast<std::size_t>(v)]->source;
        os << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y)
           << "\" r=\"4\" fill=\"#31a354\" stroke=\"#006d2c\"/>\n";
    }

    // executed trajectory, split at the prefix/suffix boundary
    auto polyline = [&](std::size_t from, std::size_t to, const char* color) {
        if (to <= from) return;
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = from; i < to; ++i) {
            if (i > from) os << " ";
            os << px(trace.states[i].x) << "," << py(trace.states[i].y);
        }
        os << "\"/>\n";
    };
    const std::size_t n = trace.states.size();
    const std::size_t split = trace.prefix_end >= 0
                                  ? std::min(n, static_cast<std::size_t>(trace.prefix_end) + 1)
                                  : n;
    polyline(0, split, "#1f77b4");
    if (!plan.suffix.empty() && split < n) polyline(split, n, "#d62728");

    if (!trace.states.empty()) {
        os << "<circle cx=\"" << px(trace.states[0].x) << "\" cy=\"" << py(trace.states[0].y)
           << "\" r=\"5\" fill=\"#e31a1c\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace lasso
