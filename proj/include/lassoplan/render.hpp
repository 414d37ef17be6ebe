#pragma once

#include <string>

#include "lassoplan/exec.hpp"
#include "lassoplan/serialize.hpp"

namespace lasso {

// Deterministic SVG figure: maze walls, labeled regions, the start marker,
// the executed prefix polyline (blue) and suffix polyline (red), and markers
// on the anchor nodes the plan visits.
std::string render_svg(const Artifact& artifact, const TaskSpec& task, const LatentGraph& graph,
                       const Plan& plan, const ExecTrace& trace);

}  // namespace lasso
