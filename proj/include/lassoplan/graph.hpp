#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lassoplan/common.hpp"
#include "lassoplan/embed.hpp"

namespace lasso {

// ---------------------------------------------------------------------------
// Clustered latent reachability graph. Node ids are dense indices; cluster
// nodes keep the global indices of their raw member states, anchor nodes
// (added during augmentation) carry a single certified source state instead.

struct GraphEdge {
    int from;
    int to;
    double weight;
    bool fallback = false;  // forced connection for an otherwise isolated anchor
};

struct AnchorMeta {
    LabelId label = -1;
    Vec2 source;  // raw state certified to satisfy the label
};

struct LatentGraph {
    double h_td = 8.0;
    std::vector<LatentVec> coords;             // per node
    std::vector<std::vector<int>> node2raw;    // raw-state indices; empty for anchors
    std::vector<GraphEdge> edges;
    std::vector<std::optional<AnchorMeta>> anchor;  // per node
    std::vector<std::vector<double>> soft_labels;   // per node, per label; may be empty

    int num_nodes() const { return static_cast<int>(coords.size()); }
    bool is_anchor(int v) const { return anchor[static_cast<std::size_t>(v)].has_value(); }

    double soft_label(int v, LabelId l) const {
        const auto& row = soft_labels[static_cast<std::size_t>(v)];
        return static_cast<std::size_t>(l) < row.size() ? row[static_cast<std::size_t>(l)] : 0.0;
    }

    std::vector<std::vector<int>> adjacency() const;  // edge indices by source

    int nearest_node(const LatentVec& h) const;  // ties to the smaller id
};

// Greedy sequential clustering in dataset order with assignment radius
// h_td / 2, then one refinement pass (centroid update + single reassignment);
// clusters left empty by the reassignment are dropped.
LatentGraph cluster(const std::vector<int>& retained_states, const Embedding& e, double h_td);

struct EdgeParams {
    bool support_filter = true;  // require a dataset fragment to cross the edge
};

// Adds (u, v) and (v, u) whenever the latent distance is <= h_td (closed
// threshold). With the support filter on, a directed edge survives only if
// some fragment passes from a member state of u to a member state of v
// within h_td dataset steps.
void build_edges(LatentGraph& g, const Dataset& dataset, const EdgeParams& params = {});

// Admits intermediate nodes on a path; empty std::function admits everything.
using NodeFilter = std::function<bool(int)>;

struct PathResult {
    std::vector<int> nodes;
    double cost = 0.0;
};

// Uniform-cost search over admitted intermediate nodes (endpoints always
// admitted); nullopt when unreachable.
std::optional<PathResult> shortest_path(const LatentGraph& g, int from, int to,
                                        const NodeFilter& admit = {});

// distances[w] = cheapest cost of a path w -> ... -> target where every node
// entered along the way (including target, excluding w itself) is admitted;
// infinity when unreachable
std::vector<double> closure_distances(const LatentGraph& g, int target, const NodeFilter& admit);

}  // namespace lasso
