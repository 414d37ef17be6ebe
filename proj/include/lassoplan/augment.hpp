#pragma once

#include "lassoplan/graph.hpp"
#include "lassoplan/world.hpp"

namespace lasso {

// ---------------------------------------------------------------------------
// Task-specific semantic augmentation: probabilistic soft labels on cluster
// nodes plus certified anchor nodes per atomic proposition. All functions
// return a new graph value; the base graph is left untouched.

struct AugmentParams {
    int anchors_per_label = 5;  // N_s
    bool retrieve_from_dataset = false;
    bool proximity_weighting = false;  // kernel-weighted soft labels
    std::uint64_t seed = 0;
};

// P(l | v): fraction of a node's raw states whose projection lies in R_l
// (anchor nodes count their single source state). With proximity weighting,
// members are weighted by a Gaussian kernel on latent distance to the node
// center (bandwidth h_td / 2).
void compute_soft_labels(LatentGraph& g, const Embedding& e, const std::vector<Region>& regions,
                         int num_labels, bool proximity_weighting = false);

// Inserts anchors_per_label certified nodes per labeled region (sampled
// uniformly inside the region, or retrieved from the dataset when requested
// and possible), wires them with the standard distance rule, force-connects
// isolated anchors to their nearest non-anchor node (edges flagged fallback),
// then recomputes soft labels over all nodes.
LatentGraph make_anchors(const LatentGraph& g, const Maze& maze, const Embedding& e,
                         const std::vector<Region>& regions, int num_labels,
                         const AugmentParams& params);

// Safe iff P(l | node) < tau_soft for every forbidden l, and an anchor's own
// label is not forbidden.
bool is_safe(const LatentGraph& g, int node, const LabelSet& forbidden, double tau_soft);

}  // namespace lasso
