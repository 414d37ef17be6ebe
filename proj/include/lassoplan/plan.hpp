#pragma once

#include <optional>
#include <vector>

#include "lassoplan/augment.hpp"
#include "lassoplan/buchi.hpp"
#include "lassoplan/graph.hpp"

namespace lasso {

// ---------------------------------------------------------------------------
// Implicit product search over (latent node, automaton state). A product move
// either traverses a graph edge (consuming the letter of the node entered) or
// switches automaton state in place at zero cost (consuming the current
// node's letter again). The initial automaton step consumes the start node's
// letter, so induced words line up with executed label sequences. A node's
// letter is its anchor label for anchors, empty otherwise.

struct ProductState {
    int v;
    int q;
    bool operator==(const ProductState& o) const { return v == o.v && q == o.q; }
};

struct PlanParams {
    double lambda = 0.5;
    int top_k = 8;
    double tau_soft = 0.5;
};

struct Plan {
    std::vector<int> prefix;  // node ids, first entry is v0
    std::vector<int> suffix;  // empty (self-loop at prefix end) or [u, ..., u]
    double cost_pre = 0.0;
    double cost_suf = 0.0;
    double lambda = 0.5;
    double J = 0.0;
    int q_star = -1;
};

LabelSet node_letter(const LatentGraph& g, int v);

// the word an exact execution of the plan would produce
LassoWord induced_lasso(const LatentGraph& g, const Plan& plan);

// guard satisfaction at a node: a required label demands an anchor carrying
// it; forbidden labels are checked against soft labels (and anchor labels)
bool node_satisfies_guard(const LatentGraph& g, int v, const Guard& guard, double tau_soft);

// single product transition feasibility (graph move or zero-cost dwell)
bool feasible(const LatentGraph& g, const Nba& nba, const ProductState& from,
              const ProductState& to, double tau_soft);

struct PrefixCandidate {
    std::vector<int> nodes;  // starts at v0; repeats mark zero-cost dwells
    double cost = 0.0;
    int v_end = -1;
    int q_end = -1;
};

// Up to k cheapest accepting prefix paths with distinct accepting endpoints,
// nondecreasing cost. A* with an admissible anchor-distance heuristic,
// verified against explicit-product uniform-cost search in the tests.
std::vector<PrefixCandidate> prefix_search(const LatentGraph& g, const Nba& nba, int v0, int k,
                                           double tau_soft);

struct SuffixResult {
    std::vector<int> nodes;  // empty, or begins and ends at the endpoint node
    double cost = 0.0;
};

// Cheapest cycle through the accepting endpoint: a feasible self-transition
// is a zero-cost cycle; otherwise a product return path to (u', q*) plus a
// latent-only closure u' -> u under the positive-free self-loop constraints
// of q* (without such a self-loop the product path must return to u itself).
std::optional<SuffixResult> suffix_search(const LatentGraph& g, const Nba& nba, int u, int q_star,
                                          double tau_soft);

// Joint product optimization: best J = lambda*cost_pre + (1-lambda)*cost_suf
// over the top-k prefix candidates that admit a suffix. Ties prefer smaller
// cost_pre, then lexicographically smaller node sequences.
Plan synthesize(const LatentGraph& g, const Nba& nba, int v0, const PlanParams& params);

// Logic-first baseline: minimum-hop accepting path and cycle on the automaton
// alone, each hop then realized greedily by the shortest latent path to the
// nearest satisfying node.
Plan decoupled_synthesize(const LatentGraph& g, const Nba& nba, int v0,
                          const PlanParams& params);

}  // namespace lasso
