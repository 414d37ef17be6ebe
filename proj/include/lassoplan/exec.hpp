#pragma once

#include <map>
#include <optional>

#include "lassoplan/plan.hpp"
#include "lassoplan/world.hpp"

namespace lasso {

// ---------------------------------------------------------------------------
// Plan execution: monotone waypoint tracking in latent space with strict
// anchor verification, prefix -> suffix handover and cyclic suffix laps.

struct ExecConfig {
    double h_td = 8.0;
    double eps_anc = 4.0;            // latent units; default 0.5 * h_td
    int max_steps = 6000;
    int suffix_laps = 1;
    double fallback_tolerance = 2.0;  // tracking-threshold multiplier on fallback edges
    int patience = 50;                // steps without progress before giving up
    double min_progress = 0.08;       // latent units; default 0.01 * h_td
};

enum class ExecOutcome { Success, BudgetExhausted, Stuck };

struct Milestone {
    int node;
    int step;
    bool anchor;
};

struct ExecTrace {
    std::vector<Vec2> states;        // states[t] after t steps; states[0] = s0
    std::vector<LabelSet> labels;    // per state
    std::vector<int> target_index;   // unrolled plan index targeted at each state
    std::vector<Milestone> milestones;
    int prefix_end = -1;             // step at which the prefix completed
    std::vector<int> lap_boundaries; // steps at which suffix laps closed
    ExecOutcome outcome = ExecOutcome::BudgetExhausted;

    int length() const { return static_cast<int>(states.size()) - 1; }  // physical steps
};

// Kinematic controller: straight pursuit clipped to v_max; when the ray is
// wall-blocked, descend a grid-BFS distance field toward the target. The
// cache keyed by target cell persists across steps of one episode.
class Controller {
public:
    explicit Controller(const Maze& m) : maze_(m) {}
    Vec2 act(const Vec2& s, const Vec2& target) const;

private:
    const std::vector<int>& field_for(int cx, int cy) const;
    const Maze& maze_;
    mutable std::map<std::pair<int, int>, std::vector<int>> fields_;
};

// raw-space tracking point of a node: anchor source state, or the centroid of
// the cluster's members (nearest member when the centroid is inside a wall)
Vec2 node_target_point(const LatentGraph& g, const Embedding& e, const Maze& maze, int v);

ExecTrace track(const Maze& maze, const std::vector<Region>& regions, const LatentGraph& g,
                const Embedding& e, const Plan& plan, const Vec2& s0, const ExecConfig& cfg);

// Builds the lasso word of the executed trace (labels up to prefix_end, then
// the first suffix lap as the period) and checks automaton acceptance.
// Non-success outcomes are failures by definition.
bool check_success(const ExecTrace& trace, const Nba& nba, const Plan& plan);

}  // namespace lasso
