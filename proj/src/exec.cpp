#include "lassoplan/exec.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace lasso {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Controller

const std::vector<int>& Controller::field_for(int cx, int cy) const {
    const auto key = std::make_pair(cx, cy);
    auto it = fields_.find(key);
    if (it != fields_.end()) return it->second;
    std::vector<int> field(static_cast<std::size_t>(maze_.rows * maze_.cols), -1);
    std::deque<std::pair<int, int>> queue;
    auto id = [&](int x, int y) { return y * maze_.cols + x; };
    if (!maze_.wall_cell(cx, cy)) {
        field[static_cast<std::size_t>(id(cx, cy))] = 0;
        queue.emplace_back(cx, cy);
    }
    static const int dx[4] = {1, -1, 0, 0};
    static const int dy[4] = {0, 0, 1, -1};
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        for (int k = 0; k < 4; ++k) {
            const int nx = x + dx[k], ny = y + dy[k];
            if (maze_.wall_cell(nx, ny)) continue;
            if (field[static_cast<std::size_t>(id(nx, ny))] >= 0) continue;
            field[static_cast<std::size_t>(id(nx, ny))] =
                field[static_cast<std::size_t>(id(x, y))] + 1;
            queue.emplace_back(nx, ny);
        }
    }
    return fields_.emplace(key, std::move(field)).first->second;
}

Vec2 Controller::act(const Vec2& s, const Vec2& target) const {
    const Vec2 delta = target - s;
    const double n = delta.norm();
    if (n == 0.0) return {0.0, 0.0};
    if (segment_free(maze_, s, target))
        return n <= maze_.v_max ? delta : delta * (maze_.v_max / n);

    const double cs = maze_.cell_size;
    const int tx = static_cast<int>(std::floor(target.x / cs));
    const int ty = static_cast<int>(std::floor(target.y / cs));
    const auto& field = field_for(tx, ty);
    const int sx = static_cast<int>(std::floor(s.x / cs));
    const int sy = static_cast<int>(std::floor(s.y / cs));
    auto value = [&](int x, int y) {
        if (maze_.wall_cell(x, y)) return -1;
        return field[static_cast<std::size_t>(y * maze_.cols + x)];
    };
    const int here = value(sx, sy);
    if (here < 0) return {0.0, 0.0};  // unreachable target; caller will stall out
    static const int dx[4] = {1, -1, 0, 0};
    static const int dy[4] = {0, 0, 1, -1};
    int best_x = sx, best_y = sy, best_v = here;
    for (int k = 0; k < 4; ++k) {
        const int nx = sx + dx[k], ny = sy + dy[k];
        const int v = value(nx, ny);
        if (v >= 0 && v < best_v) {
            best_v = v;
            best_x = nx;
            best_y = ny;
        }
    }
    const Vec2 waypoint =
        best_v == 0 ? target : maze_.cell_center(best_x, best_y);
    const Vec2 d2 = waypoint - s;
    const double n2 = d2.norm();
    if (n2 == 0.0) return {0.0, 0.0};
    return n2 <= maze_.v_max ? d2 : d2 * (maze_.v_max / n2);
}

// ---------------------------------------------------------------------------
// Target points

Vec2 node_target_point(const LatentGraph& g, const Embedding& e, const Maze& maze, int v) {
    if (g.is_anchor(v)) return g.anchor[static_cast<std::size_t>(v)]->source;
    const auto& members = g.node2raw[static_cast<std::size_t>(v)];
    Vec2 centroid{0.0, 0.0};
    for (int s : members) centroid = centroid + e.states[static_cast<std::size_t>(s)];
    centroid = centroid * (1.0 / static_cast<double>(members.size()));
    if (maze.free_at(centroid)) return centroid;
    Vec2 best = e.states[static_cast<std::size_t>(members.front())];
    double best_d = kInf;
    for (int s : members) {
        const double d = distance(e.states[static_cast<std::size_t>(s)], centroid);
        if (d < best_d) {
            best_d = d;
            best = e.states[static_cast<std::size_t>(s)];
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Tracking

namespace {

struct Waypoint {
    int node;
    bool strict;        // anchors and segment boundaries may not be skipped
    bool is_anchor;
    LabelId anchor_label;
    bool prefix_final;  // completing it ends the prefix
    bool lap_final;     // completing it closes a suffix lap
    double reach_tol;   // forward-scan threshold
};

std::vector<Waypoint> unroll(const LatentGraph& g, const Plan& plan, const ExecConfig& cfg) {
    std::vector<Waypoint> out;
    auto push = [&](int node, int prev) {
        Waypoint w;
        w.node = node;
        w.is_anchor = g.is_anchor(node);
        w.anchor_label = w.is_anchor ? g.anchor[static_cast<std::size_t>(node)]->label : -1;
        w.strict = w.is_anchor;
        w.prefix_final = false;
        w.lap_final = false;
        w.reach_tol = cfg.h_td;
        if (prev >= 0 && prev != node) {
            for (const auto& e : g.edges)
                if (e.from == prev && e.to == node && e.fallback) {
                    w.reach_tol = cfg.h_td * cfg.fallback_tolerance;
                    break;
                }
        }
        out.push_back(w);
    };
    int prev = -1;
    for (int v : plan.prefix) {
        push(v, prev);
        prev = v;
    }
    out.back().strict = true;
    out.back().prefix_final = true;
    if (!plan.suffix.empty()) {
        for (int lap = 0; lap < cfg.suffix_laps; ++lap) {
            for (std::size_t i = 1; i < plan.suffix.size(); ++i) {
                push(plan.suffix[i], prev);
                prev = plan.suffix[i];
            }
            out.back().strict = true;
            out.back().lap_final = true;
        }
    }
    return out;
}

}  // namespace

ExecTrace track(const Maze& maze, const std::vector<Region>& regions, const LatentGraph& g,
                const Embedding& e, const Plan& plan, const Vec2& s0, const ExecConfig& cfg) {
    if (cfg.eps_anc <= 0.0 || cfg.max_steps <= 0)
        throw std::invalid_argument("track: eps_anc and max_steps must be positive");

    const auto waypoints = unroll(g, plan, cfg);
    const int n_wp = static_cast<int>(waypoints.size());
    std::vector<char> verified(static_cast<std::size_t>(n_wp), 0);

    std::vector<Vec2> targets;  // raw tracking point per unrolled index
    targets.reserve(waypoints.size());
    for (const auto& w : waypoints) targets.push_back(node_target_point(g, e, maze, w.node));

    const Controller controller(maze);
    ExecTrace trace;
    Vec2 s = s0;
    LatentVec h = e.embed(s);
    trace.states.push_back(s);
    trace.labels.push_back(labels_at(regions, s));

    int k = 0;
    int stall = 0;
    int stall_k = -1;
    double stall_best = kInf;
    int laps_done = 0;

    auto coord_dist = [&](int idx) {
        return latent_distance(h, g.coords[static_cast<std::size_t>(waypoints
                                                                        [static_cast<std::size_t>(
                                                                            idx)]
                                                                            .node)]);
    };

    for (int t = 0;; ++t) {
        // forward scan: advance k to the furthest in-reach waypoint, never
        // past an unverified strict one; verify at most one strict waypoint
        // per step so milestone steps stay strictly increasing
        bool verified_this_step = false;
        while (true) {
            int limit = n_wp - 1;
            for (int j = k; j < n_wp; ++j) {
                if (waypoints[static_cast<std::size_t>(j)].strict &&
                    !verified[static_cast<std::size_t>(j)]) {
                    limit = j;
                    break;
                }
            }
            int best = k;
            for (int j = k; j <= limit; ++j)
                if (coord_dist(j) <= waypoints[static_cast<std::size_t>(j)].reach_tol) best = j;
            k = std::max(k, best);

            const auto& wp = waypoints[static_cast<std::size_t>(limit)];
            if (k == limit && wp.strict && !verified[static_cast<std::size_t>(limit)] &&
                !verified_this_step) {
                const bool close_enough = coord_dist(limit) < cfg.eps_anc;
                const bool label_ok =
                    !wp.is_anchor ||
                    trace.labels.back() == LabelSet::single(wp.anchor_label);
                if (close_enough && label_ok) {
                    verified[static_cast<std::size_t>(limit)] = 1;
                    verified_this_step = true;
                    trace.milestones.push_back({wp.node, t, wp.is_anchor});
                    if (wp.prefix_final) trace.prefix_end = t;
                    if (wp.lap_final) {
                        trace.lap_boundaries.push_back(t);
                        ++laps_done;
                    }
                    continue;  // scan may advance past the verified waypoint
                }
            }
            break;
        }
        trace.target_index.push_back(k);

        const bool plan_done =
            verified[static_cast<std::size_t>(n_wp - 1)] &&
            (plan.suffix.empty() ? trace.prefix_end >= 0 : laps_done >= cfg.suffix_laps);
        if (plan_done) {
            trace.outcome = ExecOutcome::Success;
            break;
        }
        if (t >= cfg.max_steps) {
            trace.outcome = ExecOutcome::BudgetExhausted;
            break;
        }

        // stall detection: no index advance and no latent approach
        if (k != stall_k) {
            stall_k = k;
            stall = 0;
            stall_best = coord_dist(k);
        } else {
            const double d = coord_dist(k);
            if (d < stall_best - cfg.min_progress) {
                stall_best = d;
                stall = 0;
            } else {
                ++stall;
            }
        }
        if (stall >= cfg.patience) {
            trace.outcome = ExecOutcome::Stuck;
            break;
        }

        const Vec2 action = controller.act(s, targets[static_cast<std::size_t>(k)]);
        s = step(maze, s, action);
        h = e.embed(s);
        trace.states.push_back(s);
        trace.labels.push_back(labels_at(regions, s));
    }
    return trace;
}

bool check_success(const ExecTrace& trace, const Nba& nba, const Plan& plan) {
    if (trace.outcome != ExecOutcome::Success) return false;
    if (trace.prefix_end < 0) return false;
    LassoWord word;
    for (int i = 0; i <= trace.prefix_end; ++i)
        word.prefix.push_back(trace.labels[static_cast<std::size_t>(i)]);
    if (plan.suffix.empty() || trace.lap_boundaries.empty()) {
        word.period.push_back(trace.labels.back());
    } else {
        for (int i = trace.prefix_end + 1; i <= trace.lap_boundaries.front(); ++i)
            word.period.push_back(trace.labels[static_cast<std::size_t>(i)]);
    }
    if (word.period.empty()) word.period.push_back(trace.labels.back());
    return accepts_lasso(nba, word);
}

}  // namespace lasso
