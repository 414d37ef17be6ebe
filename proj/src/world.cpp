#include "lassoplan/world.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

namespace lasso {

std::vector<std::pair<int, int>> Maze::free_cells() const {
    std::vector<std::pair<int, int>> out;
    for (int cy = 0; cy < rows; ++cy)
        for (int cx = 0; cx < cols; ++cx)
            if (!wall_cell(cx, cy)) out.emplace_back(cx, cy);
    return out;
}

// ---------------------------------------------------------------------------
// Maze generation: rooms are 2x2 blocks of free cells on a coarse lattice
// with 1-cell walls between them; passages open 2-cell gaps. A braiding pass
// opens a fraction of the remaining interior walls so the maze has cycles.

namespace {

struct CoarseDims {
    int w;
    int h;
};

CoarseDims preset_dims(MazePreset p) {
    switch (p) {
        case MazePreset::Medium: return {5, 5};
        case MazePreset::Large: return {8, 8};
        case MazePreset::Giant: return {13, 13};
    }
    return {5, 5};
}

}  // namespace

Maze gen_maze(MazePreset preset, std::uint64_t seed) {
    const auto [w, h] = preset_dims(preset);
    Maze m;
    m.cols = 3 * w + 1;
    m.rows = 3 * h + 1;
    m.cell_size = 1.0;
    m.v_max = 0.25;
    m.walls.assign(static_cast<std::size_t>(m.rows * m.cols), 1);

    auto carve_cell = [&](int cx, int cy) {
        m.walls[static_cast<std::size_t>(cy * m.cols + cx)] = 0;
    };
    auto carve_room = [&](int i, int j) {
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) carve_cell(3 * i + 1 + dx, 3 * j + 1 + dy);
    };
    // open the wall between room (i,j) and the room one step in direction d
    auto open_passage = [&](int i, int j, int dir) {
        if (dir == 0) {  // +x
            carve_cell(3 * i + 3, 3 * j + 1);
            carve_cell(3 * i + 3, 3 * j + 2);
        } else {  // +y
            carve_cell(3 * i + 1, 3 * j + 3);
            carve_cell(3 * i + 2, 3 * j + 3);
        }
    };

    Rng rng(seed);
    std::vector<char> visited(static_cast<std::size_t>(w * h), 0);
    std::vector<std::pair<int, int>> stack;
    stack.emplace_back(0, 0);
    visited[0] = 1;
    carve_room(0, 0);
    while (!stack.empty()) {
        auto [i, j] = stack.back();
        struct Move {
            int di, dj, dir;
        };
        static const Move moves[4] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 1}, {0, -1, 1}};
        std::vector<Move> options;
        for (const auto& mv : moves) {
            const int ni = i + mv.di, nj = j + mv.dj;
            if (ni < 0 || nj < 0 || ni >= w || nj >= h) continue;
            if (!visited[static_cast<std::size_t>(nj * w + ni)]) options.push_back(mv);
        }
        if (options.empty()) {
            stack.pop_back();
            continue;
        }
        const auto mv = options[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(options.size()) - 1))];
        const int ni = i + mv.di, nj = j + mv.dj;
        open_passage(std::min(i, ni), std::min(j, nj), mv.dir);
        visited[static_cast<std::size_t>(nj * w + ni)] = 1;
        carve_room(ni, nj);
        stack.emplace_back(ni, nj);
    }

    // braid: open some still-closed interior walls to create loops
    const double braid_p = 0.15;
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            if (i + 1 < w && m.wall_cell(3 * i + 3, 3 * j + 1) && rng.chance(braid_p))
                open_passage(i, j, 0);
            if (j + 1 < h && m.wall_cell(3 * i + 1, 3 * j + 3) && rng.chance(braid_p))
                open_passage(i, j, 1);
        }
    }
    return m;
}

std::string maze_to_text(const Maze& m) {
    std::ostringstream os;
    os << m.cell_size << " " << m.v_max << "\n";
    for (int cy = m.rows - 1; cy >= 0; --cy) {
        for (int cx = 0; cx < m.cols; ++cx) os << (m.wall_cell(cx, cy) ? '#' : '.');
        os << "\n";
    }
    return os.str();
}

Maze maze_from_text(const std::string& text) {
    std::istringstream is(text);
    Maze m;
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("maze file: missing header");
    std::istringstream hs(header);
    if (!(hs >> m.cell_size >> m.v_max))
        throw std::runtime_error("maze file: header must be `cell_size v_max`");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        lines.push_back(line);
    }
    if (lines.empty()) throw std::runtime_error("maze file: no grid rows");
    m.rows = static_cast<int>(lines.size());
    m.cols = static_cast<int>(lines[0].size());
    m.walls.assign(static_cast<std::size_t>(m.rows * m.cols), 1);
    for (int r = 0; r < m.rows; ++r) {
        const std::string& row = lines[static_cast<std::size_t>(r)];
        if (static_cast<int>(row.size()) != m.cols)
            throw std::runtime_error("maze file: ragged grid row");
        const int cy = m.rows - 1 - r;  // first file row is the top
        for (int cx = 0; cx < m.cols; ++cx) {
            const char c = row[static_cast<std::size_t>(cx)];
            if (c != '#' && c != '.') throw std::runtime_error("maze file: bad cell character");
            m.walls[static_cast<std::size_t>(cy * m.cols + cx)] = c == '#' ? 1 : 0;
        }
    }
    bool any_free = false;
    for (char wcell : m.walls) any_free = any_free || !wcell;
    if (!any_free) throw std::runtime_error("maze file: no free cell");
    return m;
}

// ---------------------------------------------------------------------------
// Collision: grid voxel traversal along the segment. Crossing exactly through
// a lattice corner is blocked unless the diagonal cell and both orthogonal
// neighbours are free.

double segment_free_until(const Maze& m, const Vec2& a, const Vec2& b) {
    if (!m.free_at(a)) return 0.0;
    const Vec2 d = b - a;
    if (d.x == 0.0 && d.y == 0.0) return 1.0;
    const double cs = m.cell_size;
    int cx = static_cast<int>(std::floor(a.x / cs));
    int cy = static_cast<int>(std::floor(a.y / cs));
    const int sx = d.x > 0 ? 1 : (d.x < 0 ? -1 : 0);
    const int sy = d.y > 0 ? 1 : (d.y < 0 ? -1 : 0);
    const double inf = std::numeric_limits<double>::infinity();
    double t_max_x = inf, t_delta_x = inf, t_max_y = inf, t_delta_y = inf;
    if (sx != 0) {
        const double edge = (cx + (sx > 0 ? 1 : 0)) * cs;
        t_max_x = (edge - a.x) / d.x;
        t_delta_x = cs / std::abs(d.x);
    }
    if (sy != 0) {
        const double edge = (cy + (sy > 0 ? 1 : 0)) * cs;
        t_max_y = (edge - a.y) / d.y;
        t_delta_y = cs / std::abs(d.y);
    }
    const double corner_eps = 1e-12;
    while (true) {
        if (t_max_x > 1.0 && t_max_y > 1.0) return 1.0;
        if (std::abs(t_max_x - t_max_y) < corner_eps && sx != 0 && sy != 0) {
            const double t = t_max_x;
            const int nx = cx + sx, ny = cy + sy;
            if (m.wall_cell(nx, cy) || m.wall_cell(cx, ny) || m.wall_cell(nx, ny)) return t;
            cx = nx;
            cy = ny;
            t_max_x += t_delta_x;
            t_max_y += t_delta_y;
        } else if (t_max_x < t_max_y) {
            const double t = t_max_x;
            cx += sx;
            if (m.wall_cell(cx, cy)) return t;
            t_max_x += t_delta_x;
        } else {
            const double t = t_max_y;
            cy += sy;
            if (m.wall_cell(cx, cy)) return t;
            t_max_y += t_delta_y;
        }
    }
}

Vec2 step(const Maze& m, const Vec2& s, const Vec2& a) {
    if (a.x == 0.0 && a.y == 0.0) return s;
    const Vec2 target = s + a;
    const double t = segment_free_until(m, s, target);
    if (t >= 1.0) return target;
    const double back = 1e-7 * m.cell_size / a.norm();
    const double t_stop = std::max(0.0, t - back);
    const Vec2 out = s + a * t_stop;
    return m.free_at(out) ? out : s;
}

// ---------------------------------------------------------------------------
// Regions

LabelSet labels_at(const std::vector<Region>& regions, const Vec2& p) {
    LabelSet out;
    for (const auto& r : regions)
        if (r.contains(p)) out.insert(r.label);
    return out;
}

namespace {

Vec2 clamp_to_rect(const Vec2& p, const Vec2& lo, const Vec2& hi) {
    return {std::clamp(p.x, lo.x, hi.x), std::clamp(p.y, lo.y, hi.y)};
}

}  // namespace

bool regions_disjoint(const Region& r1, const Region& r2) {
    if (r1.shape == RegionShape::Circle && r2.shape == RegionShape::Circle)
        return distance(r1.a, r2.a) > r1.radius + r2.radius;
    if (r1.shape == RegionShape::Rect && r2.shape == RegionShape::Rect) {
        const bool overlap = r1.a.x <= r2.b.x && r2.a.x <= r1.b.x && r1.a.y <= r2.b.y &&
                             r2.a.y <= r1.b.y;
        return !overlap;
    }
    const Region& circ = r1.shape == RegionShape::Circle ? r1 : r2;
    const Region& rect = r1.shape == RegionShape::Circle ? r2 : r1;
    return distance(clamp_to_rect(circ.a, rect.a, rect.b), circ.a) > circ.radius;
}

bool region_in_free_space(const Maze& m, const Region& r) {
    Vec2 lo, hi;
    if (r.shape == RegionShape::Circle) {
        lo = {r.a.x - r.radius, r.a.y - r.radius};
        hi = {r.a.x + r.radius, r.a.y + r.radius};
    } else {
        lo = r.a;
        hi = r.b;
    }
    const double cs = m.cell_size;
    const int x0 = static_cast<int>(std::floor(lo.x / cs));
    const int x1 = static_cast<int>(std::floor(hi.x / cs));
    const int y0 = static_cast<int>(std::floor(lo.y / cs));
    const int y1 = static_cast<int>(std::floor(hi.y / cs));
    for (int cy = y0; cy <= y1; ++cy) {
        for (int cx = x0; cx <= x1; ++cx) {
            if (!m.wall_cell(cx, cy)) continue;
            if (r.shape == RegionShape::Rect) return false;  // bbox == shape
            const Vec2 cell_lo{cx * cs, cy * cs};
            const Vec2 cell_hi{(cx + 1) * cs, (cy + 1) * cs};
            if (distance(clamp_to_rect(r.a, cell_lo, cell_hi), r.a) <= r.radius) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Dataset generation

std::vector<std::pair<int, int>> cell_bfs_path(const Maze& m, std::pair<int, int> from,
                                               std::pair<int, int> to) {
    const int n = m.rows * m.cols;
    std::vector<int> parent(static_cast<std::size_t>(n), -2);
    auto id = [&](int cx, int cy) { return cy * m.cols + cx; };
    std::deque<std::pair<int, int>> queue;
    if (m.wall_cell(from.first, from.second) || m.wall_cell(to.first, to.second)) return {};
    parent[static_cast<std::size_t>(id(from.first, from.second))] = -1;
    queue.push_back(from);
    static const int dx[4] = {1, -1, 0, 0};
    static const int dy[4] = {0, 0, 1, -1};
    while (!queue.empty()) {
        auto [cx, cy] = queue.front();
        queue.pop_front();
        if (cx == to.first && cy == to.second) break;
        for (int k = 0; k < 4; ++k) {
            const int nx = cx + dx[k], ny = cy + dy[k];
            if (m.wall_cell(nx, ny)) continue;
            if (parent[static_cast<std::size_t>(id(nx, ny))] != -2) continue;
            parent[static_cast<std::size_t>(id(nx, ny))] = id(cx, cy);
            queue.emplace_back(nx, ny);
        }
    }
    if (parent[static_cast<std::size_t>(id(to.first, to.second))] == -2) return {};
    std::vector<std::pair<int, int>> path;
    int cur = id(to.first, to.second);
    while (cur != -1) {
        path.emplace_back(cur % m.cols, cur / m.cols);
        cur = parent[static_cast<std::size_t>(cur)];
    }
    std::reverse(path.begin(), path.end());
    return path;
}

namespace {

Vec2 random_point_in_cell(const Maze& m, std::pair<int, int> cell, Rng& rng) {
    const double cs = m.cell_size;
    const double margin = 0.15 * cs;
    return {cell.first * cs + rng.uniform(margin, cs - margin),
            cell.second * cs + rng.uniform(margin, cs - margin)};
}

Vec2 clip_norm(const Vec2& v, double max_norm) {
    const double n = v.norm();
    if (n <= max_norm || n == 0.0) return v;
    return v * (max_norm / n);
}

Trajectory navigate_rollout(const Maze& m, Rng& rng,
                            const std::vector<std::pair<int, int>>& free_cells,
                            const DatasetParams& p) {
    const auto pick = [&] {
        return free_cells[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(free_cells.size()) - 1))];
    };
    const auto start_cell = pick();
    const auto goal_cell = pick();
    const Vec2 start = random_point_in_cell(m, start_cell, rng);
    const Vec2 goal = random_point_in_cell(m, goal_cell, rng);
    const auto path = cell_bfs_path(m, start_cell, goal_cell);

    Trajectory traj;
    traj.states.push_back(start);
    Vec2 pos = start;
    std::size_t wp = 0;
    for (int t = 0; t < p.max_len; ++t) {
        // chase the farthest visible waypoint within a short lookahead
        Vec2 target = goal;
        if (!path.empty() && wp + 1 < path.size()) {
            const std::size_t hi = std::min(path.size() - 1, wp + 8);
            std::size_t best = wp;
            for (std::size_t i = wp; i <= hi; ++i) {
                if (segment_free(m, pos, m.cell_center(path[i].first, path[i].second))) best = i;
            }
            wp = best;
            target = wp + 1 >= path.size() ? goal : m.cell_center(path[wp].first, path[wp].second);
        }
        Vec2 act = clip_norm(target - pos, m.v_max);
        act = act + rng.unit_vec() * (p.noise * m.v_max * rng.uniform());
        act = clip_norm(act, m.v_max);
        const Vec2 nxt = step(m, pos, act);
        traj.actions.push_back(act);
        traj.states.push_back(nxt);
        pos = nxt;
        if (distance(pos, goal) <= 0.5 * m.cell_size) break;
    }
    return traj;
}

Trajectory explore_rollout(const Maze& m, Rng& rng,
                           const std::vector<std::pair<int, int>>& free_cells,
                           const DatasetParams& p) {
    const auto cell = free_cells[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(free_cells.size()) - 1))];
    Vec2 pos = random_point_in_cell(m, cell, rng);
    Vec2 dir = rng.unit_vec();
    Trajectory traj;
    traj.states.push_back(pos);
    for (int t = 0; t < p.max_len; ++t) {
        Vec2 blended = dir * p.momentum + rng.unit_vec() * (1.0 - p.momentum);
        const double n = blended.norm();
        dir = n > 1e-12 ? blended * (1.0 / n) : rng.unit_vec();
        const Vec2 act = dir * m.v_max;
        const Vec2 nxt = step(m, pos, act);
        if (distance(nxt, pos + act) > 1e-9) dir = rng.unit_vec();  // bounced off a wall
        traj.actions.push_back(act);
        traj.states.push_back(nxt);
        pos = nxt;
    }
    return traj;
}

void append_fragments(Dataset& out, const Trajectory& traj, int frag_len) {
    // consecutive blocks of frag_len transitions; the seam transition between
    // blocks is discarded so fragments share no state
    const std::size_t stride = static_cast<std::size_t>(frag_len) + 1;
    for (std::size_t base = 0; base < traj.states.size(); base += stride) {
        const std::size_t end = std::min(traj.states.size(), base + stride);
        if (end - base < 2) break;
        Trajectory frag;
        frag.states.assign(traj.states.begin() + static_cast<std::ptrdiff_t>(base),
                           traj.states.begin() + static_cast<std::ptrdiff_t>(end));
        frag.actions.assign(traj.actions.begin() + static_cast<std::ptrdiff_t>(base),
                            traj.actions.begin() + static_cast<std::ptrdiff_t>(end - 1));
        out.push_back(std::move(frag));
    }
}

}  // namespace

Dataset gen_dataset(const Maze& m, DataRegime regime, std::uint64_t seed,
                    const DatasetParams& params) {
    if (params.rollouts <= 0) throw std::invalid_argument("rollout count must be positive");
    if (params.max_len < 1) throw std::invalid_argument("rollout length must be >= 1");
    if (regime == DataRegime::Stitch && params.frag_len < 2)
        throw std::invalid_argument("fragment length must be >= 2");
    Rng rng(seed);
    const auto free_cells = m.free_cells();
    if (free_cells.empty()) throw std::invalid_argument("maze has no free cell");
    Dataset out;
    for (int i = 0; i < params.rollouts; ++i) {
        switch (regime) {
            case DataRegime::Navigate: {
                Trajectory t = navigate_rollout(m, rng, free_cells, params);
                if (t.states.size() >= 2) out.push_back(std::move(t));
                break;
            }
            case DataRegime::Stitch: {
                const Trajectory t = navigate_rollout(m, rng, free_cells, params);
                append_fragments(out, t, params.frag_len);
                break;
            }
            case DataRegime::Explore: {
                Trajectory t = explore_rollout(m, rng, free_cells, params);
                if (t.states.size() >= 2) out.push_back(std::move(t));
                break;
            }
        }
    }
    return out;
}

int total_states(const Dataset& d) {
    int n = 0;
    for (const auto& t : d) n += static_cast<int>(t.states.size());
    return n;
}

}  // namespace lasso
