#pragma once

#include <string>
#include <vector>

#include "lassoplan/common.hpp"

namespace lasso {

// ---------------------------------------------------------------------------
// Synthetic 2D maze world: a boolean cell grid (true = wall) with a point
// robot whose per-step displacement is capped at v_max. Boundary cells are
// always walls.

struct Maze {
    int rows = 0;
    int cols = 0;
    double cell_size = 1.0;
    double v_max = 0.25;
    std::vector<char> walls;  // row-major, true = wall

    bool wall_cell(int cx, int cy) const {
        if (cx < 0 || cy < 0 || cx >= cols || cy >= rows) return true;
        return walls[static_cast<std::size_t>(cy * cols + cx)] != 0;
    }

    bool free_at(const Vec2& p) const {
        const int cx = static_cast<int>(std::floor(p.x / cell_size));
        const int cy = static_cast<int>(std::floor(p.y / cell_size));
        return !wall_cell(cx, cy);
    }

    double width() const { return cols * cell_size; }
    double height() const { return rows * cell_size; }

    Vec2 cell_center(int cx, int cy) const {
        return {(cx + 0.5) * cell_size, (cy + 0.5) * cell_size};
    }

    std::vector<std::pair<int, int>> free_cells() const;
};

enum class MazePreset { Medium, Large, Giant };

// Randomized maze: recursive-backtracker carving with 2-cell-wide corridors
// plus a braiding pass that opens extra gaps so alternative routes exist.
Maze gen_maze(MazePreset preset, std::uint64_t seed);

// Text format: header line `cell_size v_max`, then `#`/`.` rows (row 0 last,
// so the file reads like a map with y growing upward).
std::string maze_to_text(const Maze& m);
Maze maze_from_text(const std::string& text);

// first point along a -> b (inclusive) that leaves free space, as a segment
// parameter in [0,1]; 1.0 when the whole segment is free
double segment_free_until(const Maze& m, const Vec2& a, const Vec2& b);

inline bool segment_free(const Maze& m, const Vec2& a, const Vec2& b) {
    return segment_free_until(m, a, b) >= 1.0;
}

// Stop-at-wall dynamics: s' = s + a when the segment stays free, otherwise
// the last free point along the ray before the first wall contact.
Vec2 step(const Maze& m, const Vec2& s, const Vec2& a);

// ---------------------------------------------------------------------------
// Labeled regions (closed: boundaries count as inside).

enum class RegionShape { Circle, Rect };

struct Region {
    LabelId label = -1;
    RegionShape shape = RegionShape::Circle;
    // circle: center, radius ; rect: min corner, max corner
    Vec2 a;
    Vec2 b;
    double radius = 0.0;

    bool contains(const Vec2& p) const {
        if (shape == RegionShape::Circle) return distance(p, a) <= radius;
        return p.x >= a.x && p.x <= b.x && p.y >= a.y && p.y <= b.y;
    }
};

LabelSet labels_at(const std::vector<Region>& regions, const Vec2& p);

bool regions_disjoint(const Region& r1, const Region& r2);
bool region_in_free_space(const Maze& m, const Region& r);

// ---------------------------------------------------------------------------
// Fragmented trajectory datasets.

struct Trajectory {
    std::vector<Vec2> states;   // length >= 2
    std::vector<Vec2> actions;  // states.size() - 1
};

using Dataset = std::vector<Trajectory>;

enum class DataRegime { Navigate, Stitch, Explore };

struct DatasetParams {
    int rollouts = 80;        // navigate/stitch rollouts or explore walks
    int max_len = 300;        // transitions per rollout
    int frag_len = 30;        // stitch: max transitions per fragment
    double noise = 0.1;       // navigate action jitter, fraction of v_max
    double momentum = 0.85;   // explore direction persistence
};

// Task-agnostic fragments, deterministic per seed.
//   navigate: noisy rollouts chasing grid-geodesic waypoints between random
//             free start/goal pairs
//   stitch:   navigate rollouts chopped into fragments of <= frag_len
//             transitions, the seam transition between fragments discarded
//   explore:  momentum random walks
Dataset gen_dataset(const Maze& m, DataRegime regime, std::uint64_t seed,
                    const DatasetParams& params);

// Grid BFS on maze cells, 4-connected; path includes both endpoints, empty
// when unreachable. Used by rollout generation and the execution controller.
std::vector<std::pair<int, int>> cell_bfs_path(const Maze& m, std::pair<int, int> from,
                                               std::pair<int, int> to);

int total_states(const Dataset& d);

}  // namespace lasso
