#pragma once

#include <unordered_map>
#include <vector>

#include "lassoplan/common.hpp"
#include "lassoplan/world.hpp"

namespace lasso {

// ---------------------------------------------------------------------------
// Temporal-distance samples harvested from a fragmented dataset. Direct
// samples are within-trajectory index offsets (exact step counts). Because
// fragments never share a state, the sample graph is stitched together with
// line-of-sight proximity links: two states closer than one step of motion,
// with a free segment between them, are at most ~1 step apart.

struct DistanceSample {
    int i;
    int j;
    int steps;
};

struct ProximityLink {
    int i;
    int j;
    double steps;  // fractional, distance / v_max
};

struct DistanceSamples {
    std::vector<Vec2> states;      // flattened dataset states, global index order
    std::vector<int> traj_start;   // offset of each trajectory's first state
    std::vector<DistanceSample> samples;
    std::vector<ProximityLink> links;
    int delta_max = 0;
};

struct HarvestParams {
    int delta_max = 32;
    double link_radius = -1.0;  // < 0: defaults to v_max
    int max_links_per_state = 6;
};

DistanceSamples harvest(const Dataset& dataset, const Maze& maze,
                        const HarvestParams& params = {});

// ---------------------------------------------------------------------------
// Latent embedding: classical multidimensional scaling on a landmark distance
// matrix (composed shortest paths over the sample graph), with triangulated
// out-of-sample coordinates for every other state. Arbitrary query points use
// the nearest sampled state as proxy.

class Embedding {
public:
    int d_latent = 0;
    std::vector<int> landmark_states;       // global state indices
    std::vector<double> landmark_coords;    // n_lm x d, row-major
    std::vector<double> eigenvalues;        // d entries, descending
    std::vector<double> inv_projection;     // d x n_lm, row-major
    std::vector<double> mean_sq_dist;       // per-landmark column mean of D^2
    std::vector<Vec2> states;               // sampled state positions
    std::vector<double> state_lm_dist;      // n_states x n_lm, row-major

    int num_landmarks() const { return static_cast<int>(landmark_states.size()); }
    int num_states() const { return static_cast<int>(states.size()); }

    LatentVec landmark_coord(int k) const;

    // latent coordinate of an arbitrary point; identical inputs give
    // identical outputs, and landmark states reproduce their stored rows
    LatentVec embed(const Vec2& p) const;

    // latent coordinate of a sampled state by global index (no proxy search)
    LatentVec embed_state(int index) const;

    int nearest_state(const Vec2& p) const;

    // call after deserializing to rebuild the spatial index
    void rebuild_index();

private:
    LatentVec triangulate(const double* dist_row) const;

    // spatial hash over states for nearest-neighbour queries (derived)
    double bucket_size_ = 1.0;
    int grid_span_ = 0;
    std::unordered_map<std::int64_t, std::vector<int>> buckets_;
};

// Landmark selection by farthest-point sampling over composed shortest-path
// distances, seeded; throws DisconnectedDataError when the sample graph does
// not connect the landmarks (or leaves some state unreachable).
Embedding fit(const DistanceSamples& samples, int d_latent, int n_landmarks,
              std::uint64_t seed);

// Temporal-efficiency pruning: keep state s_t iff the latent displacement
// over the next h steps, per step, reaches tau. States within h of the end
// of their trajectory are kept. Returns per-global-index keep flags.
std::vector<char> te_prune(const Dataset& dataset, const Embedding& e, double tau, int h);

}  // namespace lasso
