#include "lassoplan/embed.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace lasso {

// ---------------------------------------------------------------------------
// Harvesting

namespace {

std::int64_t bucket_key(int ix, int iy) {
    return (static_cast<std::int64_t>(ix) << 32) ^ (static_cast<std::int64_t>(iy) & 0xffffffffLL);
}

}  // namespace

DistanceSamples harvest(const Dataset& dataset, const Maze& maze, const HarvestParams& params) {
    DistanceSamples out;
    out.delta_max = params.delta_max;
    for (const auto& traj : dataset) {
        out.traj_start.push_back(static_cast<int>(out.states.size()));
        out.states.insert(out.states.end(), traj.states.begin(), traj.states.end());
    }

    int base = 0;
    for (const auto& traj : dataset) {
        const int len = static_cast<int>(traj.states.size());
        for (int t = 0; t < len; ++t) {
            out.samples.push_back({base + t, base + t, 0});
            for (int k = 1; k <= params.delta_max && t + k < len; ++k)
                out.samples.push_back({base + t, base + t + k, k});
        }
        base += len;
    }

    // cross-fragment proximity links: states within one step of motion of
    // each other, with a free segment between them
    const double radius = params.link_radius > 0.0 ? params.link_radius : maze.v_max;
    const int n = static_cast<int>(out.states.size());
    std::unordered_map<std::int64_t, std::vector<int>> grid;
    auto cell_of = [&](const Vec2& p) {
        return std::make_pair(static_cast<int>(std::floor(p.x / radius)),
                              static_cast<int>(std::floor(p.y / radius)));
    };
    for (int i = 0; i < n; ++i) {
        const auto [ix, iy] = cell_of(out.states[static_cast<std::size_t>(i)]);
        grid[bucket_key(ix, iy)].push_back(i);
    }
    std::vector<int> link_count(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        const Vec2& pi = out.states[static_cast<std::size_t>(i)];
        const auto [ix, iy] = cell_of(pi);
        std::vector<std::pair<double, int>> candidates;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                auto it = grid.find(bucket_key(ix + dx, iy + dy));
                if (it == grid.end()) continue;
                for (int j : it->second) {
                    if (j <= i) continue;
                    const double d = distance(pi, out.states[static_cast<std::size_t>(j)]);
                    if (d <= radius) candidates.emplace_back(d, j);
                }
            }
        }
        std::sort(candidates.begin(), candidates.end());
        for (const auto& [d, j] : candidates) {
            if (link_count[static_cast<std::size_t>(i)] >= params.max_links_per_state) break;
            if (link_count[static_cast<std::size_t>(j)] >= params.max_links_per_state) continue;
            if (!segment_free(maze, pi, out.states[static_cast<std::size_t>(j)])) continue;
            out.links.push_back({i, j, d / maze.v_max});
            ++link_count[static_cast<std::size_t>(i)];
            ++link_count[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fit

namespace {

struct SampleGraph {
    // unit-step transitions plus proximity links; longer direct samples are
    // redundant for shortest-path composition (they decompose into unit steps)
    std::vector<std::vector<std::pair<int, double>>> adj;

    explicit SampleGraph(const DistanceSamples& s) {
        adj.resize(s.states.size());
        for (const auto& d : s.samples) {
            if (d.steps != 1) continue;
            adj[static_cast<std::size_t>(d.i)].emplace_back(d.j, 1.0);
            adj[static_cast<std::size_t>(d.j)].emplace_back(d.i, 1.0);
        }
        for (const auto& l : s.links) {
            adj[static_cast<std::size_t>(l.i)].emplace_back(l.j, l.steps);
            adj[static_cast<std::size_t>(l.j)].emplace_back(l.i, l.steps);
        }
    }

    std::vector<double> dijkstra(int source) const {
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> dist(adj.size(), inf);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        dist[static_cast<std::size_t>(source)] = 0.0;
        heap.emplace(0.0, source);
        while (!heap.empty()) {
            const auto [d, u] = heap.top();
            heap.pop();
            if (d > dist[static_cast<std::size_t>(u)]) continue;
            for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
                const double nd = d + w;
                if (nd < dist[static_cast<std::size_t>(v)]) {
                    dist[static_cast<std::size_t>(v)] = nd;
                    heap.emplace(nd, v);
                }
            }
        }
        return dist;
    }
};

}  // namespace

Embedding fit(const DistanceSamples& samples, int d_latent, int n_landmarks,
              std::uint64_t seed) {
    const int n_states = static_cast<int>(samples.states.size());
    if (n_states == 0) throw std::invalid_argument("fit: no sampled states");
    n_landmarks = std::min(n_landmarks, n_states);
    if (d_latent < 1 || d_latent > n_landmarks - 1)
        throw std::invalid_argument("fit: need 1 <= d_latent <= n_landmarks - 1");

    const SampleGraph graph(samples);
    const double inf = std::numeric_limits<double>::infinity();

    // farthest-point sampling; each round keeps the full distance field of
    // the newly chosen landmark
    Rng rng(seed);
    std::vector<int> landmarks;
    std::vector<std::vector<double>> lm_dist;
    std::vector<double> min_dist(static_cast<std::size_t>(n_states), inf);
    int next = static_cast<int>(rng.uniform_int(0, n_states - 1));
    for (int k = 0; k < n_landmarks; ++k) {
        landmarks.push_back(next);
        lm_dist.push_back(graph.dijkstra(next));
        const auto& dist = lm_dist.back();
        int best = -1;
        double best_d = -1.0;
        for (int i = 0; i < n_states; ++i) {
            min_dist[static_cast<std::size_t>(i)] =
                std::min(min_dist[static_cast<std::size_t>(i)], dist[static_cast<std::size_t>(i)]);
            if (min_dist[static_cast<std::size_t>(i)] > best_d) {
                best_d = min_dist[static_cast<std::size_t>(i)];
                best = i;
            }
        }
        if (k + 1 < n_landmarks && std::isinf(best_d))
            throw DisconnectedDataError(
                "sample graph is disconnected: no composed distance between landmark candidates");
        next = best;
    }
    for (int i = 0; i < n_states; ++i)
        if (std::isinf(min_dist[static_cast<std::size_t>(i)]))
            throw DisconnectedDataError("sample graph leaves some states unreachable");

    // symmetric landmark distance matrix
    const int m = n_landmarks;
    Eigen::MatrixXd dist_mat(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            const double ab = lm_dist[static_cast<std::size_t>(a)]
                                     [static_cast<std::size_t>(landmarks[static_cast<std::size_t>(b)])];
            const double ba = lm_dist[static_cast<std::size_t>(b)]
                                     [static_cast<std::size_t>(landmarks[static_cast<std::size_t>(a)])];
            dist_mat(a, b) = a == b ? 0.0 : 0.5 * (ab + ba);
        }

    // classical MDS: double-centered squared distances, top eigenpairs
    const Eigen::MatrixXd sq = dist_mat.array().square();
    const Eigen::MatrixXd centering =
        Eigen::MatrixXd::Identity(m, m) - Eigen::MatrixXd::Constant(m, m, 1.0 / m);
    const Eigen::MatrixXd gram = -0.5 * centering * sq * centering;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw std::runtime_error("fit: eigensolver failed");

    Embedding e;
    e.d_latent = d_latent;
    e.landmark_states = landmarks;
    e.states = samples.states;
    e.eigenvalues.resize(static_cast<std::size_t>(d_latent));
    e.landmark_coords.assign(static_cast<std::size_t>(m * d_latent), 0.0);
    e.inv_projection.assign(static_cast<std::size_t>(d_latent * m), 0.0);

    const double lambda_floor = 1e-12 * std::max(1.0, solver.eigenvalues().maxCoeff());
    for (int d = 0; d < d_latent; ++d) {
        const int col = m - 1 - d;  // eigenvalues ascend in Eigen
        const double lambda = solver.eigenvalues()(col);
        e.eigenvalues[static_cast<std::size_t>(d)] = lambda;
        if (lambda <= lambda_floor) continue;  // degenerate direction: stays zero
        const double root = std::sqrt(lambda);
        for (int a = 0; a < m; ++a) {
            const double v = solver.eigenvectors()(a, col);
            e.landmark_coords[static_cast<std::size_t>(a * d_latent + d)] = root * v;
            e.inv_projection[static_cast<std::size_t>(d * m + a)] = v / root;
        }
    }

    e.mean_sq_dist.resize(static_cast<std::size_t>(m));
    for (int b = 0; b < m; ++b) e.mean_sq_dist[static_cast<std::size_t>(b)] = sq.col(b).mean();

    e.state_lm_dist.assign(static_cast<std::size_t>(n_states * m), 0.0);
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < n_states; ++i)
            e.state_lm_dist[static_cast<std::size_t>(i * m + a)] =
                lm_dist[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];

    e.rebuild_index();
    return e;
}

// ---------------------------------------------------------------------------
// Embedding queries

LatentVec Embedding::landmark_coord(int k) const {
    LatentVec out(static_cast<std::size_t>(d_latent));
    for (int d = 0; d < d_latent; ++d)
        out[static_cast<std::size_t>(d)] =
            landmark_coords[static_cast<std::size_t>(k * d_latent + d)];
    return out;
}

LatentVec Embedding::triangulate(const double* dist_row) const {
    const int m = num_landmarks();
    LatentVec out(static_cast<std::size_t>(d_latent), 0.0);
    for (int d = 0; d < d_latent; ++d) {
        double acc = 0.0;
        const double* proj = &inv_projection[static_cast<std::size_t>(d * m)];
        for (int a = 0; a < m; ++a) {
            const double delta_sq = dist_row[a] * dist_row[a];
            acc += proj[a] * (delta_sq - mean_sq_dist[static_cast<std::size_t>(a)]);
        }
        out[static_cast<std::size_t>(d)] = -0.5 * acc;
    }
    return out;
}

LatentVec Embedding::embed_state(int index) const {
    const int m = num_landmarks();
    for (int k = 0; k < m; ++k)
        if (landmark_states[static_cast<std::size_t>(k)] == index) return landmark_coord(k);
    return triangulate(&state_lm_dist[static_cast<std::size_t>(index * m)]);
}

int Embedding::nearest_state(const Vec2& p) const {
    if (states.empty()) return -1;
    const int ix = static_cast<int>(std::floor(p.x / bucket_size_));
    const int iy = static_cast<int>(std::floor(p.y / bucket_size_));
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring <= grid_span_ + 1; ++ring) {
        // points in ring r are at least (r-1) buckets away
        if (best >= 0 && best_d <= (ring - 1) * bucket_size_) return best;
        for (int dy = -ring; dy <= ring; ++dy) {
            for (int dx = -ring; dx <= ring; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                auto it = buckets_.find(bucket_key(ix + dx, iy + dy));
                if (it == buckets_.end()) continue;
                for (int i : it->second) {
                    const double d = distance(p, states[static_cast<std::size_t>(i)]);
                    if (d < best_d || (d == best_d && i < best)) {
                        best_d = d;
                        best = i;
                    }
                }
            }
        }
    }
    if (best >= 0) return best;
    // query far outside the data extent: plain scan
    for (int i = 0; i < num_states(); ++i) {
        const double d = distance(p, states[static_cast<std::size_t>(i)]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

LatentVec Embedding::embed(const Vec2& p) const {
    const int proxy = nearest_state(p);
    if (proxy < 0) throw std::runtime_error("embed: no sampled states");
    const int m = num_landmarks();
    if (states[static_cast<std::size_t>(proxy)] == p) {
        for (int k = 0; k < m; ++k)
            if (landmark_states[static_cast<std::size_t>(k)] == proxy) return landmark_coord(k);
    }
    return triangulate(&state_lm_dist[static_cast<std::size_t>(proxy * m)]);
}

void Embedding::rebuild_index() {
    buckets_.clear();
    bucket_size_ = 1.0;
    grid_span_ = 0;
    int lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
    for (int i = 0; i < num_states(); ++i) {
        const Vec2& p = states[static_cast<std::size_t>(i)];
        const int bx = static_cast<int>(std::floor(p.x / bucket_size_));
        const int by = static_cast<int>(std::floor(p.y / bucket_size_));
        if (i == 0) {
            lo_x = hi_x = bx;
            lo_y = hi_y = by;
        } else {
            lo_x = std::min(lo_x, bx);
            hi_x = std::max(hi_x, bx);
            lo_y = std::min(lo_y, by);
            hi_y = std::max(hi_y, by);
        }
        buckets_[bucket_key(bx, by)].push_back(i);
    }
    grid_span_ = std::max(hi_x - lo_x, hi_y - lo_y);
}

// ---------------------------------------------------------------------------
// Temporal-efficiency pruning

std::vector<char> te_prune(const Dataset& dataset, const Embedding& e, double tau, int h) {
    if (h < 1) throw std::invalid_argument("te_prune: h must be >= 1");
    std::vector<char> keep;
    keep.reserve(static_cast<std::size_t>(e.num_states()));
    int base = 0;
    for (const auto& traj : dataset) {
        const int len = static_cast<int>(traj.states.size());
        for (int t = 0; t < len; ++t) {
            if (t + h >= len) {
                keep.push_back(1);  // too close to the end to judge
                continue;
            }
            const LatentVec a = e.embed_state(base + t);
            const LatentVec b = e.embed_state(base + t + h);
            const double rate = latent_distance(a, b) / h;
            keep.push_back(rate >= tau ? 1 : 0);
        }
        base += len;
    }
    return keep;
}

}  // namespace lasso
