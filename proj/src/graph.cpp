#include "lassoplan/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

namespace lasso {

std::vector<std::vector<int>> LatentGraph::adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_nodes()));
    for (std::size_t i = 0; i < edges.size(); ++i)
        adj[static_cast<std::size_t>(edges[i].from)].push_back(static_cast<int>(i));
    return adj;
}

int LatentGraph::nearest_node(const LatentVec& h) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int v = 0; v < num_nodes(); ++v) {
        const double d = latent_distance(h, coords[static_cast<std::size_t>(v)]);
        if (d < best_d) {
            best_d = d;
            best = v;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Clustering

LatentGraph cluster(const std::vector<int>& retained_states, const Embedding& e, double h_td) {
    if (h_td <= 0.0) throw std::invalid_argument("cluster: h_td must be positive");
    if (retained_states.empty()) throw std::invalid_argument("cluster: no states");

    std::vector<LatentVec> points;
    points.reserve(retained_states.size());
    for (int s : retained_states) points.push_back(e.embed_state(s));

    const double radius = 0.5 * h_td;
    std::vector<LatentVec> centers;
    std::vector<int> assign(retained_states.size(), -1);

    auto nearest_center = [&](const LatentVec& p) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const double d = latent_distance(p, centers[c]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        return std::make_pair(best, best_d);
    };

    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [c, d] = nearest_center(points[i]);
        if (c >= 0 && d <= radius) {
            assign[i] = c;
        } else {
            centers.push_back(points[i]);
            assign[i] = static_cast<int>(centers.size()) - 1;
        }
    }

    // refinement: centroids, then one reassignment pass
    const std::size_t dim = points[0].size();
    std::vector<LatentVec> sums(centers.size(), LatentVec(dim, 0.0));
    std::vector<int> counts(centers.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = static_cast<std::size_t>(assign[i]);
        for (std::size_t d = 0; d < dim; ++d) sums[c][d] += points[i][d];
        ++counts[c];
    }
    for (std::size_t c = 0; c < centers.size(); ++c)
        if (counts[c] > 0)
            for (std::size_t d = 0; d < dim; ++d) centers[c][d] = sums[c][d] / counts[c];

    std::vector<std::vector<int>> members(centers.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [c, d] = nearest_center(points[i]);
        (void)d;
        members[static_cast<std::size_t>(c)].push_back(retained_states[i]);
    }

    LatentGraph g;
    g.h_td = h_td;
    for (std::size_t c = 0; c < centers.size(); ++c) {
        if (members[c].empty()) continue;  // emptied by reassignment
        g.coords.push_back(centers[c]);
        g.node2raw.push_back(members[c]);
        g.anchor.emplace_back(std::nullopt);
        g.soft_labels.emplace_back();
    }
    return g;
}

// ---------------------------------------------------------------------------
// Edges

void build_edges(LatentGraph& g, const Dataset& dataset, const EdgeParams& params) {
    const int n = g.num_nodes();

    std::set<std::pair<int, int>> supported;
    if (params.support_filter) {
        // map raw states back to their cluster
        int max_raw = 0;
        for (const auto& members : g.node2raw)
            for (int s : members) max_raw = std::max(max_raw, s + 1);
        std::vector<int> state2node(static_cast<std::size_t>(max_raw), -1);
        for (int v = 0; v < n; ++v)
            for (int s : g.node2raw[static_cast<std::size_t>(v)])
                state2node[static_cast<std::size_t>(s)] = v;

        const int window = std::max(1, static_cast<int>(g.h_td));
        int base = 0;
        for (const auto& traj : dataset) {
            const int len = static_cast<int>(traj.states.size());
            for (int t = 0; t < len; ++t) {
                const int gi = base + t;
                if (gi >= max_raw) break;
                const int u = state2node[static_cast<std::size_t>(gi)];
                if (u < 0) continue;
                for (int k = 1; k <= window && t + k < len; ++k) {
                    const int gj = base + t + k;
                    if (gj >= max_raw) break;
                    const int v = state2node[static_cast<std::size_t>(gj)];
                    if (v >= 0 && v != u) supported.emplace(u, v);
                }
            }
            base += len;
        }
    }

    g.edges.clear();
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            const double d = latent_distance(g.coords[static_cast<std::size_t>(u)],
                                             g.coords[static_cast<std::size_t>(v)]);
            if (d > g.h_td) continue;
            if (params.support_filter && !supported.count({u, v})) continue;
            g.edges.push_back({u, v, d, false});
        }
    }
}

// ---------------------------------------------------------------------------
// Search

std::optional<PathResult> shortest_path(const LatentGraph& g, int from, int to,
                                        const NodeFilter& admit) {
    const int n = g.num_nodes();
    if (from < 0 || to < 0 || from >= n || to >= n) return std::nullopt;
    if (from == to) return PathResult{{from}, 0.0};

    const auto adj = g.adjacency();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(n), inf);
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[static_cast<std::size_t>(from)] = 0.0;
    heap.emplace(0.0, from);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(u)]) continue;
        if (u == to) break;
        for (int ei : adj[static_cast<std::size_t>(u)]) {
            const auto& edge = g.edges[static_cast<std::size_t>(ei)];
            const int v = edge.to;
            if (v != to && v != from && admit && !admit(v)) continue;
            const double nd = d + edge.weight;
            if (nd < dist[static_cast<std::size_t>(v)]) {
                dist[static_cast<std::size_t>(v)] = nd;
                parent[static_cast<std::size_t>(v)] = u;
                heap.emplace(nd, v);
            }
        }
    }
    if (dist[static_cast<std::size_t>(to)] == inf) return std::nullopt;
    PathResult res;
    res.cost = dist[static_cast<std::size_t>(to)];
    for (int v = to; v != -1; v = parent[static_cast<std::size_t>(v)]) res.nodes.push_back(v);
    std::reverse(res.nodes.begin(), res.nodes.end());
    return res;
}

std::vector<double> closure_distances(const LatentGraph& g, int target, const NodeFilter& admit) {
    const int n = g.num_nodes();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(n), inf);
    std::vector<std::vector<int>> radj(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        radj[static_cast<std::size_t>(g.edges[i].to)].push_back(static_cast<int>(i));

    // walking backward from the target: extending a priced node a to a
    // predecessor b means the forward path enters a, so a must be admitted
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[static_cast<std::size_t>(target)] = 0.0;
    heap.emplace(0.0, target);
    while (!heap.empty()) {
        const auto [d, a] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(a)]) continue;
        if (admit && !admit(a)) continue;
        for (int ei : radj[static_cast<std::size_t>(a)]) {
            const auto& edge = g.edges[static_cast<std::size_t>(ei)];
            const int b = edge.from;
            const double nd = d + edge.weight;
            if (nd < dist[static_cast<std::size_t>(b)]) {
                dist[static_cast<std::size_t>(b)] = nd;
                heap.emplace(nd, b);
            }
        }
    }
    return dist;
}

}  // namespace lasso
