#include "lassoplan/augment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lasso {

void compute_soft_labels(LatentGraph& g, const Embedding& e, const std::vector<Region>& regions,
                         int num_labels, bool proximity_weighting) {
    for (int v = 0; v < g.num_nodes(); ++v) {
        auto& row = g.soft_labels[static_cast<std::size_t>(v)];
        row.assign(static_cast<std::size_t>(num_labels), 0.0);
        if (g.is_anchor(v)) {
            const auto& meta = *g.anchor[static_cast<std::size_t>(v)];
            const LabelSet ls = labels_at(regions, meta.source);
            for (LabelId l : ls.to_vector()) row[static_cast<std::size_t>(l)] = 1.0;
            continue;
        }
        const auto& members = g.node2raw[static_cast<std::size_t>(v)];
        if (members.empty()) continue;
        const double bandwidth = 0.5 * g.h_td;
        double total = 0.0;
        for (int s : members) {
            double w = 1.0;
            if (proximity_weighting) {
                const double d = latent_distance(e.embed_state(s),
                                                 g.coords[static_cast<std::size_t>(v)]);
                w = std::exp(-0.5 * (d / bandwidth) * (d / bandwidth));
            }
            total += w;
            const LabelSet ls = labels_at(regions, e.states[static_cast<std::size_t>(s)]);
            for (LabelId l : ls.to_vector()) row[static_cast<std::size_t>(l)] += w;
        }
        if (total > 0.0)
            for (auto& p : row) p /= total;
    }
}

namespace {

Vec2 sample_in_region(const Maze& maze, const Region& r, Rng& rng) {
    Vec2 lo, hi;
    if (r.shape == RegionShape::Circle) {
        lo = {r.a.x - r.radius, r.a.y - r.radius};
        hi = {r.a.x + r.radius, r.a.y + r.radius};
    } else {
        lo = r.a;
        hi = r.b;
    }
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const Vec2 p{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        if (r.contains(p) && maze.free_at(p)) return p;
    }
    throw EmptyRegionError("no free sample found inside region after 1000 draws");
}

}  // namespace

LatentGraph make_anchors(const LatentGraph& g, const Maze& maze, const Embedding& e,
                         const std::vector<Region>& regions, int num_labels,
                         const AugmentParams& params) {
    LatentGraph out = g;
    Rng rng(params.seed);

    // per label, dataset states already verified inside the region
    std::vector<std::vector<int>> in_region(regions.size());
    if (params.retrieve_from_dataset) {
        for (int s = 0; s < e.num_states(); ++s) {
            for (std::size_t r = 0; r < regions.size(); ++r) {
                if (regions[r].contains(e.states[static_cast<std::size_t>(s)]))
                    in_region[r].push_back(s);
            }
        }
    }

    const int first_anchor = out.num_nodes();
    for (std::size_t r = 0; r < regions.size(); ++r) {
        const Region& region = regions[r];
        std::vector<int> retrieved = in_region[r];
        for (int j = 0; j < params.anchors_per_label; ++j) {
            Vec2 source;
            if (params.retrieve_from_dataset && !retrieved.empty()) {
                const auto pick = static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<std::int64_t>(retrieved.size()) - 1));
                source = e.states[static_cast<std::size_t>(retrieved[pick])];
                retrieved.erase(retrieved.begin() + static_cast<std::ptrdiff_t>(pick));
            } else {
                source = sample_in_region(maze, region, rng);
            }
            out.coords.push_back(e.embed(source));
            out.node2raw.emplace_back();
            out.anchor.emplace_back(AnchorMeta{region.label, source});
            out.soft_labels.emplace_back();
        }
    }

    // connectivity: standard distance rule against every other node
    std::vector<int> degree(static_cast<std::size_t>(out.num_nodes()), 0);
    for (const auto& edge : out.edges) {
        ++degree[static_cast<std::size_t>(edge.from)];
        ++degree[static_cast<std::size_t>(edge.to)];
    }
    for (int a = first_anchor; a < out.num_nodes(); ++a) {
        for (int v = 0; v < out.num_nodes(); ++v) {
            if (v == a || (v >= first_anchor && v > a)) continue;  // each pair once
            const double d = latent_distance(out.coords[static_cast<std::size_t>(a)],
                                             out.coords[static_cast<std::size_t>(v)]);
            if (d > out.h_td) continue;
            out.edges.push_back({a, v, d, false});
            out.edges.push_back({v, a, d, false});
            ++degree[static_cast<std::size_t>(a)];
            ++degree[static_cast<std::size_t>(v)];
            ++degree[static_cast<std::size_t>(a)];
            ++degree[static_cast<std::size_t>(v)];
        }
    }

    // fallback connection for isolated anchors: nearest non-anchor node
    for (int a = first_anchor; a < out.num_nodes(); ++a) {
        if (degree[static_cast<std::size_t>(a)] > 0) continue;
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int v = 0; v < out.num_nodes(); ++v) {
            if (out.is_anchor(v)) continue;
            const double d = latent_distance(out.coords[static_cast<std::size_t>(a)],
                                             out.coords[static_cast<std::size_t>(v)]);
            if (d < best_d) {
                best_d = d;
                best = v;
            }
        }
        if (best < 0) continue;  // graph of anchors only; leave isolated
        out.edges.push_back({a, best, best_d, true});
        out.edges.push_back({best, a, best_d, true});
        degree[static_cast<std::size_t>(a)] += 2;
    }

    compute_soft_labels(out, e, regions, num_labels, params.proximity_weighting);
    return out;
}

bool is_safe(const LatentGraph& g, int node, const LabelSet& forbidden, double tau_soft) {
    if (g.is_anchor(node)) {
        const auto& meta = *g.anchor[static_cast<std::size_t>(node)];
        if (forbidden.contains(meta.label)) return false;
    }
    for (LabelId l : forbidden.to_vector())
        if (g.soft_label(node, l) >= tau_soft) return false;
    return true;
}

}  // namespace lasso
