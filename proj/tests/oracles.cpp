#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

#include "lassoplan/augment.hpp"
#include "lassoplan/plan.hpp"

namespace lasso::oracles {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Random formulas and words

FormulaPtr random_formula(Rng& rng, int n_atoms, int max_depth) {
    if (max_depth <= 0 || rng.chance(0.25)) {
        const int pick = static_cast<int>(rng.uniform_int(0, n_atoms + 1));
        if (pick == n_atoms) return Formula::make_true();
        if (pick == n_atoms + 1) return Formula::make_false();
        return Formula::make_atom(pick);
    }
    switch (rng.uniform_int(0, 6)) {
        case 0: return Formula::make_not(random_formula(rng, n_atoms, max_depth - 1));
        case 1:
            return Formula::make_and(random_formula(rng, n_atoms, max_depth - 1),
                                     random_formula(rng, n_atoms, max_depth - 1));
        case 2:
            return Formula::make_or(random_formula(rng, n_atoms, max_depth - 1),
                                    random_formula(rng, n_atoms, max_depth - 1));
        case 3:
            return Formula::make_until(random_formula(rng, n_atoms, max_depth - 1),
                                       random_formula(rng, n_atoms, max_depth - 1));
        case 4:
            return Formula::make_release(random_formula(rng, n_atoms, max_depth - 1),
                                         random_formula(rng, n_atoms, max_depth - 1));
        case 5: return Formula::make_eventually(random_formula(rng, n_atoms, max_depth - 1));
        default: return Formula::make_always(random_formula(rng, n_atoms, max_depth - 1));
    }
}

LassoWord random_lasso(Rng& rng, int n_atoms, int max_prefix, int max_period, bool multi_label) {
    auto letter = [&] {
        LabelSet s;
        if (multi_label) {
            for (int a = 0; a < n_atoms; ++a)
                if (rng.chance(0.4)) s.insert(a);
        } else {
            const int pick = static_cast<int>(rng.uniform_int(0, n_atoms));
            if (pick < n_atoms) s.insert(pick);
        }
        return s;
    };
    LassoWord w;
    const int p = static_cast<int>(rng.uniform_int(0, max_prefix));
    const int r = static_cast<int>(rng.uniform_int(1, max_period));
    for (int i = 0; i < p; ++i) w.prefix.push_back(letter());
    for (int i = 0; i < r; ++i) w.period.push_back(letter());
    return w;
}

std::vector<LassoWord> all_small_lassos(int n_atoms, int max_prefix, int max_period) {
    std::vector<LabelSet> letters;
    letters.emplace_back();
    for (int a = 0; a < n_atoms; ++a) letters.push_back(LabelSet::single(a));
    const int base = static_cast<int>(letters.size());

    auto sequences_of = [&](int len) {
        std::vector<std::vector<LabelSet>> out;
        std::vector<int> digits(static_cast<std::size_t>(len), 0);
        while (true) {
            std::vector<LabelSet> seq;
            for (int d : digits) seq.push_back(letters[static_cast<std::size_t>(d)]);
            out.push_back(std::move(seq));
            int i = len - 1;
            while (i >= 0 && ++digits[static_cast<std::size_t>(i)] == base) {
                digits[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
        }
        return out;
    };

    std::vector<LassoWord> words;
    for (int p = 0; p <= max_prefix; ++p) {
        for (int r = 1; r <= max_period; ++r) {
            for (const auto& pre : sequences_of(p)) {
                for (const auto& per : sequences_of(r)) {
                    LassoWord w;
                    w.prefix = pre;
                    w.period = per;
                    words.push_back(std::move(w));
                }
            }
        }
    }
    return words;
}

std::vector<std::string> template_instances_m3() {
    return {
        "F a",
        "G !a",
        "F (a & F (b))",
        "F (a & F (b & F (c)))",
        "F a & F b",
        "F a & F b & F c",
        "!a U b",
        "G F a",
        "G F (a & F (b))",
        "G F (a & F (b & F (c)))",
        "F (a | b)",
        "F (a | b | c)",
    };
}

// ---------------------------------------------------------------------------
// Fine-grid step distance

double fine_grid_steps(const Maze& m, const Vec2& a, const Vec2& b) {
    const double res = m.v_max;
    const int fw = static_cast<int>(std::lround(m.width() / res));
    const int fh = static_cast<int>(std::lround(m.height() / res));
    auto cell = [&](const Vec2& p) {
        return std::make_pair(
            std::clamp(static_cast<int>(std::floor(p.x / res)), 0, fw - 1),
            std::clamp(static_cast<int>(std::floor(p.y / res)), 0, fh - 1));
    };
    auto free_sub = [&](int x, int y) {
        if (x < 0 || y < 0 || x >= fw || y >= fh) return false;
        return m.free_at({(x + 0.5) * res, (y + 0.5) * res});
    };
    const auto [sx, sy] = cell(a);
    const auto [tx, ty] = cell(b);
    std::vector<double> dist(static_cast<std::size_t>(fw * fh), kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    if (!free_sub(sx, sy) || !free_sub(tx, ty)) return kInf;
    dist[static_cast<std::size_t>(sy * fw + sx)] = 0.0;
    heap.emplace(0.0, sy * fw + sx);
    static const int dx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static const int dy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    while (!heap.empty()) {
        const auto [d, id] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(id)]) continue;
        const int x = id % fw, y = id / fw;
        if (x == tx && y == ty) return d;
        for (int k = 0; k < 8; ++k) {
            const int nx = x + dx[k], ny = y + dy[k];
            if (!free_sub(nx, ny)) continue;
            if (k >= 4 && (!free_sub(x, ny) || !free_sub(nx, y))) continue;  // no corner cuts
            const double nd = d + (k < 4 ? 1.0 : std::sqrt(2.0));
            if (nd < dist[static_cast<std::size_t>(ny * fw + nx)]) {
                dist[static_cast<std::size_t>(ny * fw + nx)] = nd;
                heap.emplace(nd, ny * fw + nx);
            }
        }
    }
    return kInf;
}

// ---------------------------------------------------------------------------
// Explicit product

namespace {

struct ExplicitProduct {
    int n_nodes;
    int n_states;
    std::vector<std::vector<std::pair<int, double>>> adj;  // product id -> (succ, cost)

    int encode(int v, int q) const { return q * n_nodes + v; }

    ExplicitProduct(const LatentGraph& g, const Nba& nba, double tau)
        : n_nodes(g.num_nodes()), n_states(nba.num_states) {
        adj.resize(static_cast<std::size_t>(n_nodes * n_states));
        for (int q = 0; q < n_states; ++q) {
            for (const auto& t : nba.transitions) {
                if (t.from != q) continue;
                for (int v = 0; v < n_nodes; ++v) {
                    // graph moves, guard checked at the entered node
                    for (const auto& e : g.edges) {
                        if (e.from != v) continue;
                        if (node_satisfies_guard(g, e.to, t.guard, tau))
                            adj[static_cast<std::size_t>(encode(v, q))].emplace_back(
                                encode(e.to, t.to), e.weight);
                    }
                    // zero-cost automaton switch at the current node
                    if (t.to != q && node_satisfies_guard(g, v, t.guard, tau))
                        adj[static_cast<std::size_t>(encode(v, q))].emplace_back(
                            encode(v, t.to), 0.0);
                }
            }
        }
    }

    std::vector<double> dijkstra(const std::vector<std::pair<int, double>>& sources) const {
        std::vector<double> dist(adj.size(), kInf);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        for (const auto& [id, d0] : sources) {
            if (d0 < dist[static_cast<std::size_t>(id)]) {
                dist[static_cast<std::size_t>(id)] = d0;
                heap.emplace(d0, id);
            }
        }
        while (!heap.empty()) {
            const auto [d, id] = heap.top();
            heap.pop();
            if (d > dist[static_cast<std::size_t>(id)]) continue;
            for (const auto& [to, w] : adj[static_cast<std::size_t>(id)]) {
                const double nd = d + w;
                if (nd < dist[static_cast<std::size_t>(to)]) {
                    dist[static_cast<std::size_t>(to)] = nd;
                    heap.emplace(nd, to);
                }
            }
        }
        return dist;
    }
};

}  // namespace

std::map<std::pair<int, int>, double> explicit_prefix_costs(const LatentGraph& g, const Nba& nba,
                                                            int v0, double tau_soft) {
    const ExplicitProduct prod(g, nba, tau_soft);
    std::vector<std::pair<int, double>> sources;
    for (int q0 : nba.initial)
        for (const auto& t : nba.transitions)
            if (t.from == q0 && node_satisfies_guard(g, v0, t.guard, tau_soft))
                sources.emplace_back(prod.encode(v0, t.to), 0.0);
    const auto dist = prod.dijkstra(sources);
    std::map<std::pair<int, int>, double> out;
    for (int q = 0; q < nba.num_states; ++q) {
        if (!nba.is_accepting(q)) continue;
        for (int v = 0; v < g.num_nodes(); ++v) {
            const double d = dist[static_cast<std::size_t>(prod.encode(v, q))];
            if (d < kInf) out[{v, q}] = d;
        }
    }
    return out;
}

std::optional<double> explicit_suffix_cost(const LatentGraph& g, const Nba& nba, int u,
                                           int q_star, double tau_soft) {
    for (const auto& t : nba.transitions)
        if (t.from == q_star && t.to == q_star && node_satisfies_guard(g, u, t.guard, tau_soft))
            return 0.0;

    const ExplicitProduct prod(g, nba, tau_soft);
    std::vector<std::pair<int, double>> sources;
    for (const auto& [to, w] : prod.adj[static_cast<std::size_t>(prod.encode(u, q_star))])
        sources.emplace_back(to, w);
    const auto dist = prod.dijkstra(sources);

    auto admit = [&](int w) {
        for (const auto& t : nba.transitions)
            if (t.from == q_star && t.to == q_star && t.guard.required.empty() &&
                is_safe(g, w, t.guard.forbidden, tau_soft))
                return true;
        return false;
    };
    // latent closure costs toward u with every entered node admitted
    std::vector<double> closure = closure_distances(g, u, admit);
    closure[static_cast<std::size_t>(u)] = 0.0;
    bool has_pf = false;
    for (const auto& t : nba.transitions)
        has_pf = has_pf || (t.from == q_star && t.to == q_star && t.guard.required.empty());
    if (!has_pf) {
        std::fill(closure.begin(), closure.end(), kInf);
        closure[static_cast<std::size_t>(u)] = 0.0;
    }

    double best = kInf;
    for (int x = 0; x < g.num_nodes(); ++x) {
        const double d = dist[static_cast<std::size_t>(prod.encode(x, q_star))];
        if (d < kInf) best = std::min(best, d + closure[static_cast<std::size_t>(x)]);
    }
    if (best == kInf) return std::nullopt;
    return best;
}

// ---------------------------------------------------------------------------
// Path oracles

namespace {

void enumerate_paths(const LatentGraph& g, const std::vector<std::vector<int>>& adj, int cur,
                     int to, std::vector<char>& used, double cost, double& best) {
    if (cur == to) {
        best = std::min(best, cost);
        return;
    }
    if (cost >= best) return;
    for (int ei : adj[static_cast<std::size_t>(cur)]) {
        const auto& e = g.edges[static_cast<std::size_t>(ei)];
        if (used[static_cast<std::size_t>(e.to)]) continue;
        used[static_cast<std::size_t>(e.to)] = 1;
        enumerate_paths(g, adj, e.to, to, used, cost + e.weight, best);
        used[static_cast<std::size_t>(e.to)] = 0;
    }
}

}  // namespace

std::optional<double> brute_force_shortest(const LatentGraph& g, int from, int to) {
    const auto adj = g.adjacency();
    std::vector<char> used(static_cast<std::size_t>(g.num_nodes()), 0);
    used[static_cast<std::size_t>(from)] = 1;
    double best = kInf;
    enumerate_paths(g, adj, from, to, used, 0.0, best);
    if (best == kInf) return std::nullopt;
    return best;
}

std::vector<double> bellman_ford(const LatentGraph& g, int from) {
    std::vector<double> dist(static_cast<std::size_t>(g.num_nodes()), kInf);
    dist[static_cast<std::size_t>(from)] = 0.0;
    for (int round = 0; round < g.num_nodes(); ++round) {
        bool changed = false;
        for (const auto& e : g.edges) {
            if (dist[static_cast<std::size_t>(e.from)] == kInf) continue;
            const double nd = dist[static_cast<std::size_t>(e.from)] + e.weight;
            if (nd < dist[static_cast<std::size_t>(e.to)]) {
                dist[static_cast<std::size_t>(e.to)] = nd;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return dist;
}

// ---------------------------------------------------------------------------
// Synthetic graphs

LatentGraph random_augmented_graph(Rng& rng, int n_nodes, int n_labels, int anchors_per_label,
                                   double h_td) {
    LatentGraph g;
    g.h_td = h_td;
    const double extent = std::sqrt(static_cast<double>(n_nodes)) * h_td * 0.7;
    for (int v = 0; v < n_nodes; ++v) {
        g.coords.push_back({rng.uniform(0.0, extent), rng.uniform(0.0, extent)});
        g.node2raw.push_back({v});
        g.anchor.emplace_back(std::nullopt);
        g.soft_labels.emplace_back(static_cast<std::size_t>(n_labels), 0.0);
    }
    // anchors: re-mark random distinct nodes, one batch per label
    std::vector<int> ids(static_cast<std::size_t>(n_nodes));
    for (int v = 0; v < n_nodes; ++v) ids[static_cast<std::size_t>(v)] = v;
    rng.shuffle(ids);
    std::size_t cursor = 0;
    for (int l = 0; l < n_labels; ++l) {
        for (int j = 0; j < anchors_per_label && cursor < ids.size(); ++j) {
            const int v = ids[cursor++];
            g.anchor[static_cast<std::size_t>(v)] =
                AnchorMeta{l, {g.coords[static_cast<std::size_t>(v)][0],
                               g.coords[static_cast<std::size_t>(v)][1]}};
            auto& row = g.soft_labels[static_cast<std::size_t>(v)];
            std::fill(row.begin(), row.end(), 0.0);
            row[static_cast<std::size_t>(l)] = 1.0;
        }
    }
    // random soft labels on some non-anchor nodes
    for (int v = 0; v < n_nodes; ++v) {
        if (g.is_anchor(v) || !rng.chance(0.3)) continue;
        auto& row = g.soft_labels[static_cast<std::size_t>(v)];
        const int l = static_cast<int>(rng.uniform_int(0, n_labels - 1));
        row[static_cast<std::size_t>(l)] = rng.uniform(0.0, 1.0);
    }
    // distance-rule edges with random directed dropping
    for (int u = 0; u < n_nodes; ++u) {
        for (int v = 0; v < n_nodes; ++v) {
            if (u == v) continue;
            const double d = latent_distance(g.coords[static_cast<std::size_t>(u)],
                                             g.coords[static_cast<std::size_t>(v)]);
            if (d <= h_td && !rng.chance(0.15)) g.edges.push_back({u, v, d, false});
        }
    }
    return g;
}

}  // namespace lasso::oracles
