#include "lassoplan/plan.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <map>
#include <queue>

namespace lasso {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LabelSet node_letter(const LatentGraph& g, int v) {
    if (g.is_anchor(v)) return LabelSet::single(g.anchor[static_cast<std::size_t>(v)]->label);
    return LabelSet();
}

LassoWord induced_lasso(const LatentGraph& g, const Plan& plan) {
    LassoWord w;
    for (int v : plan.prefix) w.prefix.push_back(node_letter(g, v));
    if (plan.suffix.empty()) {
        w.period.push_back(node_letter(g, plan.prefix.back()));
    } else {
        for (std::size_t i = 1; i < plan.suffix.size(); ++i)
            w.period.push_back(node_letter(g, plan.suffix[i]));
    }
    return w;
}

bool node_satisfies_guard(const LatentGraph& g, int v, const Guard& guard, double tau_soft) {
    if (guard.required.size() >= 2) return false;  // unsatisfiable with disjoint regions
    if (const auto req = guard.required_label()) {
        if (!g.is_anchor(v) || g.anchor[static_cast<std::size_t>(v)]->label != *req) return false;
    }
    return is_safe(g, v, guard.forbidden, tau_soft);
}

bool feasible(const LatentGraph& g, const Nba& nba, const ProductState& from,
              const ProductState& to, double tau_soft) {
    if (from.v == to.v && from.q != to.q) {
        for (const auto& t : nba.transitions)
            if (t.from == from.q && t.to == to.q &&
                node_satisfies_guard(g, from.v, t.guard, tau_soft))
                return true;
        return false;
    }
    bool edge = false;
    for (const auto& e : g.edges) edge = edge || (e.from == from.v && e.to == to.v);
    if (!edge) return false;
    for (const auto& t : nba.transitions)
        if (t.from == from.q && t.to == to.q && node_satisfies_guard(g, to.v, t.guard, tau_soft))
            return true;
    return false;
}

// ---------------------------------------------------------------------------
// Shared product machinery

namespace {

struct Product {
    const LatentGraph& g;
    const Nba& nba;
    double tau;
    std::vector<std::vector<int>> gadj;
    std::vector<std::vector<int>> tadj;

    Product(const LatentGraph& g_, const Nba& nba_, double tau_)
        : g(g_), nba(nba_), tau(tau_), gadj(g_.adjacency()), tadj(nba_.transitions_by_source()) {}

    int num_product_states() const { return g.num_nodes() * nba.num_states; }
    int encode(int v, int q) const { return q * g.num_nodes() + v; }
    int decode_v(int id) const { return id % g.num_nodes(); }
    int decode_q(int id) const { return id / g.num_nodes(); }

    template <typename Visit>
    void for_each_successor(int v, int q, Visit&& visit) const {
        for (int ti : tadj[static_cast<std::size_t>(q)]) {
            const auto& t = nba.transitions[static_cast<std::size_t>(ti)];
            for (int ei : gadj[static_cast<std::size_t>(v)]) {
                const auto& e = g.edges[static_cast<std::size_t>(ei)];
                if (node_satisfies_guard(g, e.to, t.guard, tau)) visit(e.to, t.to, e.weight);
            }
            if (t.to != q && node_satisfies_guard(g, v, t.guard, tau)) visit(v, t.to, 0.0);
        }
    }

    // automaton states reached by consuming the start node's letter
    std::vector<int> seed_states(int v0) const {
        std::vector<int> out;
        for (int q0 : nba.initial)
            for (int ti : tadj[static_cast<std::size_t>(q0)]) {
                const auto& t = nba.transitions[static_cast<std::size_t>(ti)];
                if (node_satisfies_guard(g, v0, t.guard, tau)) out.push_back(t.to);
            }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // does q have a positive-free self-loop whose forbidden set admits w?
    bool selfloop_admits(int q, int w) const {
        for (int ti : tadj[static_cast<std::size_t>(q)]) {
            const auto& t = nba.transitions[static_cast<std::size_t>(ti)];
            if (t.to != q || !t.guard.required.empty()) continue;
            if (is_safe(g, w, t.guard.forbidden, tau)) return true;
        }
        return false;
    }

    bool has_positive_free_selfloop(int q) const {
        for (int ti : tadj[static_cast<std::size_t>(q)]) {
            const auto& t = nba.transitions[static_cast<std::size_t>(ti)];
            if (t.to == q && t.guard.required.empty()) return true;
        }
        return false;
    }
};

std::vector<int> walk_parents(const std::vector<int>& parent, const Product& P, int end) {
    std::vector<int> nodes;
    for (int cur = end; cur != -1; cur = parent[static_cast<std::size_t>(cur)])
        nodes.push_back(P.decode_v(cur));
    std::reverse(nodes.begin(), nodes.end());
    return nodes;
}

}  // namespace

// ---------------------------------------------------------------------------
// Prefix search: A* over the implicit product with an anchor-distance
// heuristic. The heuristic is admissible but not consistent (it can jump when
// the automaton state changes), so improved routes re-open closed states; a
// popped goal is still optimal because every queue entry's f underestimates
// any completion through it.

std::vector<PrefixCandidate> prefix_search(const LatentGraph& g, const Nba& nba, int v0, int k,
                                           double tau_soft) {
    const Product P(g, nba, tau_soft);
    const int n_total = P.num_product_states();

    // per automaton state: 0 -> heuristic zero (accepting or a positive-free
    // exit), 1 -> min distance to an enabling anchor, 2 -> dead end
    std::vector<int> h_mode(static_cast<std::size_t>(nba.num_states), 2);
    std::vector<std::vector<int>> h_anchors(static_cast<std::size_t>(nba.num_states));
    for (int q = 0; q < nba.num_states; ++q) {
        if (nba.is_accepting(q)) {
            h_mode[static_cast<std::size_t>(q)] = 0;
            continue;
        }
        LabelSet enabling;
        bool free_exit = false;
        for (int ti : P.tadj[static_cast<std::size_t>(q)]) {
            const auto& t = nba.transitions[static_cast<std::size_t>(ti)];
            if (t.to == q) continue;
            if (t.guard.required.empty())
                free_exit = true;
            else if (t.guard.required.size() == 1)
                enabling.insert(*t.guard.required_label());
        }
        if (free_exit) {
            h_mode[static_cast<std::size_t>(q)] = 0;
        } else if (!enabling.empty()) {
            for (int v = 0; v < g.num_nodes(); ++v)
                if (g.is_anchor(v) &&
                    enabling.contains(g.anchor[static_cast<std::size_t>(v)]->label))
                    h_anchors[static_cast<std::size_t>(q)].push_back(v);
            h_mode[static_cast<std::size_t>(q)] =
                h_anchors[static_cast<std::size_t>(q)].empty() ? 2 : 1;
        }
    }
    auto heuristic = [&](int v, int q) -> double {
        switch (h_mode[static_cast<std::size_t>(q)]) {
            case 0: return 0.0;
            case 2: return kInf;
            default: break;
        }
        double best = kInf;
        for (int a : h_anchors[static_cast<std::size_t>(q)])
            best = std::min(best, latent_distance(g.coords[static_cast<std::size_t>(v)],
                                                  g.coords[static_cast<std::size_t>(a)]));
        return best;
    };

    std::vector<double> dist(static_cast<std::size_t>(n_total), kInf);
    std::vector<int> parent(static_cast<std::size_t>(n_total), -1);
    using Item = std::tuple<double, double, int, int>;  // f, g, v, q
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;

    for (int q1 : P.seed_states(v0)) {
        const int id = P.encode(v0, q1);
        if (dist[static_cast<std::size_t>(id)] > 0.0) {
            dist[static_cast<std::size_t>(id)] = 0.0;
            parent[static_cast<std::size_t>(id)] = -1;
            const double h = heuristic(v0, q1);
            if (h < kInf) heap.emplace(h, 0.0, v0, q1);
        }
    }

    struct Candidate {
        double cost;
        std::vector<int> nodes;
    };
    std::map<std::pair<int, int>, Candidate> found;  // (v_end, q_end) -> best

    auto kth_best = [&]() {
        std::vector<double> costs;
        for (const auto& [key, c] : found) costs.push_back(c.cost);
        std::sort(costs.begin(), costs.end());
        return costs[static_cast<std::size_t>(k) - 1];
    };

    while (!heap.empty()) {
        const auto [f, gc, v, q] = heap.top();
        heap.pop();
        const int id = P.encode(v, q);
        if (gc > dist[static_cast<std::size_t>(id)]) continue;
        if (static_cast<int>(found.size()) >= k && f > kth_best()) break;

        if (nba.is_accepting(q)) {
            auto it = found.find({v, q});
            if (it == found.end() || gc < it->second.cost)
                found[{v, q}] = {gc, walk_parents(parent, P, id)};
        }

        P.for_each_successor(v, q, [&](int v2, int q2, double cost) {
            const double nd = gc + cost;
            const int id2 = P.encode(v2, q2);
            if (nd < dist[static_cast<std::size_t>(id2)]) {
                dist[static_cast<std::size_t>(id2)] = nd;
                parent[static_cast<std::size_t>(id2)] = id;
                const double h = heuristic(v2, q2);
                if (h < kInf) heap.emplace(nd + h, nd, v2, q2);
            }
        });
    }

    std::vector<PrefixCandidate> out;
    for (const auto& [key, cand] : found) {
        PrefixCandidate pc;
        pc.nodes = cand.nodes;
        pc.cost = cand.cost;
        pc.v_end = key.first;
        pc.q_end = key.second;
        out.push_back(std::move(pc));
    }
    std::sort(out.begin(), out.end(), [](const PrefixCandidate& a, const PrefixCandidate& b) {
        return std::tie(a.cost, a.v_end, a.q_end) < std::tie(b.cost, b.v_end, b.q_end);
    });
    if (static_cast<int>(out.size()) > k) out.resize(static_cast<std::size_t>(k));
    return out;
}

// ---------------------------------------------------------------------------
// Suffix search

namespace {

std::optional<SuffixResult> suffix_search_capped(const Product& P, int u, int q_star,
                                                 double cost_cap) {
    const LatentGraph& g = P.g;
    const Nba& nba = P.nba;

    // trivial: a self-transition satisfied at u is a zero-cost cycle
    for (int ti : P.tadj[static_cast<std::size_t>(q_star)]) {
        const auto& t = nba.transitions[static_cast<std::size_t>(ti)];
        if (t.to == q_star && node_satisfies_guard(g, u, t.guard, P.tau))
            return SuffixResult{{}, 0.0};
    }

    // product return paths (u, q*) -> (u', q*), at least one move taken
    const int n_total = P.num_product_states();
    std::vector<double> dist(static_cast<std::size_t>(n_total), kInf);
    std::vector<int> parent(static_cast<std::size_t>(n_total), -1);
    using Item = std::tuple<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    P.for_each_successor(u, q_star, [&](int v2, int q2, double cost) {
        if (cost > cost_cap) return;
        const int id2 = P.encode(v2, q2);
        if (cost < dist[static_cast<std::size_t>(id2)]) {
            dist[static_cast<std::size_t>(id2)] = cost;
            parent[static_cast<std::size_t>(id2)] = -1;
            heap.emplace(cost, id2);
        }
    });
    while (!heap.empty()) {
        const auto [d, id] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(id)]) continue;
        P.for_each_successor(P.decode_v(id), P.decode_q(id), [&](int v2, int q2, double cost) {
            const double nd = d + cost;
            if (nd > cost_cap) return;
            const int id2 = P.encode(v2, q2);
            if (nd < dist[static_cast<std::size_t>(id2)]) {
                dist[static_cast<std::size_t>(id2)] = nd;
                parent[static_cast<std::size_t>(id2)] = id;
                heap.emplace(nd, id2);
            }
        });
    }

    // latent-only closure u' -> u under the positive-free self-loop of q*
    NodeFilter admit;
    std::vector<double> closure(static_cast<std::size_t>(g.num_nodes()), kInf);
    closure[static_cast<std::size_t>(u)] = 0.0;
    if (P.has_positive_free_selfloop(q_star)) {
        admit = [&P, q_star](int w) { return P.selfloop_admits(q_star, w); };
        closure = closure_distances(g, u, admit);
        closure[static_cast<std::size_t>(u)] = 0.0;  // empty closure enters nothing
    }

    int best_u = -1;
    double best_total = kInf;
    for (int x = 0; x < g.num_nodes(); ++x) {
        const double d2 = dist[static_cast<std::size_t>(P.encode(x, q_star))];
        if (d2 == kInf) continue;
        const double total = d2 + closure[static_cast<std::size_t>(x)];
        if (total < best_total) {
            best_total = total;
            best_u = x;
        }
    }
    if (best_u < 0 || best_total == kInf || best_total > cost_cap) return std::nullopt;

    SuffixResult res;
    res.cost = best_total;
    std::vector<int> product_nodes =
        walk_parents(parent, P, P.encode(best_u, q_star));
    res.nodes.push_back(u);
    res.nodes.insert(res.nodes.end(), product_nodes.begin(), product_nodes.end());
    if (best_u != u) {
        const auto closing = shortest_path(g, best_u, u, admit);
        if (!closing) return std::nullopt;  // cannot happen: closure cost was finite
        res.nodes.insert(res.nodes.end(), closing->nodes.begin() + 1, closing->nodes.end());
    }
    // a cycle that never leaves u is the trivial cycle in disguise
    bool moved = false;
    for (int v : res.nodes) moved = moved || v != u;
    if (!moved) res.nodes.clear();
    return res;
}

}  // namespace

std::optional<SuffixResult> suffix_search(const LatentGraph& g, const Nba& nba, int u, int q_star,
                                          double tau_soft) {
    if (!nba.is_accepting(q_star)) return std::nullopt;
    const Product P(g, nba, tau_soft);
    return suffix_search_capped(P, u, q_star, kInf);
}

// ---------------------------------------------------------------------------
// Plan selection

namespace {

Plan assemble(const PrefixCandidate& pre, const SuffixResult& suf, double lambda) {
    Plan p;
    p.prefix = pre.nodes;
    p.suffix = suf.nodes;
    p.cost_pre = pre.cost;
    p.cost_suf = suf.cost;
    p.lambda = lambda;
    p.J = lambda * pre.cost + (1.0 - lambda) * suf.cost;
    p.q_star = pre.q_end;
    return p;
}

bool plan_less(const Plan& a, const Plan& b) {
    return std::tie(a.J, a.cost_pre, a.prefix, a.suffix) <
           std::tie(b.J, b.cost_pre, b.prefix, b.suffix);
}

}  // namespace

Plan synthesize(const LatentGraph& g, const Nba& nba, int v0, const PlanParams& params) {
    if (params.lambda < 0.0 || params.lambda > 1.0)
        throw std::invalid_argument("synthesize: lambda must lie in [0, 1]");
    const auto candidates = prefix_search(g, nba, v0, params.top_k, params.tau_soft);
    if (candidates.empty())
        throw InfeasibleError("NoPrefix: no accepting product state is reachable");

    const Product P(g, nba, params.tau_soft);
    std::optional<Plan> best;
    for (const auto& cand : candidates) {
        if (best && params.lambda * cand.cost > best->J) break;  // candidates are cost-sorted
        double cap = kInf;
        if (best && params.lambda < 1.0)
            cap = (best->J - params.lambda * cand.cost) / (1.0 - params.lambda);
        const auto suf = suffix_search_capped(P, cand.v_end, cand.q_end, cap);
        if (!suf) continue;
        Plan plan = assemble(cand, *suf, params.lambda);
        if (!best || plan_less(plan, *best)) best = std::move(plan);
    }
    if (!best) throw InfeasibleError("Infeasible: no prefix candidate admits a suffix cycle");
    return *best;
}

// ---------------------------------------------------------------------------
// Decoupled baseline: minimum logical hops first, geometry second.

namespace {

struct HopPath {
    std::vector<int> transition_ids;  // state-changing transitions, in order
    int end_q = -1;
};

// BFS over state-changing transitions from the given sources; returns the
// hop-minimal path to the preferred target (accepting when accept_only).
std::optional<HopPath> hop_bfs(const Nba& nba, const std::vector<std::vector<int>>& tadj,
                               const std::vector<int>& sources, bool accept_only,
                               int required_target) {
    const int n = nba.num_states;
    std::vector<int> depth(static_cast<std::size_t>(n), -1);
    std::vector<std::pair<int, int>> back(static_cast<std::size_t>(n), {-1, -1});  // prev q, tid
    std::deque<int> queue;
    for (int q : sources)
        if (depth[static_cast<std::size_t>(q)] < 0) {
            depth[static_cast<std::size_t>(q)] = 0;
            queue.push_back(q);
        }
    while (!queue.empty()) {
        const int q = queue.front();
        queue.pop_front();
        for (int ti : tadj[static_cast<std::size_t>(q)]) {
            const auto& t = nba.transitions[static_cast<std::size_t>(ti)];
            if (t.to == q) continue;
            if (depth[static_cast<std::size_t>(t.to)] >= 0) continue;
            depth[static_cast<std::size_t>(t.to)] = depth[static_cast<std::size_t>(q)] + 1;
            back[static_cast<std::size_t>(t.to)] = {q, ti};
            queue.push_back(t.to);
        }
    }
    int target = -1;
    if (required_target >= 0) {
        if (depth[static_cast<std::size_t>(required_target)] < 0) return std::nullopt;
        target = required_target;
    } else {
        int best_depth = -1;
        for (int q = 0; q < n; ++q) {
            if (depth[static_cast<std::size_t>(q)] < 0) continue;
            if (accept_only && !nba.is_accepting(q)) continue;
            if (best_depth < 0 || depth[static_cast<std::size_t>(q)] < best_depth ||
                (depth[static_cast<std::size_t>(q)] == best_depth && q < target)) {
                best_depth = depth[static_cast<std::size_t>(q)];
                target = q;
            }
        }
        if (target < 0) return std::nullopt;
    }
    HopPath hp;
    hp.end_q = target;
    int cur = target;
    while (back[static_cast<std::size_t>(cur)].first >= 0 ||
           back[static_cast<std::size_t>(cur)].second >= 0) {
        hp.transition_ids.push_back(back[static_cast<std::size_t>(cur)].second);
        cur = back[static_cast<std::size_t>(cur)].first;
    }
    std::reverse(hp.transition_ids.begin(), hp.transition_ids.end());
    return hp;
}

struct Realized {
    std::vector<int> nodes;  // includes the start node
    double cost = 0.0;
    int end_node = -1;
};

// Greedy hop realization: each hop fires in place when possible, otherwise at
// the nearest node satisfying its guard, moving under a positive-free
// self-loop of the hop's source automaton state.
std::optional<Realized> realize_hops(const Product& P, int start_node,
                                     const std::vector<int>& transition_ids) {
    const LatentGraph& g = P.g;
    Realized r;
    r.nodes.push_back(start_node);
    int x = start_node;
    for (int ti : transition_ids) {
        const auto& t = P.nba.transitions[static_cast<std::size_t>(ti)];
        if (node_satisfies_guard(g, x, t.guard, P.tau)) {
            r.nodes.push_back(x);  // fires in place
            continue;
        }
        if (!P.has_positive_free_selfloop(t.from)) return std::nullopt;  // cannot move
        NodeFilter admit = [&P, &t](int w) { return P.selfloop_admits(t.from, w); };

        // one filtered Dijkstra, plus enter-as-final pricing for targets that
        // the movement filter would reject as intermediates
        const int n = g.num_nodes();
        std::vector<double> dist(static_cast<std::size_t>(n), kInf);
        std::vector<int> parent(static_cast<std::size_t>(n), -1);
        const auto adj = g.adjacency();
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        dist[static_cast<std::size_t>(x)] = 0.0;
        heap.emplace(0.0, x);
        while (!heap.empty()) {
            const auto [d, a] = heap.top();
            heap.pop();
            if (d > dist[static_cast<std::size_t>(a)]) continue;
            if (a != x && !admit(a)) continue;  // priced but not traversable
            for (int ei : adj[static_cast<std::size_t>(a)]) {
                const auto& e = g.edges[static_cast<std::size_t>(ei)];
                const double nd = d + e.weight;
                if (nd < dist[static_cast<std::size_t>(e.to)]) {
                    dist[static_cast<std::size_t>(e.to)] = nd;
                    parent[static_cast<std::size_t>(e.to)] = a;
                    heap.emplace(nd, e.to);
                }
            }
        }

        int best = -1;
        double best_d = kInf;
        for (int w = 0; w < n; ++w) {
            if (w == x) continue;
            if (!node_satisfies_guard(g, w, t.guard, P.tau)) continue;
            const double d = dist[static_cast<std::size_t>(w)];
            if (d < best_d) {
                best_d = d;
                best = w;
            }
        }
        if (best < 0) return std::nullopt;

        std::vector<int> seg;
        for (int cur = best; cur != -1; cur = parent[static_cast<std::size_t>(cur)])
            seg.push_back(cur);
        std::reverse(seg.begin(), seg.end());
        r.nodes.insert(r.nodes.end(), seg.begin() + 1, seg.end());
        r.cost += best_d;
        x = best;
    }
    r.end_node = x;
    return r;
}

}  // namespace

Plan decoupled_synthesize(const LatentGraph& g, const Nba& nba, int v0,
                          const PlanParams& params) {
    const Product P(g, nba, params.tau_soft);
    const auto sources = P.seed_states(v0);
    if (sources.empty())
        throw InfeasibleError("NoPrefix: the start node enables no automaton transition");

    const auto prefix_hops = hop_bfs(nba, P.tadj, sources, /*accept_only=*/true, -1);
    if (!prefix_hops) throw InfeasibleError("NoPrefix: no accepting state is hop-reachable");
    const int q_star = prefix_hops->end_q;

    const auto pre = realize_hops(P, v0, prefix_hops->transition_ids);
    if (!pre) throw InfeasibleError("Infeasible: a prefix hop cannot be realized");
    const int u = pre->end_node;

    // suffix: trivial self-loop at the end node, or a hop-minimal automaton
    // cycle realized greedily and closed back to u
    SuffixResult suf;
    bool have_suffix = false;
    for (int ti : P.tadj[static_cast<std::size_t>(q_star)]) {
        const auto& t = nba.transitions[static_cast<std::size_t>(ti)];
        if (t.to == q_star && node_satisfies_guard(g, u, t.guard, params.tau_soft)) {
            have_suffix = true;  // zero-cost cycle
            break;
        }
    }
    if (!have_suffix) {
        std::vector<int> cycle_sources;
        for (int ti : P.tadj[static_cast<std::size_t>(q_star)]) {
            const auto& t = nba.transitions[static_cast<std::size_t>(ti)];
            if (t.to != q_star) cycle_sources.push_back(ti);
        }
        std::optional<HopPath> best_cycle;
        int best_first = -1;
        for (int ti : cycle_sources) {
            const auto& t = nba.transitions[static_cast<std::size_t>(ti)];
            auto hp = hop_bfs(nba, P.tadj, {t.to}, false, q_star);
            if (!hp) continue;
            if (!best_cycle || hp->transition_ids.size() + 1 < best_cycle->transition_ids.size()) {
                hp->transition_ids.insert(hp->transition_ids.begin(), ti);
                best_cycle = hp;
                best_first = ti;
            }
        }
        (void)best_first;
        if (!best_cycle) throw InfeasibleError("NoCycle: accepting state has no automaton cycle");
        const auto realized = realize_hops(P, u, best_cycle->transition_ids);
        if (!realized) throw InfeasibleError("NoCycle: a suffix hop cannot be realized");
        std::vector<int> nodes = realized->nodes;
        double cost = realized->cost;
        if (realized->end_node != u) {
            if (!P.has_positive_free_selfloop(q_star) ||
                !P.selfloop_admits(q_star, u))
                throw InfeasibleError("NoCycle: cannot close the suffix back to its start");
            NodeFilter admit = [&P, q_star](int w) { return P.selfloop_admits(q_star, w); };
            const auto closing = shortest_path(g, realized->end_node, u, admit);
            if (!closing) throw InfeasibleError("NoCycle: no safe latent path closes the cycle");
            nodes.insert(nodes.end(), closing->nodes.begin() + 1, closing->nodes.end());
            cost += closing->cost;
        }
        bool moved = false;
        for (int v : nodes) moved = moved || v != u;
        suf.nodes = moved ? nodes : std::vector<int>{};
        suf.cost = cost;
        have_suffix = true;
    }

    PrefixCandidate cand;
    cand.nodes = pre->nodes;
    cand.cost = pre->cost;
    cand.v_end = u;
    cand.q_end = q_star;
    return assemble(cand, suf, params.lambda);
}

}  // namespace lasso
