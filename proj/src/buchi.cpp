#include "lassoplan/buchi.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace lasso {

std::vector<std::vector<int>> Nba::transitions_by_source() const {
    std::vector<std::vector<int>> by_src(static_cast<std::size_t>(num_states));
    for (std::size_t t = 0; t < transitions.size(); ++t)
        by_src[static_cast<std::size_t>(transitions[t].from)].push_back(static_cast<int>(t));
    return by_src;
}

// ---------------------------------------------------------------------------
// Tableau translation (Gerth/Peled/Vardi/Wolper style): expand the formula
// into nodes carrying (New, Old, Next) sets of interned subformulas, read off
// a generalized automaton with one acceptance set per Until subformula, then
// degeneralize with the usual counter construction.

namespace {

struct InternedFormula {
    FormulaKind kind;
    LabelId atom;
    int lhs;  // -1 when absent
    int rhs;
};

class FormulaPool {
public:
    int intern(const Formula& f) {
        const int l = f.lhs ? intern(*f.lhs) : -1;
        const int r = f.rhs ? intern(*f.rhs) : -1;
        const auto key = std::make_tuple(f.kind, f.atom, l, r);
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        const int id = static_cast<int>(pool_.size());
        pool_.push_back({f.kind, f.atom, l, r});
        index_.emplace(key, id);
        return id;
    }

    const InternedFormula& at(int id) const { return pool_[static_cast<std::size_t>(id)]; }
    int size() const { return static_cast<int>(pool_.size()); }

private:
    std::vector<InternedFormula> pool_;
    std::map<std::tuple<FormulaKind, LabelId, int, int>, int> index_;
};

using FormulaSet = std::set<int>;

struct TableauNode {
    FormulaSet incoming;  // node ids; kInit marks the virtual initial node
    FormulaSet old;
    FormulaSet next;
};

constexpr int kInit = -1;
constexpr std::size_t kNodeCap = 500000;

class Tableau {
public:
    explicit Tableau(const FormulaPtr& f) {
        root_ = pool_.intern(*f);
        FormulaSet new0{root_};
        expand({kInit}, new0, {}, {});
    }

    const std::vector<TableauNode>& nodes() const { return nodes_; }
    const FormulaPool& pool() const { return pool_; }

    // literal conjunction labelling all transitions into node n
    Guard guard_of(int n) const {
        Guard g;
        for (int id : nodes_[static_cast<std::size_t>(n)].old) {
            const auto& f = pool_.at(id);
            if (f.kind == FormulaKind::Atom) g.required.insert(f.atom);
            if (f.kind == FormulaKind::Not) g.forbidden.insert(pool_.at(f.lhs).atom);
        }
        return g;
    }

    // acceptance sets, one per Until subformula that is not trivially full
    std::vector<std::vector<char>> acceptance_sets() const {
        std::vector<std::vector<char>> sets;
        std::set<int> untils;
        for (const auto& node : nodes_)
            for (int id : node.old)
                if (pool_.at(id).kind == FormulaKind::Until) untils.insert(id);
        for (int u : untils) {
            const int rhs = pool_.at(u).rhs;
            std::vector<char> member(nodes_.size(), 0);
            bool all = true;
            for (std::size_t n = 0; n < nodes_.size(); ++n) {
                const auto& old = nodes_[n].old;
                member[n] = (old.count(rhs) || !old.count(u)) ? 1 : 0;
                all = all && member[n];
            }
            if (!all) sets.push_back(std::move(member));
        }
        return sets;
    }

private:
    // negation of a literal, for the contradiction check
    int negate_literal(int id) {
        const auto& f = pool_.at(id);
        if (f.kind == FormulaKind::Atom) {
            Formula neg;
            neg.kind = FormulaKind::Not;
            neg.atom = -1;
            neg.lhs = Formula::make_atom(f.atom);
            return pool_.intern(neg);
        }
        return f.lhs;  // Not(atom) -> atom
    }

    void expand(FormulaSet incoming, FormulaSet nw, FormulaSet old, FormulaSet next) {
        if (nw.empty()) {
            for (std::size_t n = 0; n < nodes_.size(); ++n) {
                if (nodes_[n].old == old && nodes_[n].next == next) {
                    nodes_[n].incoming.insert(incoming.begin(), incoming.end());
                    return;
                }
            }
            if (nodes_.size() >= kNodeCap)
                throw std::runtime_error("automaton translation exceeded node cap");
            const int id = static_cast<int>(nodes_.size());
            nodes_.push_back({std::move(incoming), old, next});
            expand({id}, next, {}, {});
            return;
        }
        const int eta = *nw.begin();
        nw.erase(nw.begin());
        const auto& f = pool_.at(eta);
        switch (f.kind) {
            case FormulaKind::True:
                // recorded so an Until with a trivially true right side is
                // recognized as fulfilled by the acceptance-set test
                old.insert(eta);
                expand(std::move(incoming), std::move(nw), std::move(old), std::move(next));
                return;
            case FormulaKind::False:
                return;  // contradiction, node discarded
            case FormulaKind::Atom:
            case FormulaKind::Not:
                if (old.count(negate_literal(eta))) return;
                old.insert(eta);
                expand(std::move(incoming), std::move(nw), std::move(old), std::move(next));
                return;
            case FormulaKind::And: {
                old.insert(eta);
                if (!old.count(f.lhs)) nw.insert(f.lhs);
                if (!old.count(f.rhs)) nw.insert(f.rhs);
                expand(std::move(incoming), std::move(nw), std::move(old), std::move(next));
                return;
            }
            case FormulaKind::Or: {
                old.insert(eta);
                FormulaSet nw2 = nw, old2 = old, next2 = next;
                if (!old.count(f.lhs)) nw.insert(f.lhs);
                expand(incoming, std::move(nw), std::move(old), std::move(next));
                if (!old2.count(f.rhs)) nw2.insert(f.rhs);
                expand(std::move(incoming), std::move(nw2), std::move(old2), std::move(next2));
                return;
            }
            case FormulaKind::Until: {
                // mu U nu  =  nu  or  (mu and X(mu U nu))
                old.insert(eta);
                FormulaSet nw2 = nw, old2 = old, next2 = next;
                if (!old.count(f.lhs)) nw.insert(f.lhs);
                next.insert(eta);
                expand(incoming, std::move(nw), std::move(old), std::move(next));
                if (!old2.count(f.rhs)) nw2.insert(f.rhs);
                expand(std::move(incoming), std::move(nw2), std::move(old2), std::move(next2));
                return;
            }
            case FormulaKind::Release: {
                // mu R nu  =  (nu and X(mu R nu))  or  (mu and nu)
                old.insert(eta);
                FormulaSet nw2 = nw, old2 = old, next2 = next;
                if (!old.count(f.rhs)) nw.insert(f.rhs);
                next.insert(eta);
                expand(incoming, std::move(nw), std::move(old), std::move(next));
                if (!old2.count(f.lhs)) nw2.insert(f.lhs);
                if (!old2.count(f.rhs)) nw2.insert(f.rhs);
                expand(std::move(incoming), std::move(nw2), std::move(old2), std::move(next2));
                return;
            }
        }
    }

    FormulaPool pool_;
    std::vector<TableauNode> nodes_;
    int root_;
};

}  // namespace

Nba translate(const FormulaPtr& f) {
    const Tableau tab(f);
    const auto& nodes = tab.nodes();
    const auto sets = tab.acceptance_sets();
    const int k = static_cast<int>(sets.size());
    const int n_nodes = static_cast<int>(nodes.size());

    Nba nba;
    // state 0 is the dedicated initial state; tableau node n with counter i
    // (1-based) maps to 1 + n*k' + (i-1) where k' = max(k, 1)
    const int kk = std::max(k, 1);
    nba.num_states = 1 + n_nodes * kk;
    nba.initial = {0};
    nba.accepting.assign(static_cast<std::size_t>(nba.num_states), 0);

    auto state_id = [&](int node, int counter) { return 1 + node * kk + (counter - 1); };

    if (k == 0) {
        for (int n = 0; n < n_nodes; ++n) nba.accepting[static_cast<std::size_t>(state_id(n, 1))] = 1;
    } else {
        for (int n = 0; n < n_nodes; ++n)
            if (sets[0][static_cast<std::size_t>(n)])
                nba.accepting[static_cast<std::size_t>(state_id(n, 1))] = 1;
    }

    auto advance = [&](int node, int counter) {
        if (k == 0) return 1;
        return sets[static_cast<std::size_t>(counter - 1)][static_cast<std::size_t>(node)]
                   ? counter % k + 1
                   : counter;
    };

    for (int n = 0; n < n_nodes; ++n) {
        const Guard g = tab.guard_of(n);
        if (g.required.intersects(g.forbidden)) continue;  // contradictory label
        for (int m : nodes[static_cast<std::size_t>(n)].incoming) {
            if (m == kInit) {
                nba.transitions.push_back({0, g, state_id(n, 1)});
            } else {
                for (int c = 1; c <= kk; ++c)
                    nba.transitions.push_back({state_id(m, c), g, state_id(n, advance(m, c))});
            }
        }
    }
    std::sort(nba.transitions.begin(), nba.transitions.end(), [](const auto& a, const auto& b) {
        return std::tie(a.from, a.to, a.guard.required, a.guard.forbidden) <
               std::tie(b.from, b.to, b.guard.required, b.guard.forbidden);
    });
    return nba;
}

Nba normalize_and_prune(const Nba& nba) {
    // disjoint regions: a guard demanding two distinct positives never fires
    std::vector<NbaTransition> kept;
    for (const auto& t : nba.transitions) {
        if (t.guard.required.size() >= 2) continue;
        if (t.guard.required.intersects(t.guard.forbidden)) continue;
        kept.push_back(t);
    }

    // reachability from the initial set over the kept transitions
    std::vector<char> reach(static_cast<std::size_t>(nba.num_states), 0);
    std::deque<int> queue;
    for (int q : nba.initial) {
        if (!reach[static_cast<std::size_t>(q)]) {
            reach[static_cast<std::size_t>(q)] = 1;
            queue.push_back(q);
        }
    }
    std::vector<std::vector<int>> by_src(static_cast<std::size_t>(nba.num_states));
    for (std::size_t i = 0; i < kept.size(); ++i)
        by_src[static_cast<std::size_t>(kept[i].from)].push_back(static_cast<int>(i));
    while (!queue.empty()) {
        const int q = queue.front();
        queue.pop_front();
        for (int ti : by_src[static_cast<std::size_t>(q)]) {
            const int to = kept[static_cast<std::size_t>(ti)].to;
            if (!reach[static_cast<std::size_t>(to)]) {
                reach[static_cast<std::size_t>(to)] = 1;
                queue.push_back(to);
            }
        }
    }

    std::vector<int> remap(static_cast<std::size_t>(nba.num_states), -1);
    Nba out;
    for (int q = 0; q < nba.num_states; ++q) {
        if (!reach[static_cast<std::size_t>(q)]) continue;
        remap[static_cast<std::size_t>(q)] = out.num_states++;
        out.accepting.push_back(nba.accepting[static_cast<std::size_t>(q)]);
    }
    for (int q : nba.initial)
        if (remap[static_cast<std::size_t>(q)] >= 0)
            out.initial.push_back(remap[static_cast<std::size_t>(q)]);
    for (const auto& t : kept) {
        const int from = remap[static_cast<std::size_t>(t.from)];
        const int to = remap[static_cast<std::size_t>(t.to)];
        if (from >= 0 && to >= 0) out.transitions.push_back({from, t.guard, to});
    }

    bool any_accepting = false;
    for (char a : out.accepting) any_accepting = any_accepting || a;
    if (!any_accepting)
        throw EmptyAutomatonError("no reachable accepting state: specification is unsatisfiable");
    return out;
}

// ---------------------------------------------------------------------------
// Lasso acceptance: product states (q, position), edges advance the position
// deterministically; acceptance = reachable accepting product state on a
// cycle within the loop positions (iterative Tarjan SCC).

namespace {

struct ProductIndex {
    int n_states;
    int n_pos;
    int encode(int q, int i) const { return q * n_pos + i; }
};

}  // namespace

bool accepts_lasso(const Nba& nba, const LassoWord& w) {
    if (w.period.empty()) throw std::invalid_argument("lasso period must be non-empty");
    const int n_pos = w.length();
    const int loop_start = static_cast<int>(w.prefix.size());
    const ProductIndex pi{nba.num_states, n_pos};
    const auto by_src = nba.transitions_by_source();

    std::vector<char> reach(static_cast<std::size_t>(nba.num_states * n_pos), 0);
    std::deque<int> queue;
    for (int q : nba.initial) {
        const int id = pi.encode(q, 0);
        if (!reach[static_cast<std::size_t>(id)]) {
            reach[static_cast<std::size_t>(id)] = 1;
            queue.push_back(id);
        }
    }
    auto successors = [&](int id, auto&& visit) {
        const int q = id / n_pos;
        const int i = id % n_pos;
        const int j = w.successor(i);
        for (int ti : by_src[static_cast<std::size_t>(q)]) {
            const auto& t = nba.transitions[static_cast<std::size_t>(ti)];
            if (t.guard.satisfied_by(w.at(i))) visit(pi.encode(t.to, j));
        }
    };
    while (!queue.empty()) {
        const int id = queue.front();
        queue.pop_front();
        successors(id, [&](int nxt) {
            if (!reach[static_cast<std::size_t>(nxt)]) {
                reach[static_cast<std::size_t>(nxt)] = 1;
                queue.push_back(nxt);
            }
        });
    }

    // Tarjan over reachable loop-position product states
    const int total = nba.num_states * n_pos;
    std::vector<int> index(static_cast<std::size_t>(total), -1);
    std::vector<int> low(static_cast<std::size_t>(total), 0);
    std::vector<char> on_stack(static_cast<std::size_t>(total), 0);
    std::vector<int> stack;
    int next_index = 0;

    auto in_loop = [&](int id) { return id % n_pos >= loop_start; };

    struct Frame {
        int id;
        std::vector<int> succ;
        std::size_t next = 0;
    };

    for (int root = 0; root < total; ++root) {
        if (!reach[static_cast<std::size_t>(root)] || !in_loop(root)) continue;
        if (index[static_cast<std::size_t>(root)] != -1) continue;

        std::vector<Frame> frames;
        auto push_frame = [&](int id) {
            Frame fr;
            fr.id = id;
            successors(id, [&](int nxt) {
                if (reach[static_cast<std::size_t>(nxt)] && in_loop(nxt)) fr.succ.push_back(nxt);
            });
            index[static_cast<std::size_t>(id)] = low[static_cast<std::size_t>(id)] = next_index++;
            stack.push_back(id);
            on_stack[static_cast<std::size_t>(id)] = 1;
            frames.push_back(std::move(fr));
        };
        push_frame(root);
        while (!frames.empty()) {
            Frame& fr = frames.back();
            if (fr.next < fr.succ.size()) {
                const int nxt = fr.succ[fr.next++];
                if (index[static_cast<std::size_t>(nxt)] == -1) {
                    push_frame(nxt);
                } else if (on_stack[static_cast<std::size_t>(nxt)]) {
                    low[static_cast<std::size_t>(fr.id)] =
                        std::min(low[static_cast<std::size_t>(fr.id)],
                                 index[static_cast<std::size_t>(nxt)]);
                }
                continue;
            }
            // finished this frame
            if (low[static_cast<std::size_t>(fr.id)] == index[static_cast<std::size_t>(fr.id)]) {
                std::vector<int> comp;
                int member;
                do {
                    member = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(member)] = 0;
                    comp.push_back(member);
                } while (member != fr.id);
                bool has_accepting = false;
                for (int id : comp)
                    has_accepting = has_accepting || nba.is_accepting(id / n_pos);
                if (has_accepting) {
                    if (comp.size() >= 2) return true;
                    // singleton: accepting only with a self-edge
                    bool self_edge = false;
                    successors(comp[0], [&](int nxt) { self_edge = self_edge || nxt == comp[0]; });
                    if (self_edge) return true;
                }
            }
            const int done = fr.id;
            frames.pop_back();
            if (!frames.empty()) {
                Frame& parent = frames.back();
                low[static_cast<std::size_t>(parent.id)] =
                    std::min(low[static_cast<std::size_t>(parent.id)],
                             low[static_cast<std::size_t>(done)]);
            }
        }
    }
    return false;
}

std::string dump(const Nba& nba, const AtomTable& table) {
    std::ostringstream os;
    auto state_name = [&](int q) {
        std::string s = "q" + std::to_string(q);
        if (nba.is_accepting(q)) s += "*";
        return s;
    };
    os << "initial:";
    for (int q : nba.initial) os << " " << state_name(q);
    os << "\n";
    std::vector<NbaTransition> ts = nba.transitions;
    std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
        return std::tie(a.from, a.to, a.guard.required, a.guard.forbidden) <
               std::tie(b.from, b.to, b.guard.required, b.guard.forbidden);
    });
    for (const auto& t : ts) {
        os << state_name(t.from) << " -[";
        bool wrote = false;
        for (LabelId id : t.guard.required.to_vector()) {
            if (wrote) os << ",";
            os << "+" << table.name(id);
            wrote = true;
        }
        if (!t.guard.required.empty() && !t.guard.forbidden.empty()) os << " / ";
        bool first = true;
        for (LabelId id : t.guard.forbidden.to_vector()) {
            if (!first) os << ",";
            os << "-" << table.name(id);
            first = false;
            wrote = true;
        }
        if (!wrote) os << "true";
        os << "]-> " << state_name(t.to) << "\n";
    }
    return os.str();
}

}  // namespace lasso
