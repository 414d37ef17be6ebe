#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lassoplan/common.hpp"
#include "lassoplan/ltl.hpp"

namespace lasso {

// ---------------------------------------------------------------------------
// Transition guards in the normalized form used for planning: a conjunction
// of literals, stored as the set of required positive labels plus a set of
// forbidden labels. After normalize_and_prune every guard has at most one
// required label (disjoint-region semantics); translate() may emit more.

struct Guard {
    LabelSet required;
    LabelSet forbidden;

    bool satisfied_by(const LabelSet& sigma) const {
        return required.subset_of(sigma) && !sigma.intersects(forbidden);
    }

    // at most one positive after pruning; call only on normalized automata
    std::optional<LabelId> required_label() const {
        if (required.empty()) return std::nullopt;
        return required.to_vector().front();
    }

    bool unconstrained() const { return required.empty() && forbidden.empty(); }

    bool operator==(const Guard& o) const {
        return required == o.required && forbidden == o.forbidden;
    }
};

struct NbaTransition {
    int from;
    Guard guard;
    int to;
};

// Nondeterministic Buchi automaton over label sets.
struct Nba {
    int num_states = 0;
    std::vector<int> initial;
    std::vector<NbaTransition> transitions;
    std::vector<char> accepting;  // indexed by state

    bool is_accepting(int q) const { return accepting[static_cast<std::size_t>(q)] != 0; }

    std::vector<std::vector<int>> transitions_by_source() const;
};

// Tableau translation; input must be in negation normal form. Guards come out
// as literal conjunctions (contradictory ones are dropped during expansion);
// multiple required labels survive here so the construction is exactly
// language-preserving on arbitrary words.
Nba translate(const FormulaPtr& f);

// Drops transitions requiring two or more distinct positive labels (regions
// are pairwise disjoint, so they can never fire), then removes states that
// are unreachable from the initial set together with their transitions.
// Throws EmptyAutomatonError when no accepting state survives.
Nba normalize_and_prune(const Nba& nba);

// True iff some run over prefix.period^omega visits an accepting state
// infinitely often: synchronous product with the word's position structure,
// cycle detection through (accepting state, period position) via SCCs.
bool accepts_lasso(const Nba& nba, const LassoWord& w);

// One transition per line, `q -[+req / -f1,-f2]-> q'`, accepting states
// suffixed `*`; stable order for golden tests.
std::string dump(const Nba& nba, const AtomTable& table);

}  // namespace lasso
