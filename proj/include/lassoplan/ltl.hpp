#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lassoplan/common.hpp"

namespace lasso {

// ---------------------------------------------------------------------------
// LTL without "next": abstract syntax plus an exact evaluator on ultimately
// periodic (lasso) words. F, G and -> are desugared at parse time, so the
// core only ever sees {true, false, atom, !, &, |, U, R}.

enum class FormulaKind { True, False, Atom, Not, And, Or, Until, Release };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
    FormulaKind kind;
    LabelId atom = -1;    // valid when kind == Atom
    FormulaPtr lhs;       // unary operand or left child
    FormulaPtr rhs;       // right child of binary operators

    static FormulaPtr make_true();
    static FormulaPtr make_false();
    static FormulaPtr make_atom(LabelId id);
    static FormulaPtr make_not(FormulaPtr f);
    static FormulaPtr make_and(FormulaPtr a, FormulaPtr b);
    static FormulaPtr make_or(FormulaPtr a, FormulaPtr b);
    static FormulaPtr make_until(FormulaPtr a, FormulaPtr b);
    static FormulaPtr make_release(FormulaPtr a, FormulaPtr b);
    // F f = true U f,  G f = false R f
    static FormulaPtr make_eventually(FormulaPtr f);
    static FormulaPtr make_always(FormulaPtr f);

    bool is_literal() const {
        return kind == FormulaKind::True || kind == FormulaKind::False ||
               kind == FormulaKind::Atom ||
               (kind == FormulaKind::Not && lhs->kind == FormulaKind::Atom);
    }

    // structural equality
    bool equals(const Formula& o) const;

    // atoms appearing anywhere in the formula
    LabelSet atoms() const;

    std::string to_string(const AtomTable& table) const;
};

// Parses one formula. Atoms match [a-z][a-z0-9_]*; `true`/`false` reserved;
// operators ! & | -> U F G with precedence unary > U > & > | > -> and U, ->
// right-associative. With allow_new_atoms=false unknown atoms are an error.
FormulaPtr parse_formula(const std::string& text, AtomTable& table, bool allow_new_atoms = true);

// Negation normal form: Not appears only directly above Atom.
FormulaPtr to_nnf(const FormulaPtr& f);

// ---------------------------------------------------------------------------
// Lasso words: prefix . period^omega, each position a label set.

struct LassoWord {
    std::vector<LabelSet> prefix;
    std::vector<LabelSet> period;  // never empty

    int length() const { return static_cast<int>(prefix.size() + period.size()); }

    const LabelSet& at(int pos) const {
        const int p = static_cast<int>(prefix.size());
        return pos < p ? prefix[static_cast<std::size_t>(pos)]
                       : period[static_cast<std::size_t>(pos - p)];
    }

    // position structure: prefix runs forward, last period position wraps
    int successor(int pos) const {
        return pos + 1 < length() ? pos + 1 : static_cast<int>(prefix.size());
    }
};

// Exact LTL satisfaction of f on prefix.period^omega: bottom-up positional
// fixpoint over the finite prefix plus one period copy (Until as least,
// Release as greatest fixpoint on the loop).
bool eval_lasso(const FormulaPtr& f, const LassoWord& w);

}  // namespace lasso
