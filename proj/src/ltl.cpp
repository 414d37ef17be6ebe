#include "lassoplan/ltl.hpp"

#include <cctype>
#include <sstream>

namespace lasso {

namespace {

FormulaPtr node(FormulaKind k, LabelId atom, FormulaPtr l, FormulaPtr r) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->atom = atom;
    f->lhs = std::move(l);
    f->rhs = std::move(r);
    return f;
}

}  // namespace

FormulaPtr Formula::make_true() { return node(FormulaKind::True, -1, nullptr, nullptr); }
FormulaPtr Formula::make_false() { return node(FormulaKind::False, -1, nullptr, nullptr); }
FormulaPtr Formula::make_atom(LabelId id) { return node(FormulaKind::Atom, id, nullptr, nullptr); }
FormulaPtr Formula::make_not(FormulaPtr f) { return node(FormulaKind::Not, -1, std::move(f), nullptr); }
FormulaPtr Formula::make_and(FormulaPtr a, FormulaPtr b) {
    return node(FormulaKind::And, -1, std::move(a), std::move(b));
}
FormulaPtr Formula::make_or(FormulaPtr a, FormulaPtr b) {
    return node(FormulaKind::Or, -1, std::move(a), std::move(b));
}
FormulaPtr Formula::make_until(FormulaPtr a, FormulaPtr b) {
    return node(FormulaKind::Until, -1, std::move(a), std::move(b));
}
FormulaPtr Formula::make_release(FormulaPtr a, FormulaPtr b) {
    return node(FormulaKind::Release, -1, std::move(a), std::move(b));
}
FormulaPtr Formula::make_eventually(FormulaPtr f) { return make_until(make_true(), std::move(f)); }
FormulaPtr Formula::make_always(FormulaPtr f) { return make_release(make_false(), std::move(f)); }

bool Formula::equals(const Formula& o) const {
    if (kind != o.kind || atom != o.atom) return false;
    if (static_cast<bool>(lhs) != static_cast<bool>(o.lhs)) return false;
    if (static_cast<bool>(rhs) != static_cast<bool>(o.rhs)) return false;
    if (lhs && !lhs->equals(*o.lhs)) return false;
    if (rhs && !rhs->equals(*o.rhs)) return false;
    return true;
}

LabelSet Formula::atoms() const {
    LabelSet out;
    if (kind == FormulaKind::Atom) {
        out.insert(atom);
        return out;
    }
    if (lhs) out = LabelSet(out.bits() | lhs->atoms().bits());
    if (rhs) out = LabelSet(out.bits() | rhs->atoms().bits());
    return out;
}

std::string Formula::to_string(const AtomTable& table) const {
    std::ostringstream os;
    switch (kind) {
        case FormulaKind::True: os << "true"; break;
        case FormulaKind::False: os << "false"; break;
        case FormulaKind::Atom: os << table.name(atom); break;
        case FormulaKind::Not: os << "!(" << lhs->to_string(table) << ")"; break;
        case FormulaKind::And:
            os << "(" << lhs->to_string(table) << " & " << rhs->to_string(table) << ")";
            break;
        case FormulaKind::Or:
            os << "(" << lhs->to_string(table) << " | " << rhs->to_string(table) << ")";
            break;
        case FormulaKind::Until:
            os << "(" << lhs->to_string(table) << " U " << rhs->to_string(table) << ")";
            break;
        case FormulaKind::Release:
            os << "(" << lhs->to_string(table) << " R " << rhs->to_string(table) << ")";
            break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Atom, True, False, Not, And, Or, Impl, Until, Ev, Alw, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return cur_; }

    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        cur_.pos = i_;
        if (i_ >= s_.size()) {
            cur_.kind = Tok::End;
            cur_.text.clear();
            return;
        }
        const char c = s_[i_];
        switch (c) {
            case '!': cur_ = {Tok::Not, "!", i_++}; return;
            case '&': cur_ = {Tok::And, "&", i_++}; return;
            case '|': cur_ = {Tok::Or, "|", i_++}; return;
            case '(': cur_ = {Tok::LParen, "(", i_++}; return;
            case ')': cur_ = {Tok::RParen, ")", i_++}; return;
            case 'U': cur_ = {Tok::Until, "U", i_++}; return;
            case 'F': cur_ = {Tok::Ev, "F", i_++}; return;
            case 'G': cur_ = {Tok::Alw, "G", i_++}; return;
            case '-':
                if (i_ + 1 < s_.size() && s_[i_ + 1] == '>') {
                    cur_ = {Tok::Impl, "->", i_};
                    i_ += 2;
                    return;
                }
                throw ParseError("expected '->'", i_);
            default: break;
        }
        if (std::islower(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < s_.size() &&
                   (std::islower(static_cast<unsigned char>(s_[j])) ||
                    std::isdigit(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
                ++j;
            const std::string word = s_.substr(i_, j - i_);
            const std::size_t at = i_;
            i_ = j;
            if (word == "true") {
                cur_ = {Tok::True, word, at};
            } else if (word == "false") {
                cur_ = {Tok::False, word, at};
            } else {
                cur_ = {Tok::Atom, word, at};
            }
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", i_);
    }

    const std::string& s_;
    std::size_t i_ = 0;
    Token cur_{};
};

class Parser {
public:
    Parser(const std::string& text, AtomTable& table, bool allow_new)
        : lex_(text), table_(table), allow_new_(allow_new) {}

    FormulaPtr parse() {
        FormulaPtr f = impl();
        const Token& t = lex_.peek();
        if (t.kind != Tok::End) throw ParseError("unexpected trailing input", t.pos);
        return f;
    }

private:
    // impl := or ('->' impl)?        right-associative, lowest precedence
    FormulaPtr impl() {
        FormulaPtr left = disj();
        if (lex_.peek().kind == Tok::Impl) {
            lex_.take();
            FormulaPtr right = impl();
            return Formula::make_or(Formula::make_not(std::move(left)), std::move(right));
        }
        return left;
    }

    FormulaPtr disj() {
        FormulaPtr f = conj();
        while (lex_.peek().kind == Tok::Or) {
            lex_.take();
            f = Formula::make_or(std::move(f), conj());
        }
        return f;
    }

    FormulaPtr conj() {
        FormulaPtr f = until();
        while (lex_.peek().kind == Tok::And) {
            lex_.take();
            f = Formula::make_and(std::move(f), until());
        }
        return f;
    }

    // until := unary ('U' until)?    right-associative, binds tighter than &
    FormulaPtr until() {
        FormulaPtr left = unary();
        if (lex_.peek().kind == Tok::Until) {
            lex_.take();
            return Formula::make_until(std::move(left), until());
        }
        return left;
    }

    FormulaPtr unary() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::Not: lex_.take(); return Formula::make_not(unary());
            case Tok::Ev: lex_.take(); return Formula::make_eventually(unary());
            case Tok::Alw: lex_.take(); return Formula::make_always(unary());
            default: return primary();
        }
    }

    FormulaPtr primary() {
        Token t = lex_.take();
        switch (t.kind) {
            case Tok::True: return Formula::make_true();
            case Tok::False: return Formula::make_false();
            case Tok::Atom: {
                if (!allow_new_) {
                    const LabelId id = table_.lookup(t.text);
                    if (id < 0) throw ParseError("unknown atom '" + t.text + "'", t.pos);
                    return Formula::make_atom(id);
                }
                return Formula::make_atom(table_.intern(t.text));
            }
            case Tok::LParen: {
                FormulaPtr f = impl();
                Token close = lex_.take();
                if (close.kind != Tok::RParen) throw ParseError("expected ')'", close.pos);
                return f;
            }
            case Tok::End: throw ParseError("unexpected end of input", t.pos);
            default: throw ParseError("unexpected token '" + t.text + "'", t.pos);
        }
    }

    Lexer lex_;
    AtomTable& table_;
    bool allow_new_;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, AtomTable& table, bool allow_new_atoms) {
    return Parser(text, table, allow_new_atoms).parse();
}

// ---------------------------------------------------------------------------
// Negation normal form

namespace {

FormulaPtr nnf(const FormulaPtr& f, bool negated) {
    switch (f->kind) {
        case FormulaKind::True:
            return negated ? Formula::make_false() : Formula::make_true();
        case FormulaKind::False:
            return negated ? Formula::make_true() : Formula::make_false();
        case FormulaKind::Atom:
            return negated ? Formula::make_not(Formula::make_atom(f->atom))
                           : Formula::make_atom(f->atom);
        case FormulaKind::Not:
            return nnf(f->lhs, !negated);
        case FormulaKind::And:
            return negated ? Formula::make_or(nnf(f->lhs, true), nnf(f->rhs, true))
                           : Formula::make_and(nnf(f->lhs, false), nnf(f->rhs, false));
        case FormulaKind::Or:
            return negated ? Formula::make_and(nnf(f->lhs, true), nnf(f->rhs, true))
                           : Formula::make_or(nnf(f->lhs, false), nnf(f->rhs, false));
        case FormulaKind::Until:
            return negated ? Formula::make_release(nnf(f->lhs, true), nnf(f->rhs, true))
                           : Formula::make_until(nnf(f->lhs, false), nnf(f->rhs, false));
        case FormulaKind::Release:
            return negated ? Formula::make_until(nnf(f->lhs, true), nnf(f->rhs, true))
                           : Formula::make_release(nnf(f->lhs, false), nnf(f->rhs, false));
    }
    throw std::logic_error("unreachable");
}

}  // namespace

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf(f, false); }

// ---------------------------------------------------------------------------
// Lasso evaluation
//
// Positions 0..P-1 cover the prefix, P..P+R-1 the period; successor of the
// last position wraps to P. Boolean connectives are pointwise; Until is the
// least and Release the greatest fixpoint of the usual one-step expansion,
// iterated over the loop positions until stable (at most R rounds), then
// propagated backward through the prefix.

namespace {

using SatVec = std::vector<char>;

SatVec eval_rec(const Formula& f, const LassoWord& w) {
    const int n = w.length();
    const int p = static_cast<int>(w.prefix.size());
    SatVec sat(static_cast<std::size_t>(n), 0);

    auto pointwise = [&](auto&& op) {
        const SatVec a = eval_rec(*f.lhs, w);
        const SatVec b = f.rhs ? eval_rec(*f.rhs, w) : SatVec();
        for (int i = 0; i < n; ++i)
            sat[static_cast<std::size_t>(i)] =
                op(a[static_cast<std::size_t>(i)],
                   f.rhs ? b[static_cast<std::size_t>(i)] : char(0));
    };

    switch (f.kind) {
        case FormulaKind::True:
            std::fill(sat.begin(), sat.end(), 1);
            return sat;
        case FormulaKind::False:
            return sat;
        case FormulaKind::Atom:
            for (int i = 0; i < n; ++i)
                sat[static_cast<std::size_t>(i)] = w.at(i).contains(f.atom) ? 1 : 0;
            return sat;
        case FormulaKind::Not:
            pointwise([](char a, char) { return !a; });
            return sat;
        case FormulaKind::And:
            pointwise([](char a, char b) { return a && b; });
            return sat;
        case FormulaKind::Or:
            pointwise([](char a, char b) { return a || b; });
            return sat;
        case FormulaKind::Until:
        case FormulaKind::Release: {
            const SatVec a = eval_rec(*f.lhs, w);
            const SatVec b = eval_rec(*f.rhs, w);
            const bool is_until = f.kind == FormulaKind::Until;
            auto step = [&](int i) -> char {
                const auto si = static_cast<std::size_t>(i);
                const char nxt = sat[static_cast<std::size_t>(w.successor(i))];
                return is_until ? (b[si] || (a[si] && nxt)) : (b[si] && (a[si] || nxt));
            };
            // loop part: least fixpoint starts false, greatest starts true
            for (int i = p; i < n; ++i) sat[static_cast<std::size_t>(i)] = is_until ? 0 : 1;
            bool changed = true;
            while (changed) {
                changed = false;
                for (int i = n - 1; i >= p; --i) {
                    const char v = step(i);
                    if (v != sat[static_cast<std::size_t>(i)]) {
                        sat[static_cast<std::size_t>(i)] = v;
                        changed = true;
                    }
                }
            }
            // prefix: single backward pass
            for (int i = p - 1; i >= 0; --i) sat[static_cast<std::size_t>(i)] = step(i);
            return sat;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

bool eval_lasso(const FormulaPtr& f, const LassoWord& w) {
    if (w.period.empty()) throw std::invalid_argument("lasso period must be non-empty");
    return eval_rec(*f, w)[0] != 0;
}

}  // namespace lasso
