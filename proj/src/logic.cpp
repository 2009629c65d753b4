#include "sforcer/logic.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace sforcer {

// -------------------------------------------------------------------------
// LanguageSig
// -------------------------------------------------------------------------

void LanguageSig::validate() const {
    for (const auto& [n, a] : functions) {
        if (a < 1) throw ValidationError("function '" + n + "' has arity " + std::to_string(a));
        if (relations.count(n) || constants.count(n))
            throw ValidationError("symbol '" + n + "' declared in more than one name space");
    }
    for (const auto& [n, a] : relations) {
        if (a < 1) throw ValidationError("relation '" + n + "' has arity " + std::to_string(a));
        if (constants.count(n))
            throw ValidationError("symbol '" + n + "' declared in more than one name space");
    }
}

// -------------------------------------------------------------------------
// Terms
// -------------------------------------------------------------------------

namespace {

void term_repr(const Term& t, std::string& out) {
    switch (t.kind) {
    case Term::Kind::Variable:
        out += t.name;
        break;
    case Term::Kind::Constant:
        out += '\'';
        out += t.name;
        break;
    case Term::Kind::Apply:
        out += '(';
        out += t.name;
        for (const auto& a : t.args) {
            out += ' ';
            term_repr(a, out);
        }
        out += ')';
        break;
    }
}

std::string term_repr(const Term& t) {
    std::string s;
    term_repr(t, s);
    return s;
}

} // namespace

bool Term::operator<(const Term& o) const { return term_repr(*this) < term_repr(o); }

std::string Term::to_string() const {
    if (kind != Kind::Apply) return name;
    std::string s = name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ", ";
        s += args[i].to_string();
    }
    return s + ")";
}

// -------------------------------------------------------------------------
// Formula construction and interning
// -------------------------------------------------------------------------

namespace {

std::mutex g_intern_mutex;
std::unordered_map<std::string, int>& intern_table() {
    static std::unordered_map<std::string, int> t;
    return t;
}

int intern_repr(const std::string& repr) {
    std::lock_guard<std::mutex> lock(g_intern_mutex);
    auto& t = intern_table();
    auto it = t.find(repr);
    if (it != t.end()) return it->second;
    int id = static_cast<int>(t.size());
    t.emplace(repr, id);
    return id;
}

std::string node_repr(const FormulaNode& n) {
    std::string s = "(";
    switch (n.kind) {
    case FormulaKind::Equality:
        s += "= ";
        s += term_repr(n.terms[0]);
        s += ' ';
        s += term_repr(n.terms[1]);
        break;
    case FormulaKind::Relation:
        s += n.name;
        for (const auto& t : n.terms) {
            s += ' ';
            s += term_repr(t);
        }
        break;
    case FormulaKind::And:
        s += "& " + n.children[0].repr() + " " + n.children[1].repr();
        break;
    case FormulaKind::Or:
        s += "| " + n.children[0].repr() + " " + n.children[1].repr();
        break;
    case FormulaKind::Not:
        s += "! " + n.children[0].repr();
        break;
    case FormulaKind::Implies:
        s += "-> " + n.children[0].repr() + " " + n.children[1].repr();
        break;
    case FormulaKind::Forall:
        s += "@A " + n.name + " " + n.children[0].repr();
        break;
    case FormulaKind::Exists:
        s += "@E " + n.name + " " + n.children[0].repr();
        break;
    }
    s += ')';
    return s;
}

} // namespace

Formula Formula::make(FormulaNode n) {
    n.repr = node_repr(n);
    n.id = intern_repr(n.repr);
    return Formula(std::make_shared<const FormulaNode>(std::move(n)));
}

Formula Formula::equality(Term lhs, Term rhs) {
    FormulaNode n;
    n.kind = FormulaKind::Equality;
    n.terms = {std::move(lhs), std::move(rhs)};
    return make(std::move(n));
}

Formula Formula::relation(std::string name, std::vector<Term> args) {
    FormulaNode n;
    n.kind = FormulaKind::Relation;
    n.name = std::move(name);
    n.terms = std::move(args);
    return make(std::move(n));
}

Formula Formula::conj(Formula a, Formula b) {
    FormulaNode n;
    n.kind = FormulaKind::And;
    n.children = {std::move(a), std::move(b)};
    return make(std::move(n));
}

Formula Formula::disj(Formula a, Formula b) {
    FormulaNode n;
    n.kind = FormulaKind::Or;
    n.children = {std::move(a), std::move(b)};
    return make(std::move(n));
}

Formula Formula::negation(Formula a) {
    FormulaNode n;
    n.kind = FormulaKind::Not;
    n.children = {std::move(a)};
    return make(std::move(n));
}

Formula Formula::implies(Formula a, Formula b) {
    FormulaNode n;
    n.kind = FormulaKind::Implies;
    n.children = {std::move(a), std::move(b)};
    return make(std::move(n));
}

Formula Formula::forall(std::string var, Formula body) {
    FormulaNode n;
    n.kind = FormulaKind::Forall;
    n.name = std::move(var);
    n.children = {std::move(body)};
    return make(std::move(n));
}

Formula Formula::exists(std::string var, Formula body) {
    FormulaNode n;
    n.kind = FormulaKind::Exists;
    n.name = std::move(var);
    n.children = {std::move(body)};
    return make(std::move(n));
}

int Formula::size() const {
    if (is_atom()) return 1;
    int s = 1;
    for (std::size_t i = 0; i < child_count(); ++i) s += child(i).size();
    return s;
}

int Formula::quantifier_count() const {
    int s = is_quantifier() ? 1 : 0;
    if (!is_atom())
        for (std::size_t i = 0; i < child_count(); ++i) s += child(i).quantifier_count();
    return s;
}

int Formula::binary_count() const {
    if (is_atom()) return 0;
    int s = (kind() == FormulaKind::And || kind() == FormulaKind::Or ||
             kind() == FormulaKind::Implies)
                ? 1
                : 0;
    for (std::size_t i = 0; i < child_count(); ++i) s += child(i).binary_count();
    return s;
}

// -------------------------------------------------------------------------
// Printing
// -------------------------------------------------------------------------

namespace {

// Precedence: -> (1, right assoc) < | (2) < & (3) < ~ (4) < atoms.
// Quantifiers swallow everything to their right, so they print without
// parentheses only in rightmost position.
void print_formula(const Formula& f, int parent_prec, bool rightmost, std::string& out) {
    switch (f.kind()) {
    case FormulaKind::Equality:
        out += f.terms()[0].to_string() + " = " + f.terms()[1].to_string();
        return;
    case FormulaKind::Relation: {
        out += f.name() + "(";
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
            if (i) out += ", ";
            out += f.terms()[i].to_string();
        }
        out += ')';
        return;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
        bool parens = !rightmost;
        if (parens) out += '(';
        out += (f.kind() == FormulaKind::Forall ? "forall " : "exists ");
        out += f.name() + ". ";
        print_formula(f.child(0), 0, true, out);
        if (parens) out += ')';
        return;
    }
    case FormulaKind::Not: {
        bool parens = parent_prec > 4;
        if (parens) out += '(';
        out += '~';
        print_formula(f.child(0), 4, rightmost && !parens, out);
        if (parens) out += ')';
        return;
    }
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies: {
        int prec = f.kind() == FormulaKind::And ? 3 : (f.kind() == FormulaKind::Or ? 2 : 1);
        const char* op = f.kind() == FormulaKind::And ? " & "
                                                      : (f.kind() == FormulaKind::Or ? " | " : " -> ");
        bool parens = parent_prec > prec ||
                      (parent_prec == prec && f.kind() == FormulaKind::Implies);
        if (parens) out += '(';
        // & and | are left-associative; -> is right-associative.
        int lp = (f.kind() == FormulaKind::Implies) ? prec + 1 : prec;
        int rp = (f.kind() == FormulaKind::Implies) ? prec : prec + 1;
        print_formula(f.child(0), lp, false, out);
        out += op;
        print_formula(f.child(1), rp, rightmost && !parens, out);
        if (parens) out += ')';
        return;
    }
    }
}

} // namespace

std::string Formula::to_string() const {
    std::string s;
    print_formula(*this, 0, true, s);
    return s;
}

// -------------------------------------------------------------------------
// Tokenizer
// -------------------------------------------------------------------------

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Eq, Tilde, Amp, Bar, Arrow, Forall, Exists, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto isid0 = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    auto isid = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (isid0(c)) {
            std::size_t j = i;
            while (j < s.size() && isid(s[j])) ++j;
            std::string w = s.substr(i, j - i);
            i = j;
            if (w == "forall")
                out.push_back({Tok::Forall, w, start});
            else if (w == "exists")
                out.push_back({Tok::Exists, w, start});
            else
                out.push_back({Tok::Ident, w, start});
            continue;
        }
        switch (c) {
        case '(': out.push_back({Tok::LParen, "(", start}); ++i; break;
        case ')': out.push_back({Tok::RParen, ")", start}); ++i; break;
        case ',': out.push_back({Tok::Comma, ",", start}); ++i; break;
        case '.': out.push_back({Tok::Dot, ".", start}); ++i; break;
        case '=': out.push_back({Tok::Eq, "=", start}); ++i; break;
        case '~': out.push_back({Tok::Tilde, "~", start}); ++i; break;
        case '&': out.push_back({Tok::Amp, "&", start}); ++i; break;
        case '|': out.push_back({Tok::Bar, "|", start}); ++i; break;
        case '-':
            if (i + 1 < s.size() && s[i + 1] == '>') {
                out.push_back({Tok::Arrow, "->", start});
                i += 2;
                break;
            }
            throw ParseError("unexpected character '-'", start);
        default:
            throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

// -------------------------------------------------------------------------
// Recursive-descent parser
// -------------------------------------------------------------------------

class Parser {
public:
    Parser(std::vector<Token> toks, const LanguageSig& sig) : toks_(std::move(toks)), sig_(sig) {
        for (const auto& t : toks_)
            if (t.kind == Tok::Ident) used_names_.insert(t.text);
    }

    Formula run() {
        Formula f = parse_implies();
        expect(Tok::End, "end of input");
        return f;
    }

private:
    std::vector<Token> toks_;
    const LanguageSig& sig_;
    std::size_t pos_ = 0;
    // surface binder name -> stack of hygienic names currently in scope
    std::map<std::string, std::vector<std::string>> scope_;
    std::set<std::string> in_scope_names_;
    std::set<std::string> used_names_;

    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(Tok k, const std::string& what) {
        if (!accept(k))
            throw ParseError("expected " + what + ", found '" + peek().text + "'", peek().pos);
    }

    Formula parse_implies() {
        Formula lhs = parse_or();
        if (accept(Tok::Arrow)) return Formula::implies(std::move(lhs), parse_implies());
        return lhs;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (accept(Tok::Bar)) f = Formula::disj(std::move(f), parse_and());
        return f;
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (accept(Tok::Amp)) f = Formula::conj(std::move(f), parse_unary());
        return f;
    }

    Formula parse_unary() {
        if (accept(Tok::Tilde)) return Formula::negation(parse_unary());
        if (peek().kind == Tok::Forall || peek().kind == Tok::Exists) return parse_quantifier();
        return parse_atom();
    }

    Formula parse_quantifier() {
        Token q = next();
        Token v = next();
        if (v.kind != Tok::Ident)
            throw ParseError("expected a variable after '" + q.text + "'", v.pos);
        if (sig_.has_function(v.text) || sig_.has_relation(v.text) || sig_.has_constant(v.text))
            throw ParseError("cannot bind declared symbol '" + v.text + "'", v.pos);
        expect(Tok::Dot, "'.'");

        std::string hygienic = v.text;
        while (in_scope_names_.count(hygienic) || (hygienic != v.text && used_names_.count(hygienic)))
            hygienic += '\'';

        scope_[v.text].push_back(hygienic);
        in_scope_names_.insert(hygienic);
        Formula body = parse_implies();  // quantifiers extend maximally right
        in_scope_names_.erase(hygienic);
        scope_[v.text].pop_back();

        return q.kind == Tok::Forall ? Formula::forall(hygienic, std::move(body))
                                     : Formula::exists(hygienic, std::move(body));
    }

    Formula parse_atom() {
        if (accept(Tok::LParen)) {
            Formula f = parse_implies();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (peek().kind == Tok::Ident && sig_.has_relation(peek().text)) {
            Token r = next();
            expect(Tok::LParen, "'(' after relation name");
            std::vector<Term> args = parse_term_list();
            expect(Tok::RParen, "')'");
            int arity = sig_.relations.at(r.text);
            if (static_cast<int>(args.size()) != arity)
                throw ParseError("relation '" + r.text + "' expects " + std::to_string(arity) +
                                     " arguments, got " + std::to_string(args.size()),
                                 r.pos);
            return Formula::relation(r.text, std::move(args));
        }
        Term lhs = parse_term();
        expect(Tok::Eq, "'='");
        Term rhs = parse_term();
        return Formula::equality(std::move(lhs), std::move(rhs));
    }

    std::vector<Term> parse_term_list() {
        std::vector<Term> out;
        out.push_back(parse_term());
        while (accept(Tok::Comma)) out.push_back(parse_term());
        return out;
    }

    Term parse_term() {
        Token t = next();
        if (t.kind != Tok::Ident)
            throw ParseError("expected a term, found '" + t.text + "'", t.pos);
        if (sig_.has_function(t.text)) {
            expect(Tok::LParen, "'(' after function name");
            std::vector<Term> args = parse_term_list();
            expect(Tok::RParen, "')'");
            int arity = sig_.functions.at(t.text);
            if (static_cast<int>(args.size()) != arity)
                throw ParseError("function '" + t.text + "' expects " + std::to_string(arity) +
                                     " arguments, got " + std::to_string(args.size()),
                                 t.pos);
            return Term::apply(t.text, std::move(args));
        }
        if (sig_.has_relation(t.text))
            throw ParseError("relation '" + t.text + "' used in term position", t.pos);
        if (sig_.has_constant(t.text)) return Term::constant(t.text);
        // variable; shadowed binders resolve to their hygienic name
        auto it = scope_.find(t.text);
        if (it != scope_.end() && !it->second.empty()) return Term::variable(it->second.back());
        return Term::variable(t.text);
    }
};

} // namespace

Formula parse_formula(const std::string& text, const LanguageSig& sig) {
    sig.validate();
    Parser p(tokenize(text), sig);
    return p.run();
}

// -------------------------------------------------------------------------
// Static checks and analysis
// -------------------------------------------------------------------------

namespace {

void check_term(const Term& t, const LanguageSig& sig) {
    switch (t.kind) {
    case Term::Kind::Variable:
        if (sig.has_function(t.name) || sig.has_relation(t.name) || sig.has_constant(t.name))
            throw ValidationError("variable '" + t.name + "' collides with a declared symbol");
        return;
    case Term::Kind::Constant:
        if (!sig.has_constant(t.name))
            throw ValidationError("unknown constant '" + t.name + "'");
        return;
    case Term::Kind::Apply: {
        auto it = sig.functions.find(t.name);
        if (it == sig.functions.end())
            throw ValidationError("unknown function '" + t.name + "'");
        if (static_cast<int>(t.args.size()) != it->second)
            throw ValidationError("function '" + t.name + "' arity mismatch");
        for (const auto& a : t.args) check_term(a, sig);
        return;
    }
    }
}

void check_rec(const Formula& f, const LanguageSig& sig, std::set<std::string>& bound) {
    switch (f.kind()) {
    case FormulaKind::Equality:
        check_term(f.terms()[0], sig);
        check_term(f.terms()[1], sig);
        return;
    case FormulaKind::Relation: {
        auto it = sig.relations.find(f.name());
        if (it == sig.relations.end())
            throw ValidationError("unknown relation '" + f.name() + "'");
        if (static_cast<int>(f.terms().size()) != it->second)
            throw ValidationError("relation '" + f.name() + "' arity mismatch");
        for (const auto& t : f.terms()) check_term(t, sig);
        return;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
        if (bound.count(f.name()))
            throw ValidationError("binder '" + f.name() + "' shadows an enclosing binder");
        bound.insert(f.name());
        check_rec(f.child(0), sig, bound);
        bound.erase(f.name());
        return;
    }
    default:
        for (std::size_t i = 0; i < f.child_count(); ++i) check_rec(f.child(i), sig, bound);
        return;
    }
}

void term_vars(const Term& t, std::vector<std::string>& order, std::set<std::string>& seen,
               const std::set<std::string>& bound) {
    if (t.kind == Term::Kind::Variable) {
        if (!bound.count(t.name) && !seen.count(t.name)) {
            seen.insert(t.name);
            order.push_back(t.name);
        }
        return;
    }
    for (const auto& a : t.args) term_vars(a, order, seen, bound);
}

void free_vars_rec(const Formula& f, std::vector<std::string>& order, std::set<std::string>& seen,
                   std::set<std::string>& bound) {
    if (f.is_atom()) {
        for (const auto& t : f.terms()) term_vars(t, order, seen, bound);
        return;
    }
    if (f.is_quantifier()) {
        bool fresh = bound.insert(f.name()).second;
        free_vars_rec(f.child(0), order, seen, bound);
        if (fresh) bound.erase(f.name());
        return;
    }
    for (std::size_t i = 0; i < f.child_count(); ++i) free_vars_rec(f.child(i), order, seen, bound);
}

bool positive_rec(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::Not:
    case FormulaKind::Implies:
    case FormulaKind::Forall:
        return false;
    case FormulaKind::Equality:
    case FormulaKind::Relation:
        return true;
    default:
        for (std::size_t i = 0; i < f.child_count(); ++i)
            if (!positive_rec(f.child(i))) return false;
        return true;
    }
}

} // namespace

void check_formula(const Formula& f, const LanguageSig& sig) {
    sig.validate();
    std::set<std::string> bound;
    check_rec(f, sig, bound);
}

FormulaAnalysis analyze_formula(const Formula& f) {
    FormulaAnalysis out;
    std::set<std::string> seen, bound;
    free_vars_rec(f, out.free_vars, seen, bound);
    out.is_positive = positive_rec(f);
    return out;
}

Formula godel_translate(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::Equality:
    case FormulaKind::Relation:
        return Formula::negation(Formula::negation(f));
    case FormulaKind::And:
        return Formula::conj(godel_translate(f.child(0)), godel_translate(f.child(1)));
    case FormulaKind::Or:
        return Formula::negation(Formula::conj(Formula::negation(godel_translate(f.child(0))),
                                               Formula::negation(godel_translate(f.child(1)))));
    case FormulaKind::Not:
        return Formula::negation(godel_translate(f.child(0)));
    case FormulaKind::Implies:
        // Homomorphic clause; kept in one spot so it can be swapped.
        return Formula::implies(godel_translate(f.child(0)), godel_translate(f.child(1)));
    case FormulaKind::Forall:
        return Formula::forall(f.name(), godel_translate(f.child(0)));
    case FormulaKind::Exists:
        return Formula::negation(
            Formula::forall(f.name(), Formula::negation(godel_translate(f.child(0)))));
    }
    throw Error("unreachable");
}

// -------------------------------------------------------------------------
// Hygiene and substitution
// -------------------------------------------------------------------------

namespace {

void collect_names(const Term& t, std::set<std::string>& out) {
    if (t.kind == Term::Kind::Variable) out.insert(t.name);
    for (const auto& a : t.args) collect_names(a, out);
}

void collect_names(const Formula& f, std::set<std::string>& out) {
    if (f.is_atom()) {
        for (const auto& t : f.terms()) collect_names(t, out);
        return;
    }
    if (f.is_quantifier()) out.insert(f.name());
    for (std::size_t i = 0; i < f.child_count(); ++i) collect_names(f.child(i), out);
}

Term rename_term(const Term& t, const std::map<std::string, std::string>& ren) {
    if (t.kind == Term::Kind::Variable) {
        auto it = ren.find(t.name);
        return it == ren.end() ? t : Term::variable(it->second);
    }
    if (t.kind == Term::Kind::Constant) return t;
    std::vector<Term> args;
    args.reserve(t.args.size());
    for (const auto& a : t.args) args.push_back(rename_term(a, ren));
    return Term::apply(t.name, std::move(args));
}

Formula hygiene_rec(const Formula& f, std::map<std::string, std::string>& ren,
                    std::set<std::string>& in_scope, std::set<std::string>& used) {
    switch (f.kind()) {
    case FormulaKind::Equality:
        return Formula::equality(rename_term(f.terms()[0], ren), rename_term(f.terms()[1], ren));
    case FormulaKind::Relation: {
        std::vector<Term> ts;
        ts.reserve(f.terms().size());
        for (const auto& t : f.terms()) ts.push_back(rename_term(t, ren));
        return Formula::relation(f.name(), std::move(ts));
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
        std::string fresh = f.name();
        while (in_scope.count(fresh) || (fresh != f.name() && used.count(fresh))) fresh += '\'';
        used.insert(fresh);
        in_scope.insert(fresh);
        auto saved = ren.find(f.name()) != ren.end()
                         ? std::optional<std::string>(ren[f.name()])
                         : std::nullopt;
        ren[f.name()] = fresh;
        Formula body = hygiene_rec(f.child(0), ren, in_scope, used);
        if (saved)
            ren[f.name()] = *saved;
        else
            ren.erase(f.name());
        in_scope.erase(fresh);
        return f.kind() == FormulaKind::Forall ? Formula::forall(fresh, std::move(body))
                                               : Formula::exists(fresh, std::move(body));
    }
    case FormulaKind::Not:
        return Formula::negation(hygiene_rec(f.child(0), ren, in_scope, used));
    case FormulaKind::And:
        return Formula::conj(hygiene_rec(f.child(0), ren, in_scope, used),
                             hygiene_rec(f.child(1), ren, in_scope, used));
    case FormulaKind::Or:
        return Formula::disj(hygiene_rec(f.child(0), ren, in_scope, used),
                             hygiene_rec(f.child(1), ren, in_scope, used));
    case FormulaKind::Implies:
        return Formula::implies(hygiene_rec(f.child(0), ren, in_scope, used),
                                hygiene_rec(f.child(1), ren, in_scope, used));
    }
    throw Error("unreachable");
}

} // namespace

Formula alpha_hygiene(const Formula& f) {
    std::set<std::string> used;
    collect_names(f, used);
    std::map<std::string, std::string> ren;
    std::set<std::string> in_scope;
    return hygiene_rec(f, ren, in_scope, used);
}

namespace {

Term subst_term(const Term& t, const std::string& var, const Term& repl) {
    if (t.kind == Term::Kind::Variable) return t.name == var ? repl : t;
    if (t.kind == Term::Kind::Constant) return t;
    std::vector<Term> args;
    args.reserve(t.args.size());
    for (const auto& a : t.args) args.push_back(subst_term(a, var, repl));
    return Term::apply(t.name, std::move(args));
}

} // namespace

Formula substitute(const Formula& f, const std::string& var, const Term& t) {
    switch (f.kind()) {
    case FormulaKind::Equality:
        return Formula::equality(subst_term(f.terms()[0], var, t), subst_term(f.terms()[1], var, t));
    case FormulaKind::Relation: {
        std::vector<Term> ts;
        ts.reserve(f.terms().size());
        for (const auto& a : f.terms()) ts.push_back(subst_term(a, var, t));
        return Formula::relation(f.name(), std::move(ts));
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
        if (f.name() == var) return f;  // shadowed; nothing to substitute below
        Formula body = substitute(f.child(0), var, t);
        return f.kind() == FormulaKind::Forall ? Formula::forall(f.name(), std::move(body))
                                               : Formula::exists(f.name(), std::move(body));
    }
    case FormulaKind::Not:
        return Formula::negation(substitute(f.child(0), var, t));
    case FormulaKind::And:
        return Formula::conj(substitute(f.child(0), var, t), substitute(f.child(1), var, t));
    case FormulaKind::Or:
        return Formula::disj(substitute(f.child(0), var, t), substitute(f.child(1), var, t));
    case FormulaKind::Implies:
        return Formula::implies(substitute(f.child(0), var, t), substitute(f.child(1), var, t));
    }
    throw Error("unreachable");
}

// -------------------------------------------------------------------------
// Bounded enumeration
// -------------------------------------------------------------------------

namespace {

bool occurs_free(const Formula& f, const std::string& v) {
    auto a = analyze_formula(f);
    return std::find(a.free_vars.begin(), a.free_vars.end(), v) != a.free_vars.end();
}

} // namespace

std::vector<Formula> enumerate_formulas(const LanguageSig& sig, const FormulaEnumOptions& opts) {
    sig.validate();

    // Terms over the variable pools, constants, and one level of function
    // application (arity <= 2 functions only, to keep the space small).
    std::vector<Term> base;
    for (const auto& v : opts.free_vars) base.push_back(Term::variable(v));
    base.push_back(Term::variable(opts.bound_var));
    {
        int c = 0;
        for (const auto& k : sig.constants) {
            base.push_back(Term::constant(k));
            if (++c >= 2) break;
        }
    }
    std::vector<Term> terms = base;
    if (opts.max_term_depth >= 1) {
        for (const auto& [fn, ar] : sig.functions) {
            if (ar > 2) continue;
            if (ar == 1) {
                for (const auto& t : base) terms.push_back(Term::apply(fn, {t}));
            } else {
                for (const auto& t1 : base)
                    for (const auto& t2 : base) terms.push_back(Term::apply(fn, {t1, t2}));
            }
        }
    }

    // Atoms: one reflexive equality per free variable, all mixed
    // equalities (unordered), and every relation instance.
    std::vector<Formula> atoms;
    for (const auto& v : opts.free_vars)
        atoms.push_back(Formula::equality(Term::variable(v), Term::variable(v)));
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j)
            atoms.push_back(Formula::equality(terms[i], terms[j]));
    for (const auto& [rel, ar] : sig.relations) {
        if (ar > 2) continue;
        if (ar == 1) {
            for (const auto& t : terms) atoms.push_back(Formula::relation(rel, {t}));
        } else {
            for (const auto& t1 : terms)
                for (const auto& t2 : terms) atoms.push_back(Formula::relation(rel, {t1, t2}));
        }
    }

    std::vector<std::string> quant_vars;
    quant_vars.push_back(opts.bound_var);
    if (opts.quantify_free_vars)
        for (const auto& v : opts.free_vars) quant_vars.push_back(v);

    std::set<std::string> seen;
    // levels[k] = formulas with exactly k connective/quantifier nodes,
    // paired with their binary-connective count
    std::vector<std::vector<std::pair<Formula, int>>> levels(opts.max_ops + 1);
    for (const auto& a : atoms)
        if (seen.insert(a.repr()).second) levels[0].push_back({a, 0});

    auto guard = [&](std::size_t extra) {
        std::size_t total = extra;
        for (const auto& lv : levels) total += lv.size();
        if (total > opts.max_formulas)
            throw BoundExceeded("formula enumeration exceeds " +
                                std::to_string(opts.max_formulas) + " formulas");
    };

    for (int k = 1; k <= opts.max_ops; ++k) {
        std::vector<std::pair<Formula, int>> level;
        // unary constructors over level k-1
        for (const auto& [f, nb] : levels[k - 1]) {
            std::vector<Formula> built;
            if (!opts.positive_only) built.push_back(Formula::negation(f));
            for (const auto& v : quant_vars) {
                if (!occurs_free(f, v)) continue;
                built.push_back(alpha_hygiene(Formula::exists(v, f)));
                if (!opts.positive_only) built.push_back(alpha_hygiene(Formula::forall(v, f)));
            }
            for (auto& g : built)
                if (seen.insert(g.repr()).second) level.push_back({std::move(g), nb});
        }
        // binary constructors
        for (int i = 0; i + 1 <= k; ++i) {
            int j = k - 1 - i;
            if (j < 0 || j >= static_cast<int>(levels.size())) continue;
            for (const auto& [l, nbl] : levels[i]) {
                for (const auto& [r, nbr] : levels[j]) {
                    if (nbl + nbr + 1 > opts.max_binary) continue;
                    std::vector<Formula> built;
                    if (l.repr() < r.repr()) {
                        built.push_back(Formula::conj(l, r));
                        built.push_back(Formula::disj(l, r));
                    }
                    if (!opts.positive_only && opts.allow_implies)
                        built.push_back(Formula::implies(l, r));
                    for (auto& g : built)
                        if (seen.insert(g.repr()).second)
                            level.push_back({std::move(g), nbl + nbr + 1});
                }
            }
        }
        guard(level.size());
        levels[k] = std::move(level);
    }

    std::set<std::string> pool(opts.free_vars.begin(), opts.free_vars.end());
    std::vector<Formula> out;
    for (const auto& lv : levels) {
        for (const auto& [f, nb] : lv) {
            auto a = analyze_formula(f);
            bool ok = true;
            for (const auto& v : a.free_vars)
                if (!pool.count(v)) {
                    ok = false;
                    break;
                }
            if (ok) out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end(), [](const Formula& a, const Formula& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.repr() < b.repr();
    });
    return out;
}

std::vector<Formula> enumerate_formulas_with_free(const LanguageSig& sig,
                                                  const FormulaEnumOptions& opts,
                                                  const std::vector<std::string>& wanted) {
    FormulaEnumOptions o = opts;
    o.free_vars = wanted;
    auto all = enumerate_formulas(sig, o);
    std::set<std::string> want(wanted.begin(), wanted.end());
    std::vector<Formula> out;
    for (const auto& f : all) {
        auto a = analyze_formula(f);
        std::set<std::string> fv(a.free_vars.begin(), a.free_vars.end());
        if (fv == want) out.push_back(f);
    }
    return out;
}

} // namespace sforcer
