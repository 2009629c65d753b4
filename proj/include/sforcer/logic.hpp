#ifndef SFORCER_LOGIC_HPP
#define SFORCER_LOGIC_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "sforcer/error.hpp"

namespace sforcer {

// -------------------------------------------------------------------------
// Signatures
// -------------------------------------------------------------------------

/// A finite first-order signature: function and relation symbols with
/// positive arities, plus constant names. The three name spaces must be
/// pairwise disjoint.
struct LanguageSig {
    std::map<std::string, int> functions;
    std::map<std::string, int> relations;
    std::set<std::string> constants;

    void validate() const;

    bool has_function(const std::string& n) const { return functions.count(n) != 0; }
    bool has_relation(const std::string& n) const { return relations.count(n) != 0; }
    bool has_constant(const std::string& n) const { return constants.count(n) != 0; }

    bool operator==(const LanguageSig&) const = default;
};

// -------------------------------------------------------------------------
// Terms
// -------------------------------------------------------------------------

struct Term {
    enum class Kind { Variable, Constant, Apply };

    Kind kind = Kind::Variable;
    std::string name;        // variable, constant or function name
    std::vector<Term> args;  // nonempty only for Apply

    static Term variable(std::string n) { return {Kind::Variable, std::move(n), {}}; }
    static Term constant(std::string n) { return {Kind::Constant, std::move(n), {}}; }
    static Term apply(std::string f, std::vector<Term> a) {
        return {Kind::Apply, std::move(f), std::move(a)};
    }

    bool operator==(const Term&) const = default;
    bool operator<(const Term& o) const;

    std::string to_string() const;
};

// -------------------------------------------------------------------------
// Formulas
// -------------------------------------------------------------------------

enum class FormulaKind {
    Equality,  // t1 = t2
    Relation,  // R(t...)
    And,
    Or,
    Not,
    Implies,
    Forall,
    Exists,
};

class Formula;

struct FormulaNode {
    FormulaKind kind;
    std::string name;             // relation name / bound variable
    std::vector<Term> terms;      // atoms only
    std::vector<Formula> children;
    std::string repr;             // canonical unambiguous printing; equality key
    int id = -1;                  // process-wide intern id (derived from repr)
};

/// An immutable first-order formula. Structural equality is by the
/// canonical representation; `id()` is a process-wide intern key for it,
/// usable as a cheap memoization handle.
class Formula {
public:
    Formula() = default;

    static Formula equality(Term lhs, Term rhs);
    static Formula relation(std::string name, std::vector<Term> args);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula negation(Formula a);
    static Formula implies(Formula a, Formula b);
    static Formula forall(std::string var, Formula body);
    static Formula exists(std::string var, Formula body);

    bool valid() const { return node_ != nullptr; }
    FormulaKind kind() const { return node_->kind; }
    const std::string& name() const { return node_->name; }
    const std::vector<Term>& terms() const { return node_->terms; }
    const Formula& child(std::size_t i) const { return node_->children[i]; }
    std::size_t child_count() const { return node_->children.size(); }
    const std::string& repr() const { return node_->repr; }
    int id() const { return node_->id; }

    bool is_atom() const {
        return node_->kind == FormulaKind::Equality || node_->kind == FormulaKind::Relation;
    }
    bool is_quantifier() const {
        return node_->kind == FormulaKind::Forall || node_->kind == FormulaKind::Exists;
    }

    bool operator==(const Formula& o) const { return node_->repr == o.node_->repr; }
    bool operator!=(const Formula& o) const { return !(*this == o); }
    bool operator<(const Formula& o) const { return node_->repr < o.node_->repr; }

    /// Pretty form with minimal parentheses; re-parses to an equal AST.
    std::string to_string() const;

    /// Total node count (atoms count as one node).
    int size() const;
    /// Number of quantifier nodes.
    int quantifier_count() const;
    /// Number of And/Or/Implies nodes.
    int binary_count() const;

private:
    explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
    static Formula make(FormulaNode n);
    std::shared_ptr<const FormulaNode> node_;
};

// -------------------------------------------------------------------------
// Parsing and analysis
// -------------------------------------------------------------------------

/// Parse a formula against a signature.
///
/// Grammar (ASCII): `forall v. f`, `exists v. f`, `f -> f`, `f & f`,
/// `f | f`, `~f`, `t = t`, `R(t,...)`, parentheses. Precedence
/// `~ > & > | > ->`; quantifiers extend maximally to the right.
/// Shadowed binders are renamed so bound variables are distinct along
/// every branch.
Formula parse_formula(const std::string& text, const LanguageSig& sig);

/// Checks well-formedness of an already-built AST against a signature
/// (arities, declared symbols, binder hygiene). Throws ValidationError.
void check_formula(const Formula& f, const LanguageSig& sig);

struct FormulaAnalysis {
    std::vector<std::string> free_vars;  // in first-occurrence order
    bool is_positive = false;            // no Not, no Implies, no Forall
};

FormulaAnalysis analyze_formula(const Formula& f);

/// Double-negation translation: atoms become ~~a, conjunction and the
/// quantifier `forall` are homomorphic, `a | b` becomes ~(~aG & ~bG),
/// `~a` becomes ~(aG), `exists v. a` becomes ~forall v. ~(aG).
/// Implication is translated homomorphically; that clause is isolated
/// here so it can be swapped without touching callers.
Formula godel_translate(const Formula& f);

/// Renames shadowed binders so bound variables are pairwise distinct
/// along every branch (the invariant the parser guarantees). Used when
/// formulas are built programmatically.
Formula alpha_hygiene(const Formula& f);

/// Capture-free substitution of a term for a free variable. Assumes the
/// binder-hygiene invariant.
Formula substitute(const Formula& f, const std::string& var, const Term& t);

// -------------------------------------------------------------------------
// Bounded formula enumeration
// -------------------------------------------------------------------------

/// Options for the bounded formula space used by genericity checks and
/// the equivalence sweeps. `max_ops` bounds the total number of
/// connective/quantifier nodes; at most `max_binary` binary connectives
/// may appear in one formula (keeps the space polynomial).
struct FormulaEnumOptions {
    int max_ops = 2;
    int max_binary = 1;
    bool positive_only = false;              // restrict to atoms, &, |, exists
    bool allow_implies = true;
    std::vector<std::string> free_vars = {"u"};
    std::string bound_var = "w";
    bool quantify_free_vars = true;          // also emit closed variants
    int max_term_depth = 1;                  // function nesting in atom terms
    std::size_t max_formulas = 2'000'000;    // hard guard
};

/// Enumerates, deterministically and without duplicates, every formula
/// over `sig` whose variables are drawn from the options' pools and
/// whose size fits the bounds. Free variables of the results are a
/// subset of `opts.free_vars`.
std::vector<Formula> enumerate_formulas(const LanguageSig& sig, const FormulaEnumOptions& opts);

/// Same space, but keeps exactly the formulas whose free variables are
/// `wanted` (order-insensitive).
std::vector<Formula> enumerate_formulas_with_free(const LanguageSig& sig,
                                                  const FormulaEnumOptions& opts,
                                                  const std::vector<std::string>& wanted);

} // namespace sforcer

#endif
