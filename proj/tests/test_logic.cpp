#include <doctest.h>

#include <random>

#include "sforcer/logic.hpp"

using namespace sforcer;

namespace {

LanguageSig test_sig() {
    LanguageSig sig;
    sig.relations["R"] = 2;
    sig.functions["f"] = 1;
    return sig;
}

LanguageSig unary_sig() {
    LanguageSig sig;
    sig.relations["R"] = 1;
    sig.functions["f"] = 1;
    return sig;
}

// Random well-formed AST; always hygienic.
Formula random_formula(std::mt19937& rng, const LanguageSig& sig, int depth) {
    std::vector<std::string> vars = {"x", "y", "z"};
    auto term = [&](auto&& self, int d) -> Term {
        int pick = static_cast<int>(rng() % (d > 0 ? 4 : 3));
        if (pick == 3) return Term::apply("f", {self(self, d - 1)});
        return Term::variable(vars[pick]);
    };
    auto go = [&](auto&& self, int d) -> Formula {
        int pick = static_cast<int>(rng() % (d > 0 ? 8 : 2));
        switch (pick) {
        case 0: return Formula::equality(term(term, 1), term(term, 1));
        case 1: return Formula::relation("R", {term(term, 1), term(term, 0)});
        case 2: return Formula::conj(self(self, d - 1), self(self, d - 1));
        case 3: return Formula::disj(self(self, d - 1), self(self, d - 1));
        case 4: return Formula::negation(self(self, d - 1));
        case 5: return Formula::implies(self(self, d - 1), self(self, d - 1));
        case 6: return Formula::forall(vars[rng() % 3], self(self, d - 1));
        default: return Formula::exists(vars[rng() % 3], self(self, d - 1));
        }
    };
    return alpha_hygiene(go(go, depth));
}

} // namespace

TEST_CASE("signature validation") {
    LanguageSig sig = test_sig();
    CHECK_NOTHROW(sig.validate());
    sig.constants.insert("R");
    CHECK_THROWS_AS(sig.validate(), ValidationError);

    LanguageSig bad;
    bad.functions["g"] = 0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("parsing the excluded middle sentence") {
    Formula f = parse_formula("forall u. forall v. (u = v | ~(u = v))", test_sig());
    REQUIRE(f.kind() == FormulaKind::Forall);
    CHECK(f.name() == "u");
    const Formula& inner = f.child(0);
    REQUIRE(inner.kind() == FormulaKind::Forall);
    CHECK(inner.name() == "v");
    const Formula& body = inner.child(0);
    REQUIRE(body.kind() == FormulaKind::Or);
    CHECK(body.child(0).kind() == FormulaKind::Equality);
    REQUIRE(body.child(1).kind() == FormulaKind::Not);
    CHECK(body.child(1).child(0) == body.child(0));
}

TEST_CASE("parsing atoms") {
    Formula f = parse_formula("x = x", test_sig());
    CHECK(f == Formula::equality(Term::variable("x"), Term::variable("x")));

    Formula g = parse_formula("R(x, f(x))", test_sig());
    REQUIRE(g.kind() == FormulaKind::Relation);
    CHECK(g.terms()[1] == Term::apply("f", {Term::variable("x")}));
}

TEST_CASE("arity mismatch is a parse error") {
    CHECK_THROWS_AS(parse_formula("R(x, f(x))", unary_sig()), ParseError);
    CHECK_THROWS_AS(parse_formula("f(x, y) = x", test_sig()), ParseError);
}

TEST_CASE("syntax errors carry a position") {
    try {
        parse_formula("x = ", test_sig());
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 4);
    }
    CHECK_THROWS_AS(parse_formula("x == y", test_sig()), ParseError);
    CHECK_THROWS_AS(parse_formula("Q(x)", test_sig()), ParseError);
}

TEST_CASE("precedence: ~ > & > | > ->") {
    Formula f = parse_formula("~x = y & y = z | x = z -> x = x", test_sig());
    REQUIRE(f.kind() == FormulaKind::Implies);
    REQUIRE(f.child(0).kind() == FormulaKind::Or);
    REQUIRE(f.child(0).child(0).kind() == FormulaKind::And);
    CHECK(f.child(0).child(0).child(0).kind() == FormulaKind::Not);

    // -> is right-associative
    Formula g = parse_formula("x = x -> y = y -> z = z", test_sig());
    CHECK(g.child(1).kind() == FormulaKind::Implies);
}

TEST_CASE("quantifiers extend maximally right") {
    Formula f = parse_formula("x = x & forall v. R(v, x) | v = x", test_sig());
    REQUIRE(f.kind() == FormulaKind::And);
    REQUIRE(f.child(1).kind() == FormulaKind::Forall);
    CHECK(f.child(1).child(0).kind() == FormulaKind::Or);
}

TEST_CASE("shadowed binders are renamed") {
    Formula f = parse_formula("forall x. (R(x, y) & exists x. x = y)", test_sig());
    REQUIRE(f.kind() == FormulaKind::Forall);
    const Formula& ex = f.child(0).child(1);
    REQUIRE(ex.kind() == FormulaKind::Exists);
    CHECK(ex.name() != f.name());
    CHECK(ex.child(0).terms()[0] == Term::variable(ex.name()));
    CHECK_NOTHROW(check_formula(f, test_sig()));
}

TEST_CASE("analysis: free variables and positivity") {
    Formula em = parse_formula("forall u. forall v. (u = v | ~(u = v))", test_sig());
    auto a1 = analyze_formula(em);
    CHECK(a1.free_vars.empty());
    CHECK_FALSE(a1.is_positive);

    Formula ex = parse_formula("exists w. R(v, w)", test_sig());
    auto a2 = analyze_formula(ex);
    CHECK(a2.free_vars == std::vector<std::string>{"v"});
    CHECK(a2.is_positive);

    Formula both = parse_formula("x = y & exists z. f(z) = x", test_sig());
    auto a3 = analyze_formula(both);
    CHECK(a3.free_vars == std::vector<std::string>{"x", "y"});
    CHECK(a3.is_positive);

    // implication counts as a hidden negation
    Formula imp = parse_formula("x = y -> y = x", test_sig());
    CHECK_FALSE(analyze_formula(imp).is_positive);
}

TEST_CASE("double-negation translation clauses") {
    LanguageSig sig = test_sig();
    Formula atom = parse_formula("x = y", sig);
    CHECK(godel_translate(atom) == Formula::negation(Formula::negation(atom)));

    Formula ex = parse_formula("exists v. R(v, v)", sig);
    Formula exg = godel_translate(ex);
    Formula expected = Formula::negation(Formula::forall(
        "v", Formula::negation(Formula::negation(Formula::negation(parse_formula("R(v, v)", sig))))));
    CHECK(exg == expected);

    Formula conj = parse_formula("x = y & y = z", sig);
    Formula cg = godel_translate(conj);
    REQUIRE(cg.kind() == FormulaKind::And);
    CHECK(cg.child(0) == godel_translate(parse_formula("x = y", sig)));
    CHECK(cg.child(1) == godel_translate(parse_formula("y = z", sig)));

    Formula disj = parse_formula("x = y | y = z", sig);
    Formula dg = godel_translate(disj);
    REQUIRE(dg.kind() == FormulaKind::Not);
    REQUIRE(dg.child(0).kind() == FormulaKind::And);
    CHECK(dg.child(0).child(0).kind() == FormulaKind::Not);
}

namespace {

bool contains_kind(const Formula& f, FormulaKind k) {
    if (f.kind() == k) return true;
    if (f.is_atom()) return false;
    for (std::size_t i = 0; i < f.child_count(); ++i)
        if (contains_kind(f.child(i), k)) return true;
    return false;
}

// Inverse of the translation on positive formulas.
Formula degodel(const Formula& f) {
    if (f.kind() == FormulaKind::Not) {
        const Formula& inner = f.child(0);
        if (inner.kind() == FormulaKind::And && inner.child(0).kind() == FormulaKind::Not &&
            inner.child(1).kind() == FormulaKind::Not)
            return Formula::disj(degodel(inner.child(0).child(0)), degodel(inner.child(1).child(0)));
        if (inner.kind() == FormulaKind::Forall && inner.child(0).kind() == FormulaKind::Not)
            return Formula::exists(inner.name(), degodel(inner.child(0).child(0)));
        if (inner.kind() == FormulaKind::Not) return degodel(inner.child(0));
        return Formula::negation(degodel(inner));
    }
    if (f.is_atom()) return f;
    if (f.kind() == FormulaKind::And) return Formula::conj(degodel(f.child(0)), degodel(f.child(1)));
    if (f.kind() == FormulaKind::Forall) return Formula::forall(f.name(), degodel(f.child(0)));
    return f;
}

} // namespace

TEST_CASE("translation properties") {
    std::mt19937 rng(7);
    for (int i = 0; i < 400; ++i) {
        Formula f = random_formula(rng, test_sig(), 3);
        Formula g = godel_translate(f);
        CHECK_FALSE(contains_kind(g, FormulaKind::Exists));
        CHECK_FALSE(contains_kind(g, FormulaKind::Or));
        CHECK(godel_translate(g).quantifier_count() == g.quantifier_count());
        if (analyze_formula(f).is_positive) CHECK(degodel(g) == f);
    }
}

TEST_CASE("print/parse round trip") {
    std::mt19937 rng(11);
    for (int i = 0; i < 600; ++i) {
        Formula f = random_formula(rng, test_sig(), 4);
        Formula back = parse_formula(f.to_string(), test_sig());
        CHECK(back == f);
    }
    FormulaEnumOptions opts;
    opts.max_ops = 2;
    for (const auto& f : enumerate_formulas(test_sig(), opts)) {
        Formula back = parse_formula(f.to_string(), test_sig());
        CHECK(back == f);
    }
}

TEST_CASE("substitution avoids shadowed binders") {
    Formula f = parse_formula("exists w. R(v, w)", test_sig());
    Formula g = substitute(f, "v", Term::variable("q"));
    CHECK(analyze_formula(g).free_vars == std::vector<std::string>{"q"});
    Formula h = substitute(f, "w", Term::variable("q"));
    CHECK(h == f);
}

TEST_CASE("bounded enumeration") {
    FormulaEnumOptions opts;
    opts.max_ops = 2;
    auto fs = enumerate_formulas(unary_sig(), opts);
    CHECK(fs.size() > 50);

    std::set<std::string> seen;
    for (const auto& f : fs) {
        CHECK(seen.insert(f.repr()).second);
        CHECK(f.size() <= 1 + 2 * opts.max_ops);
        CHECK(f.binary_count() <= opts.max_binary);
        auto a = analyze_formula(f);
        for (const auto& v : a.free_vars) CHECK(v == "u");
        CHECK_NOTHROW(check_formula(f, unary_sig()));
    }

    FormulaEnumOptions pos = opts;
    pos.positive_only = true;
    for (const auto& f : enumerate_formulas(unary_sig(), pos)) {
        CHECK(analyze_formula(f).is_positive);
    }

    auto with_w = enumerate_formulas_with_free(unary_sig(), opts, {"u", "w"});
    CHECK(!with_w.empty());
    for (const auto& f : with_w) {
        auto a = analyze_formula(f);
        CHECK(a.free_vars.size() == 2);
    }
}
