#include "sforcer/model.hpp"

#include <algorithm>
#include <numeric>

namespace sforcer {

// -------------------------------------------------------------------------
// FunTable
// -------------------------------------------------------------------------

std::size_t FunTable::index_of(const Tuple& args, int universe_size) {
    std::size_t idx = 0;
    for (Elem a : args) idx = idx * static_cast<std::size_t>(universe_size) + static_cast<std::size_t>(a);
    return idx;
}

Elem FunTable::apply(const Tuple& args) const {
    return values.at(index_of(args, universe_size));
}

// -------------------------------------------------------------------------
// FinStructure
// -------------------------------------------------------------------------

std::optional<Elem> FinStructure::elem_by_name(const std::string& n) const {
    for (int i = 0; i < size(); ++i)
        if (elem_names[i] == n) return i;
    return std::nullopt;
}

void FinStructure::validate() const {
    sig.validate();
    if (elem_names.empty()) throw ValidationError("structure universe is empty");
    const int n = size();
    for (const auto& [c, e] : const_interp) {
        if (!sig.has_constant(c)) throw ValidationError("interpretation for undeclared constant '" + c + "'");
        if (e < 0 || e >= n) throw ValidationError("constant '" + c + "' maps outside the universe");
    }
    for (const auto& c : sig.constants)
        if (!const_interp.count(c)) throw ValidationError("constant '" + c + "' has no interpretation");
    for (const auto& [f, arity] : sig.functions) {
        auto it = fun_interp.find(f);
        if (it == fun_interp.end()) throw ValidationError("function '" + f + "' has no interpretation");
        const FunTable& t = it->second;
        std::size_t expect = 1;
        for (int k = 0; k < arity; ++k) expect *= static_cast<std::size_t>(n);
        if (t.arity != arity || t.universe_size != n || t.values.size() != expect)
            throw ValidationError("function '" + f + "' table is not total");
        for (Elem v : t.values)
            if (v < 0 || v >= n) throw ValidationError("function '" + f + "' maps outside the universe");
    }
    for (const auto& [r, arity] : sig.relations) {
        auto it = rel_interp.find(r);
        if (it == rel_interp.end()) throw ValidationError("relation '" + r + "' has no interpretation");
        for (const auto& tup : it->second) {
            if (static_cast<int>(tup.size()) != arity)
                throw ValidationError("relation '" + r + "' holds a tuple of wrong arity");
            for (Elem v : tup)
                if (v < 0 || v >= n) throw ValidationError("relation '" + r + "' tuple outside the universe");
        }
    }
    for (const auto& [f, t] : fun_interp)
        if (!sig.has_function(f)) throw ValidationError("interpretation for undeclared function '" + f + "'");
    for (const auto& [r, t] : rel_interp)
        if (!sig.has_relation(r)) throw ValidationError("interpretation for undeclared relation '" + r + "'");
}

std::vector<Tuple> all_tuples(int universe_size, int arity) {
    std::vector<Tuple> out;
    Tuple cur(arity, 0);
    if (arity == 0) {
        out.push_back(cur);
        return out;
    }
    for (;;) {
        out.push_back(cur);
        int k = arity - 1;
        while (k >= 0 && ++cur[k] == universe_size) cur[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

// -------------------------------------------------------------------------
// Satisfaction
// -------------------------------------------------------------------------

Elem eval_term(const FinStructure& m, const Term& t, const VarAssignment& asg) {
    switch (t.kind) {
    case Term::Kind::Variable: {
        auto it = asg.find(t.name);
        if (it == asg.end()) throw ValidationError("unassigned free variable '" + t.name + "'");
        return it->second;
    }
    case Term::Kind::Constant: {
        auto it = m.const_interp.find(t.name);
        if (it == m.const_interp.end()) throw ValidationError("unknown constant '" + t.name + "'");
        return it->second;
    }
    case Term::Kind::Apply: {
        auto it = m.fun_interp.find(t.name);
        if (it == m.fun_interp.end()) throw ValidationError("unknown function '" + t.name + "'");
        Tuple args;
        args.reserve(t.args.size());
        for (const auto& a : t.args) args.push_back(eval_term(m, a, asg));
        return it->second.apply(args);
    }
    }
    throw Error("unreachable");
}

namespace {

bool sat_rec(const FinStructure& m, const Formula& f, VarAssignment& asg) {
    switch (f.kind()) {
    case FormulaKind::Equality:
        return eval_term(m, f.terms()[0], asg) == eval_term(m, f.terms()[1], asg);
    case FormulaKind::Relation: {
        Tuple args;
        args.reserve(f.terms().size());
        for (const auto& t : f.terms()) args.push_back(eval_term(m, t, asg));
        return m.rel_interp.at(f.name()).count(args) != 0;
    }
    case FormulaKind::And:
        return sat_rec(m, f.child(0), asg) && sat_rec(m, f.child(1), asg);
    case FormulaKind::Or:
        return sat_rec(m, f.child(0), asg) || sat_rec(m, f.child(1), asg);
    case FormulaKind::Not:
        return !sat_rec(m, f.child(0), asg);
    case FormulaKind::Implies:
        return !sat_rec(m, f.child(0), asg) || sat_rec(m, f.child(1), asg);
    case FormulaKind::Forall: {
        auto saved = asg.find(f.name()) != asg.end() ? std::optional<Elem>(asg[f.name()]) : std::nullopt;
        bool ok = true;
        for (Elem e = 0; e < m.size() && ok; ++e) {
            asg[f.name()] = e;
            ok = sat_rec(m, f.child(0), asg);
        }
        if (saved) asg[f.name()] = *saved; else asg.erase(f.name());
        return ok;
    }
    case FormulaKind::Exists: {
        auto saved = asg.find(f.name()) != asg.end() ? std::optional<Elem>(asg[f.name()]) : std::nullopt;
        bool ok = false;
        for (Elem e = 0; e < m.size() && !ok; ++e) {
            asg[f.name()] = e;
            ok = sat_rec(m, f.child(0), asg);
        }
        if (saved) asg[f.name()] = *saved; else asg.erase(f.name());
        return ok;
    }
    }
    throw Error("unreachable");
}

} // namespace

bool satisfies(const FinStructure& m, const Formula& phi, const VarAssignment& asg) {
    for (const auto& v : analyze_formula(phi).free_vars)
        if (!asg.count(v)) throw ValidationError("unassigned free variable '" + v + "'");
    VarAssignment working = asg;
    return sat_rec(m, phi, working);
}

// -------------------------------------------------------------------------
// FinGroup
// -------------------------------------------------------------------------

FinGroup FinGroup::from_table(std::vector<std::string> names, std::vector<std::vector<int>> mul) {
    FinGroup g;
    g.elem_names = std::move(names);
    g.mul = std::move(mul);
    const int n = g.size();
    if (n == 0) throw ValidationError("group is empty");
    if (static_cast<int>(g.mul.size()) != n) throw ValidationError("group table is not square");
    for (const auto& row : g.mul) {
        if (static_cast<int>(row.size()) != n) throw ValidationError("group table is not square");
        for (int v : row)
            if (v < 0 || v >= n) throw ValidationError("group table entry outside the group");
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (g.mul[g.mul[a][b]][c] != g.mul[a][g.mul[b][c]])
                    throw ValidationError("group multiplication is not associative");
    int id = -1;
    for (int e = 0; e < n; ++e) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a) ok = g.mul[e][a] == a && g.mul[a][e] == a;
        if (ok) { id = e; break; }
    }
    if (id < 0) throw ValidationError("group has no identity");
    g.identity = id;
    g.inverse.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (g.mul[a][b] == id && g.mul[b][a] == id) { g.inverse[a] = b; break; }
        if (g.inverse[a] < 0) throw ValidationError("group element '" + g.elem_names[a] + "' has no inverse");
    }
    return g;
}

FinGroup FinGroup::trivial() {
    return from_table({"e"}, {{0}});
}

FinGroup FinGroup::cyclic(int n) {
    if (n < 1) throw ValidationError("cyclic group order must be positive");
    std::vector<std::string> names;
    std::vector<std::vector<int>> mul(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i) {
        names.push_back(std::to_string(i));
        for (int j = 0; j < n; ++j) mul[i][j] = (i + j) % n;
    }
    return from_table(std::move(names), std::move(mul));
}

namespace {

std::vector<std::vector<int>> all_perms(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

std::string perm_name(const std::vector<int>& p) {
    std::string s = "p";
    for (int v : p) s += std::to_string(v);
    return s;
}

} // namespace

FinGroup FinGroup::symmetric(int n) {
    if (n < 1 || n > 6) throw BoundExceeded("symmetric group supported for 1 <= n <= 6");
    auto perms = all_perms(n);
    const int m = static_cast<int>(perms.size());
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < m; ++i) index[perms[i]] = i;
    std::vector<std::string> names;
    names.reserve(m);
    for (const auto& p : perms) names.push_back(perm_name(p));
    std::vector<std::vector<int>> mul(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            std::vector<int> comp(n);
            for (int x = 0; x < n; ++x) comp[x] = perms[a][perms[b][x]];
            mul[a][b] = index.at(comp);
        }
    return from_table(std::move(names), std::move(mul));
}

std::vector<int> symmetric_perm(const FinGroup& g, int elem, int n) {
    const std::string& nm = g.elem_names.at(elem);
    if (nm.size() != static_cast<std::size_t>(n) + 1 || nm[0] != 'p')
        throw ValidationError("element '" + nm + "' is not a one-line permutation name");
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = nm[i + 1] - '0';
    return p;
}

std::vector<std::vector<int>> FinGroup::subgroups(int max_group_order) const {
    if (size() > max_group_order)
        throw BoundExceeded("group too large for subgroup enumeration (" + std::to_string(size()) +
                            " > " + std::to_string(max_group_order) + ")");
    auto close = [&](std::vector<int> gens) {
        std::set<int> h(gens.begin(), gens.end());
        h.insert(identity);
        bool grew = true;
        while (grew) {
            grew = false;
            std::vector<int> cur(h.begin(), h.end());
            for (int a : cur) {
                if (h.insert(inverse[a]).second) grew = true;
                for (int b : cur)
                    if (h.insert(mul[a][b]).second) grew = true;
            }
        }
        return std::vector<int>(h.begin(), h.end());
    };

    std::set<std::vector<int>> found;
    std::vector<std::vector<int>> queue;
    auto push = [&](std::vector<int> h) {
        if (found.insert(h).second) queue.push_back(std::move(h));
    };
    push(close({}));
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        std::vector<int> h = queue[qi];
        std::set<int> hs(h.begin(), h.end());
        for (int g = 0; g < size(); ++g) {
            if (hs.count(g)) continue;
            std::vector<int> gens = h;
            gens.push_back(g);
            push(close(std::move(gens)));
        }
    }
    std::vector<std::vector<int>> out(found.begin(), found.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

// -------------------------------------------------------------------------
// GAction
// -------------------------------------------------------------------------

void GAction::validate(int universe_size) const {
    const int g = group.size();
    if (static_cast<int>(act.size()) != g) throw ValidationError("action table has wrong group dimension");
    for (const auto& row : act) {
        if (static_cast<int>(row.size()) != universe_size)
            throw ValidationError("action table has wrong universe dimension");
        for (Elem v : row)
            if (v < 0 || v >= universe_size) throw ValidationError("action maps outside the universe");
    }
    for (Elem x = 0; x < universe_size; ++x)
        if (act[group.identity][x] != x) throw ValidationError("identity does not act trivially");
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b)
            for (Elem x = 0; x < universe_size; ++x)
                if (act[a][act[b][x]] != act[group.mul[a][b]][x])
                    throw ValidationError("action is not compatible with multiplication");
}

GAction GAction::trivial(int universe_size) {
    GAction a;
    a.group = FinGroup::trivial();
    a.act.assign(1, std::vector<Elem>(universe_size));
    std::iota(a.act[0].begin(), a.act[0].end(), 0);
    return a;
}

GAction GAction::restrict_to(const std::vector<int>& subgroup_elems) const {
    std::map<int, int> reindex;
    for (std::size_t i = 0; i < subgroup_elems.size(); ++i) reindex[subgroup_elems[i]] = static_cast<int>(i);
    std::vector<std::string> names;
    std::vector<std::vector<int>> mul(subgroup_elems.size(), std::vector<int>(subgroup_elems.size()));
    for (std::size_t i = 0; i < subgroup_elems.size(); ++i) {
        names.push_back(group.elem_names[subgroup_elems[i]]);
        for (std::size_t j = 0; j < subgroup_elems.size(); ++j) {
            int prod = group.mul[subgroup_elems[i]][subgroup_elems[j]];
            auto it = reindex.find(prod);
            if (it == reindex.end()) throw ValidationError("subset is not closed under multiplication");
            mul[i][j] = it->second;
        }
    }
    GAction out;
    out.group = FinGroup::from_table(std::move(names), std::move(mul));
    for (int g : subgroup_elems) out.act.push_back(act[g]);
    return out;
}

// -------------------------------------------------------------------------
// G-structure checks
// -------------------------------------------------------------------------

ViolationReport check_g_structure(const FinStructure& m, const GAction& act,
                                  const GCheckOptions& opts) {
    m.validate();
    act.validate(m.size());
    ViolationReport report;
    const int gsize = act.group.size();

    // (a) the set of constant interpretations is invariant
    std::set<Elem> cset;
    for (const auto& [c, e] : m.const_interp) cset.insert(e);
    for (int g = 0; g < gsize; ++g) {
        for (Elem e : cset) {
            if (!cset.count(act.apply(g, e))) {
                report.push_back({"constants", "g=" + act.group.elem_names[g] + " moves constant element '" +
                                                   m.name_of(e) + "' to non-constant '" +
                                                   m.name_of(act.apply(g, e)) + "'"});
            }
        }
    }

    // (b) relations closed under group elements, one per coordinate
    for (const auto& [r, tuples] : m.rel_interp) {
        const int k = m.sig.relations.at(r);
        if (opts.rel_mode == RelInvariance::Independent) {
            double work = static_cast<double>(tuples.size());
            for (int i = 0; i < k; ++i) work *= gsize;
            if (work > 5e7)
                throw BoundExceeded("relation invariance check too large for '" + r + "'");
            for (const auto& tup : tuples) {
                for (const auto& gs : all_tuples(gsize, k)) {
                    Tuple moved(k);
                    for (int i = 0; i < k; ++i) moved[i] = act.apply(gs[i], tup[i]);
                    if (!tuples.count(moved)) {
                        std::string d = r + "(";
                        for (int i = 0; i < k; ++i)
                            d += (i ? "," : "") + m.name_of(tup[i]);
                        d += ") moved by (";
                        for (int i = 0; i < k; ++i)
                            d += (i ? "," : "") + act.group.elem_names[gs[i]];
                        d += ") leaves the relation";
                        report.push_back({"relations", d});
                    }
                }
            }
        } else {
            for (const auto& tup : tuples) {
                for (int g = 0; g < gsize; ++g) {
                    Tuple moved(k);
                    for (int i = 0; i < k; ++i) moved[i] = act.apply(g, tup[i]);
                    if (!tuples.count(moved))
                        report.push_back({"relations", r + " not closed under g=" + act.group.elem_names[g]});
                }
            }
        }
    }

    // (c) function equivariance: diagonal by default, per-coordinate in
    // strong mode (the strong condition replaces the diagonal one)
    for (const auto& [fname, table] : m.fun_interp) {
        const int k = table.arity;
        for_each_tuple(m.size(), k, [&](const Tuple& tup) {
            Elem fx = table.apply(tup);
            for (int g = 0; g < gsize; ++g) {
                if (!opts.strong) {
                    Tuple moved(k);
                    for (int i = 0; i < k; ++i) moved[i] = act.apply(g, tup[i]);
                    if (table.apply(moved) != act.apply(g, fx)) {
                        report.push_back({"functions", fname + " not equivariant at g=" +
                                                           act.group.elem_names[g] + ", args from '" +
                                                           m.name_of(tup[0]) + "'"});
                    }
                } else {
                    for (int j = 0; j < k; ++j) {
                        Tuple moved = tup;
                        moved[j] = act.apply(g, tup[j]);
                        if (table.apply(moved) != act.apply(g, fx)) {
                            report.push_back({"functions",
                                              fname + " not coordinatewise equivariant at g=" +
                                                  act.group.elem_names[g] + ", coordinate " +
                                                  std::to_string(j)});
                        }
                    }
                }
            }
            return true;
        });
    }
    return report;
}

// -------------------------------------------------------------------------
// Orbit quotients
// -------------------------------------------------------------------------

OrbitQuotient orbit_quotient(const FinStructure& m, const GAction& act) {
    {
        GCheckOptions strong;
        strong.strong = true;
        auto report = check_g_structure(m, act, strong);
        if (!report.empty())
            throw ValidationError("not a strong G-structure: " + report.front().condition + ": " +
                                  report.front().detail);
    }
    const int n = m.size();
    // orbits
    std::vector<int> orbit(n, -1);
    int norb = 0;
    for (Elem x = 0; x < n; ++x) {
        if (orbit[x] >= 0) continue;
        std::vector<Elem> stack{x};
        orbit[x] = norb;
        while (!stack.empty()) {
            Elem y = stack.back();
            stack.pop_back();
            for (int g = 0; g < act.group.size(); ++g) {
                Elem z = act.apply(g, y);
                if (orbit[z] < 0) {
                    orbit[z] = norb;
                    stack.push_back(z);
                }
            }
        }
        ++norb;
    }
    std::vector<Elem> rep(norb, -1);
    for (Elem x = 0; x < n; ++x)
        if (rep[orbit[x]] < 0) rep[orbit[x]] = x;

    FinStructure q;
    q.sig = m.sig;
    for (int o = 0; o < norb; ++o) q.elem_names.push_back("[" + m.name_of(rep[o]) + "]");
    for (const auto& [c, e] : m.const_interp) q.const_interp[c] = orbit[e];
    for (const auto& [fname, table] : m.fun_interp) {
        FunTable qt;
        qt.arity = table.arity;
        qt.universe_size = norb;
        std::size_t total = 1;
        for (int i = 0; i < qt.arity; ++i) total *= static_cast<std::size_t>(norb);
        qt.values.assign(total, -1);
        for (const auto& otup : all_tuples(norb, table.arity)) {
            Tuple reps(table.arity);
            for (int i = 0; i < table.arity; ++i) reps[i] = rep[otup[i]];
            qt.values[FunTable::index_of(otup, norb)] = orbit[table.apply(reps)];
        }
        // well-definedness over all representative choices
        for (const auto& tup : all_tuples(n, table.arity)) {
            Tuple otup(table.arity);
            for (int i = 0; i < table.arity; ++i) otup[i] = orbit[tup[i]];
            if (qt.values[FunTable::index_of(otup, norb)] != orbit[table.apply(tup)]) {
                std::string w = fname + "(";
                for (int i = 0; i < table.arity; ++i) w += (i ? "," : "") + m.name_of(tup[i]);
                throw ValidationError("induced function ill-defined, witness " + w + ")");
            }
        }
        q.fun_interp[fname] = std::move(qt);
    }
    for (const auto& [r, tuples] : m.rel_interp) {
        std::set<Tuple> qr;
        for (const auto& tup : tuples) {
            Tuple otup(tup.size());
            for (std::size_t i = 0; i < tup.size(); ++i) otup[i] = orbit[tup[i]];
            qr.insert(otup);
        }
        q.rel_interp[r] = std::move(qr);
    }
    q.validate();
    return {std::move(q), std::move(orbit)};
}

// -------------------------------------------------------------------------
// Morphisms
// -------------------------------------------------------------------------

Tuple StructMorphism::apply(const Tuple& t) const {
    Tuple out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = map.at(t[i]);
    return out;
}

void StructMorphism::validate() const {
    source.validate();
    target.validate();
    if (!(source.sig == target.sig)) throw ValidationError("morphism endpoints have different signatures");
    if (static_cast<int>(map.size()) != source.size())
        throw ValidationError("morphism map is not total on the source universe");
    for (Elem v : map)
        if (v < 0 || v >= target.size()) throw ValidationError("morphism maps outside the target universe");
}

namespace {

bool commutes_with_symbols(const StructMorphism& a) {
    for (const auto& [c, e] : a.source.const_interp)
        if (a.map[e] != a.target.const_interp.at(c)) return false;
    for (const auto& [f, table] : a.source.fun_interp) {
        const FunTable& tt = a.target.fun_interp.at(f);
        Tuple mapped(table.arity);
        bool ok = for_each_tuple(a.source.size(), table.arity, [&](const Tuple& tup) {
            for (int i = 0; i < table.arity; ++i) mapped[i] = a.map[tup[i]];
            return a.map[table.apply(tup)] == tt.apply(mapped);
        });
        if (!ok) return false;
    }
    for (const auto& [r, tuples] : a.source.rel_interp) {
        const auto& tr = a.target.rel_interp.at(r);
        for (const auto& tup : tuples)
            if (!tr.count(a.apply(tup))) return false;
    }
    return true;
}

bool preimage_condition(const StructMorphism& a) {
    for (const auto& [r, tuples] : a.source.rel_interp) {
        const auto& tr = a.target.rel_interp.at(r);
        const int k = a.source.sig.relations.at(r);
        Tuple mapped(k);
        bool ok = for_each_tuple(a.source.size(), k, [&](const Tuple& tup) {
            for (int i = 0; i < k; ++i) mapped[i] = a.map[tup[i]];
            return !tr.count(mapped) || tuples.count(tup) != 0;
        });
        if (!ok) return false;
    }
    return true;
}

} // namespace

MorphismFlags classify_morphism(const StructMorphism& alpha) {
    alpha.validate();
    MorphismFlags flags;
    flags.is_morphism = commutes_with_symbols(alpha);
    flags.is_transfitted = preimage_condition(alpha);

    std::vector<int> hits(alpha.target.size(), 0);
    for (Elem v : alpha.map) ++hits[v];
    bool injective = true, surjective = true;
    for (int h : hits) {
        if (h > 1) injective = false;
        if (h == 0) surjective = false;
    }
    flags.is_embedding = flags.is_morphism && flags.is_transfitted && injective;
    flags.is_submersion = flags.is_morphism && flags.is_transfitted && surjective;

    if (injective && surjective && flags.is_morphism) {
        StructMorphism inv;
        inv.source = alpha.target;
        inv.target = alpha.source;
        inv.map.assign(alpha.target.size(), -1);
        for (Elem x = 0; x < alpha.source.size(); ++x) inv.map[alpha.map[x]] = x;
        flags.is_iso = commutes_with_symbols(inv);
    }
    return flags;
}

MorphismFlags classify_morphism(const StructMorphism& alpha, const GAction& source_act,
                                const GAction& target_act) {
    MorphismFlags flags = classify_morphism(alpha);
    source_act.validate(alpha.source.size());
    target_act.validate(alpha.target.size());
    if (source_act.group.size() != target_act.group.size())
        throw ValidationError("equivariance check requires one shared group");
    flags.is_equivariant = true;
    for (int g = 0; g < source_act.group.size() && flags.is_equivariant; ++g)
        for (Elem x = 0; x < alpha.source.size(); ++x)
            if (alpha.map[source_act.apply(g, x)] != target_act.apply(g, alpha.map[x])) {
                flags.is_equivariant = false;
                break;
            }
    return flags;
}

StructMorphism compose(const StructMorphism& second, const StructMorphism& first) {
    if (!(first.target == second.source))
        throw ValidationError("morphisms are not composable");
    StructMorphism out;
    out.source = first.source;
    out.target = second.target;
    out.map.reserve(first.map.size());
    for (Elem v : first.map) out.map.push_back(second.map.at(v));
    return out;
}

StructMorphism identity_morphism(const FinStructure& m) {
    StructMorphism out;
    out.source = m;
    out.target = m;
    out.map.resize(m.size());
    std::iota(out.map.begin(), out.map.end(), 0);
    return out;
}

Factorization factorize_morphism(const StructMorphism& alpha) {
    MorphismFlags flags = classify_morphism(alpha);
    if (!flags.is_morphism || !flags.is_transfitted)
        throw ValidationError("factorization requires a transfitted morphism");

    // image substructure on Im(alpha)
    std::vector<Elem> image_elems;
    {
        std::set<Elem> s(alpha.map.begin(), alpha.map.end());
        image_elems.assign(s.begin(), s.end());
    }
    std::map<Elem, Elem> to_image;
    for (std::size_t i = 0; i < image_elems.size(); ++i) to_image[image_elems[i]] = static_cast<Elem>(i);

    FinStructure image;
    image.sig = alpha.target.sig;
    for (Elem e : image_elems) image.elem_names.push_back(alpha.target.name_of(e));
    for (const auto& [c, e] : alpha.target.const_interp) image.const_interp[c] = to_image.at(e);
    for (const auto& [f, table] : alpha.target.fun_interp) {
        FunTable it;
        it.arity = table.arity;
        it.universe_size = static_cast<int>(image_elems.size());
        std::size_t total = 1;
        for (int i = 0; i < it.arity; ++i) total *= image_elems.size();
        it.values.assign(total, -1);
        for (const auto& tup : all_tuples(it.universe_size, it.arity)) {
            Tuple big(tup.size());
            for (std::size_t i = 0; i < tup.size(); ++i) big[i] = image_elems[tup[i]];
            it.values[FunTable::index_of(tup, it.universe_size)] = to_image.at(table.apply(big));
        }
        image.fun_interp[f] = std::move(it);
    }
    for (const auto& [r, tuples] : alpha.target.rel_interp) {
        std::set<Tuple> rr;
        for (const auto& tup : tuples) {
            bool inside = true;
            Tuple small(tup.size());
            for (std::size_t i = 0; i < tup.size(); ++i) {
                auto it = to_image.find(tup[i]);
                if (it == to_image.end()) { inside = false; break; }
                small[i] = it->second;
            }
            if (inside) rr.insert(small);
        }
        image.rel_interp[r] = std::move(rr);
    }
    image.validate();

    // kernel quotient
    const int n = alpha.source.size();
    std::vector<Elem> cls(n, -1);
    std::vector<Elem> rep;
    for (Elem x = 0; x < n; ++x) {
        if (cls[x] >= 0) continue;
        cls[x] = static_cast<Elem>(rep.size());
        for (Elem y = x + 1; y < n; ++y)
            if (alpha.map[y] == alpha.map[x]) cls[y] = cls[x];
        rep.push_back(x);
    }
    const int q = static_cast<int>(rep.size());

    FinStructure quotient;
    quotient.sig = alpha.source.sig;
    for (Elem r0 : rep) quotient.elem_names.push_back("[" + alpha.source.name_of(r0) + "]");
    for (const auto& [c, e] : alpha.source.const_interp) quotient.const_interp[c] = cls[e];
    for (const auto& [f, table] : alpha.source.fun_interp) {
        FunTable qt;
        qt.arity = table.arity;
        qt.universe_size = q;
        std::size_t total = 1;
        for (int i = 0; i < qt.arity; ++i) total *= static_cast<std::size_t>(q);
        qt.values.assign(total, -1);
        for (const auto& tup : all_tuples(q, table.arity)) {
            Tuple reps(tup.size());
            for (std::size_t i = 0; i < tup.size(); ++i) reps[i] = rep[tup[i]];
            qt.values[FunTable::index_of(tup, q)] = cls[table.apply(reps)];
        }
        quotient.fun_interp[f] = std::move(qt);
    }
    for (const auto& [r, tuples] : alpha.source.rel_interp) {
        std::set<Tuple> qr;
        for (const auto& tup : tuples) {
            Tuple ot(tup.size());
            for (std::size_t i = 0; i < tup.size(); ++i) ot[i] = cls[tup[i]];
            qr.insert(ot);
        }
        quotient.rel_interp[r] = std::move(qr);
    }
    quotient.validate();

    Factorization out;
    out.image = std::move(image);
    out.quotient = std::move(quotient);
    out.projection = {alpha.source, out.quotient, cls};
    std::vector<Elem> ind(q);
    for (int i = 0; i < q; ++i) ind[i] = to_image.at(alpha.map[rep[i]]);
    out.induced = {out.quotient, out.image, std::move(ind)};
    out.image_elems = std::move(image_elems);
    return out;
}

// -------------------------------------------------------------------------
// Directed diagrams and colimits
// -------------------------------------------------------------------------

const std::vector<Elem>& DirectedDiagram::map_for(int j, int i) const {
    auto it = maps.find({j, i});
    if (it == maps.end())
        throw ValidationError("no connecting map for indices " + std::to_string(j) + " <= " +
                              std::to_string(i));
    return it->second;
}

void DirectedDiagram::validate() const {
    const int n = count();
    if (n == 0) throw ValidationError("diagram is empty");
    for (const auto& o : objects) o.validate();
    for (int i = 1; i < n; ++i)
        if (!(objects[i].sig == objects[0].sig))
            throw ValidationError("diagram objects have different signatures");
    // partial order
    for (int i = 0; i < n; ++i)
        if (!le[i][i]) throw ValidationError("diagram order is not reflexive");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (le[i][j] && le[j][i] && i != j) throw ValidationError("diagram order is not antisymmetric");
            for (int k = 0; k < n; ++k)
                if (le[i][j] && le[j][k] && !le[i][k])
                    throw ValidationError("diagram order is not transitive");
        }
    // downward directedness
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bool found = false;
            for (int k = 0; k < n && !found; ++k) found = le[k][i] && le[k][j];
            if (!found) throw ValidationError("diagram is not downward directed");
        }
    // maps present, morphisms, functorial
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!le[j][i]) continue;
            StructMorphism m{objects[i], objects[j], map_for(j, i)};
            if (!classify_morphism(m).is_morphism)
                throw ValidationError("connecting map " + std::to_string(i) + " -> " + std::to_string(j) +
                                      " is not a morphism");
            if (i == j) {
                for (Elem x = 0; x < objects[i].size(); ++x)
                    if (map_for(j, i)[x] != x) throw ValidationError("identity index map is not the identity");
            }
        }
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                if (!(le[k][j] && le[j][i])) continue;
                const auto& kj = map_for(k, j);
                const auto& ji = map_for(j, i);
                const auto& ki = map_for(k, i);
                for (Elem x = 0; x < objects[i].size(); ++x)
                    if (kj[ji[x]] != ki[x])
                        throw ValidationError("diagram is not functorial at " + std::to_string(k) + " <= " +
                                              std::to_string(j) + " <= " + std::to_string(i));
            }
    if (!actions.empty()) {
        if (static_cast<int>(actions.size()) != n)
            throw ValidationError("diagram actions must cover every index");
        for (int i = 0; i < n; ++i) {
            actions[i].validate(objects[i].size());
            if (actions[i].group.size() != actions[0].group.size())
                throw ValidationError("diagram actions use different groups");
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!le[j][i]) continue;
                const auto& ji = map_for(j, i);
                for (int g = 0; g < actions[0].group.size(); ++g)
                    for (Elem x = 0; x < objects[i].size(); ++x)
                        if (ji[actions[i].apply(g, x)] != actions[j].apply(g, ji[x]))
                            throw ValidationError("connecting map " + std::to_string(i) + " -> " +
                                                  std::to_string(j) + " is not equivariant");
            }
    }
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void merge(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

Colimit colimit_diagram(const DirectedDiagram& d) {
    d.validate();
    const int n = d.count();
    std::vector<int> offset(n + 1, 0);
    for (int i = 0; i < n; ++i) offset[i + 1] = offset[i] + d.objects[i].size();
    UnionFind uf(offset[n]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!d.le[j][i] || i == j) continue;
            const auto& ji = d.map_for(j, i);
            for (Elem x = 0; x < d.objects[i].size(); ++x) uf.merge(offset[i] + x, offset[j] + ji[x]);
        }

    // classes in order of minimal node
    std::map<int, Elem> class_of_root;
    std::vector<std::pair<int, Elem>> rep;  // (index, element)
    for (int node = 0; node < offset[n]; ++node) {
        int r = uf.find(node);
        if (class_of_root.count(r)) continue;
        class_of_root[r] = static_cast<Elem>(rep.size());
        int idx = static_cast<int>(std::upper_bound(offset.begin(), offset.end(), r) - offset.begin()) - 1;
        rep.push_back({idx, r - offset[idx]});
    }
    const int csize = static_cast<int>(rep.size());

    Colimit out;
    out.germ_of.assign(n, {});
    for (int i = 0; i < n; ++i) {
        out.germ_of[i].resize(d.objects[i].size());
        for (Elem x = 0; x < d.objects[i].size(); ++x)
            out.germ_of[i][x] = class_of_root.at(uf.find(offset[i] + x));
    }

    FinStructure c;
    c.sig = d.objects[0].sig;
    for (const auto& [idx, x] : rep)
        c.elem_names.push_back(d.objects[idx].name_of(x) + "@" + std::to_string(idx));

    // push a class to a common lower index deterministically
    auto lower_bound_index = [&](const std::vector<int>& idxs) {
        for (int j = 0; j < n; ++j) {
            bool ok = true;
            for (int i : idxs)
                if (!d.le[j][i]) { ok = false; break; }
            if (ok) return j;
        }
        throw ValidationError("no common lower bound in directed diagram");
    };
    auto push_to = [&](int j, int i, Elem x) { return i == j ? x : d.map_for(j, i)[x]; };

    for (const auto& [cname, _] : d.objects[0].const_interp) {
        c.const_interp[cname] = out.germ_of[0][d.objects[0].const_interp.at(cname)];
    }
    for (const auto& [fname, t0] : d.objects[0].fun_interp) {
        FunTable ft;
        ft.arity = t0.arity;
        ft.universe_size = csize;
        std::size_t total = 1;
        for (int i = 0; i < ft.arity; ++i) total *= static_cast<std::size_t>(csize);
        ft.values.assign(total, -1);
        for (const auto& tup : all_tuples(csize, ft.arity)) {
            std::vector<int> idxs;
            for (Elem cl : tup) idxs.push_back(rep[cl].first);
            int j = lower_bound_index(idxs);
            Tuple args(tup.size());
            for (std::size_t i = 0; i < tup.size(); ++i)
                args[i] = push_to(j, rep[tup[i]].first, rep[tup[i]].second);
            ft.values[FunTable::index_of(tup, csize)] = out.germ_of[j][d.objects[j].fun_interp.at(fname).apply(args)];
        }
        c.fun_interp[fname] = std::move(ft);
    }
    for (const auto& [rname, _] : d.objects[0].rel_interp) {
        std::set<Tuple> rr;
        for (int i = 0; i < n; ++i) {
            for (const auto& tup : d.objects[i].rel_interp.at(rname)) {
                Tuple g(tup.size());
                for (std::size_t k = 0; k < tup.size(); ++k) g[k] = out.germ_of[i][tup[k]];
                rr.insert(g);
            }
        }
        c.rel_interp[rname] = std::move(rr);
    }
    c.validate();
    out.colimit = std::move(c);

    if (!d.actions.empty()) {
        GAction a;
        a.group = d.actions[0].group;
        a.act.assign(a.group.size(), std::vector<Elem>(csize));
        for (int g = 0; g < a.group.size(); ++g)
            for (Elem cl = 0; cl < csize; ++cl) {
                auto [idx, x] = rep[cl];
                a.act[g][cl] = out.germ_of[idx][d.actions[idx].apply(g, x)];
            }
        a.validate(csize);
        out.action = std::move(a);
    }

    for (int i = 0; i < n; ++i)
        out.germ_maps.push_back({d.objects[i], out.colimit, out.germ_of[i]});
    return out;
}

void check_embedding_diagram(const DirectedDiagram& d) {
    for (int i = 0; i < d.count(); ++i)
        for (int j = 0; j < d.count(); ++j) {
            if (!d.le[j][i] || i == j) continue;
            StructMorphism m{d.objects[i], d.objects[j], d.map_for(j, i)};
            if (!classify_morphism(m).is_embedding)
                throw ValidationError("colimit preservation requires embedding connecting maps");
        }
}

bool verify_colimit_preservation(const DirectedDiagram& d, const Formula& phi, int index,
                                 const Tuple& a) {
    check_embedding_diagram(d);
    return verify_colimit_preservation(d, colimit_diagram(d), phi, index, a);
}

bool verify_colimit_preservation(const DirectedDiagram& d, const Colimit& col, const Formula& phi,
                                 int index, const Tuple& a) {
    if (!analyze_formula(phi).is_positive)
        throw ValidationError("colimit preservation requires a positive formula");
    auto fv = analyze_formula(phi).free_vars;
    if (fv.size() != a.size()) throw ValidationError("section arity does not match the formula");

    VarAssignment casg;
    for (std::size_t k = 0; k < fv.size(); ++k) casg[fv[k]] = col.germ_of.at(index).at(a[k]);
    bool lhs = satisfies(col.colimit, phi, casg);

    bool rhs = false;
    for (int j = 0; j < d.count() && !rhs; ++j) {
        if (!d.le[j][index]) continue;
        VarAssignment asg;
        for (std::size_t k = 0; k < fv.size(); ++k)
            asg[fv[k]] = j == index ? a[k] : d.map_for(j, index)[a[k]];
        rhs = satisfies(d.objects[j], phi, asg);
    }
    return lhs == rhs;
}

// -------------------------------------------------------------------------
// Fixtures
// -------------------------------------------------------------------------

namespace {

std::string subset_name(int mask, int n) {
    std::string s = "f";
    for (int v = 0; v < n; ++v)
        if (mask & (1 << v)) s += std::to_string(v);
    return s;
}

} // namespace

SimplexFixture simplex_fixture(int n, bool boundary, bool strict_subset) {
    if (n < 1) throw ValidationError("simplex dimension must be >= 1");
    if (n > 6) throw BoundExceeded("simplex fixtures supported for n <= 6");
    const int full = (1 << n) - 1;
    std::vector<int> masks;
    for (int m = 0; m <= full; ++m)
        if (!(boundary && m == full)) masks.push_back(m);

    FinStructure s;
    s.sig.relations["lt"] = 2;
    std::map<int, Elem> id_of;
    for (std::size_t i = 0; i < masks.size(); ++i) {
        s.elem_names.push_back(subset_name(masks[i], n));
        id_of[masks[i]] = static_cast<Elem>(i);
    }
    std::set<Tuple> lt;
    for (std::size_t i = 0; i < masks.size(); ++i)
        for (std::size_t j = 0; j < masks.size(); ++j) {
            bool sub = (masks[i] & masks[j]) == masks[i];
            bool ok = strict_subset ? (sub && masks[i] != masks[j]) : sub;
            if (ok) lt.insert({static_cast<Elem>(i), static_cast<Elem>(j)});
        }
    s.rel_interp["lt"] = std::move(lt);
    s.validate();

    FinGroup sym = FinGroup::symmetric(n);
    GAction act;
    act.group = sym;
    act.act.assign(sym.size(), std::vector<Elem>(masks.size()));
    for (int g = 0; g < sym.size(); ++g) {
        auto p = symmetric_perm(sym, g, n);
        for (std::size_t i = 0; i < masks.size(); ++i) {
            int moved = 0;
            for (int v = 0; v < n; ++v)
                if (masks[i] & (1 << v)) moved |= 1 << p[v];
            act.act[g][i] = id_of.at(moved);
        }
    }
    act.validate(s.size());
    return {std::move(s), std::move(act)};
}

FinStructure zmod_structure(int n, bool numerals) {
    if (n < 1) throw ValidationError("modulus must be >= 1");
    FinStructure s;
    s.sig.functions["add"] = 2;
    for (int i = 0; i < n; ++i) s.elem_names.push_back(std::to_string(i));
    FunTable add;
    add.arity = 2;
    add.universe_size = n;
    add.values.resize(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) add.values[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
    s.fun_interp["add"] = std::move(add);
    if (numerals) {
        for (int i = 0; i < n; ++i) {
            s.sig.constants.insert(std::to_string(i));
            s.const_interp[std::to_string(i)] = i;
        }
    }
    s.validate();
    return s;
}

GAction zmod_translation_action(int n, const std::vector<int>& subgroup_gens) {
    std::set<int> sub{0};
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> cur(sub.begin(), sub.end());
        for (int a : cur)
            for (int g : subgroup_gens)
                if (sub.insert((a + g) % n).second) grew = true;
        for (int a : cur)
            for (int b : cur)
                if (sub.insert((a + b) % n).second) grew = true;
    }
    std::vector<int> elems(sub.begin(), sub.end());
    std::vector<std::string> names;
    std::vector<std::vector<int>> mul(elems.size(), std::vector<int>(elems.size()));
    std::map<int, int> idx;
    for (std::size_t i = 0; i < elems.size(); ++i) idx[elems[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < elems.size(); ++i) {
        names.push_back(std::to_string(elems[i]));
        for (std::size_t j = 0; j < elems.size(); ++j) mul[i][j] = idx.at((elems[i] + elems[j]) % n);
    }
    GAction act;
    act.group = FinGroup::from_table(std::move(names), std::move(mul));
    act.act.assign(elems.size(), std::vector<Elem>(n));
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (int x = 0; x < n; ++x) act.act[i][x] = (elems[i] + x) % n;
    act.validate(n);
    return act;
}

std::vector<std::vector<int>> admissible_subgroups(const FinStructure& m, const GAction& full,
                                                   const GCheckOptions& opts, int max_group_order) {
    full.validate(m.size());
    if (full.group.size() > max_group_order)
        throw BoundExceeded("group too large (" + std::to_string(full.group.size()) + " > " +
                            std::to_string(max_group_order) + ")");
    std::vector<std::vector<int>> out;
    for (const auto& sub : full.group.subgroups(max_group_order)) {
        GAction restricted = full.restrict_to(sub);
        if (check_g_structure(m, restricted, opts).empty()) out.push_back(sub);
    }
    return out;
}

} // namespace sforcer
