#include "sforcer/forcing.hpp"

#include <algorithm>

namespace sforcer {

// -------------------------------------------------------------------------
// ForcingContext
// -------------------------------------------------------------------------

std::size_t ForcingContext::KeyHash::operator()(const std::tuple<int, int, int, Tuple>& k) const {
    std::size_t h = std::get<0>(k);
    h = h * 1000003u + static_cast<std::size_t>(std::get<1>(k));
    h = h * 1000003u + static_cast<std::size_t>(std::get<2>(k));
    for (Elem e : std::get<3>(k)) h = h * 1000003u + static_cast<std::size_t>(e) + 0x9e3779b9u;
    return h;
}

ForcingContext::ForcingContext(PresheafOfGStructures p, ForcingOptions opts)
    : p_(std::move(p)), opts_(opts) {
    p_.check_complete();
    for (int x = 0; x < p_.topology.point_count(); ++x)
        min_nbhd_idx_.push_back(p_.topology.open_index(p_.topology.min_open_nbhd(x)));
}

std::size_t ForcingContext::memo_entries() const {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    return memo_.size();
}

ForcingContext::Assignment ForcingContext::restrict_asg(const Assignment& asg, int u_idx,
                                                        int v_idx) const {
    if (u_idx == v_idx) return asg;
    Assignment out;
    const auto& rho = p_.restrict_map(u_idx, v_idx);
    for (const auto& [v, e] : asg) out[v] = rho[e];
    return out;
}

bool ForcingContext::eval(int point, int u_idx, const Assignment& asg, const Formula& phi) const {
    // memo key: formula, point, section open, values of the free
    // variables in sorted name order
    auto analysis = analyze_formula(phi);
    std::vector<std::string> names = analysis.free_vars;
    std::sort(names.begin(), names.end());
    Tuple vals;
    vals.reserve(names.size());
    for (const auto& n : names) vals.push_back(asg.at(n));
    std::tuple<int, int, int, Tuple> key{phi.id(), point, u_idx, std::move(vals)};
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    Assignment trimmed;
    for (const auto& n : analysis.free_vars) trimmed[n] = asg.at(n);
    bool result = eval_uncached(point, u_idx, trimmed, phi);
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        memo_.emplace(std::move(key), result);
    }
    return result;
}

bool ForcingContext::eval_uncached(int point, int u_idx, const Assignment& asg,
                                   const Formula& phi) const {
    const PointSet xbit = PointSet(1) << point;
    const PointSet uset = p_.topology.opens[u_idx];

    auto opens_between = [&](PointSet outer) {
        // nonempty opens V with point in V and V inside outer
        std::vector<int> out;
        for (int v : p_.nonempty_open_indices()) {
            PointSet vs = p_.topology.opens[v];
            if ((vs & xbit) && (vs & outer) == vs) out.push_back(v);
        }
        return out;
    };

    if (analyze_formula(phi).is_positive) {
        if (opts_.optimize_min_nbhd) {
            int ux = min_nbhd_idx_[point];
            return satisfies(p_.fiber(ux), phi, restrict_asg(asg, u_idx, ux));
        }
        for (int v : opens_between(uset))
            if (satisfies(p_.fiber(v), phi, restrict_asg(asg, u_idx, v))) return true;
        return false;
    }

    switch (phi.kind()) {
    case FormulaKind::And:
        return eval(point, u_idx, asg, phi.child(0)) && eval(point, u_idx, asg, phi.child(1));
    case FormulaKind::Or:
        return eval(point, u_idx, asg, phi.child(0)) || eval(point, u_idx, asg, phi.child(1));

    case FormulaKind::Not: {
        auto holds_on = [&](int v_idx) {
            for (int y = 0; y < p_.topology.point_count(); ++y)
                if (p_.topology.opens[v_idx] & (PointSet(1) << y))
                    if (eval(y, u_idx, asg, phi.child(0))) return false;
            return true;
        };
        if (opts_.optimize_min_nbhd) return holds_on(min_nbhd_idx_[point]);
        for (int v : opens_between(uset))
            if (holds_on(v)) return true;
        return false;
    }

    case FormulaKind::Implies: {
        auto holds_on = [&](int v_idx) {
            for (int y = 0; y < p_.topology.point_count(); ++y)
                if (p_.topology.opens[v_idx] & (PointSet(1) << y))
                    if (eval(y, u_idx, asg, phi.child(0)) && !eval(y, u_idx, asg, phi.child(1)))
                        return false;
            return true;
        };
        if (opts_.optimize_min_nbhd) return holds_on(min_nbhd_idx_[point]);
        for (int v : opens_between(uset))
            if (holds_on(v)) return true;
        return false;
    }

    case FormulaKind::Forall: {
        const std::string& w = phi.name();
        if (opts_.mode == ForcingMode::PaperLiteral) {
            // some open V around the point such that the body is forced
            // at every y in V for every section b of that same V
            for (int v : opens_between(uset)) {
                Assignment base = restrict_asg(asg, u_idx, v);
                bool ok = true;
                for (int y = 0; y < p_.topology.point_count() && ok; ++y) {
                    if (!(p_.topology.opens[v] & (PointSet(1) << y))) continue;
                    for (Elem b = 0; b < p_.fiber(v).size() && ok; ++b) {
                        Assignment ext = base;
                        ext[w] = b;
                        ok = eval(y, v, ext, phi.child(0));
                    }
                }
                if (ok) return true;
            }
            return false;
        }
        // variant: sections are supplied on every open between y and V
        auto holds_on = [&](int v_idx) {
            for (int y = 0; y < p_.topology.point_count(); ++y) {
                if (!(p_.topology.opens[v_idx] & (PointSet(1) << y))) continue;
                for (int wopen : p_.nonempty_open_indices()) {
                    PointSet ws = p_.topology.opens[wopen];
                    if (!(ws & (PointSet(1) << y)) || (ws & p_.topology.opens[v_idx]) != ws) continue;
                    Assignment base = restrict_asg(asg, u_idx, wopen);
                    for (Elem b = 0; b < p_.fiber(wopen).size(); ++b) {
                        Assignment ext = base;
                        ext[w] = b;
                        if (!eval(y, wopen, ext, phi.child(0))) return false;
                    }
                }
            }
            return true;
        };
        if (opts_.optimize_min_nbhd) return holds_on(min_nbhd_idx_[point]);
        for (int v : opens_between(uset))
            if (holds_on(v)) return true;
        return false;
    }

    case FormulaKind::Exists: {
        // mixed existential: a local witness on some open around the point
        const std::string& w = phi.name();
        for (int v : opens_between(uset)) {
            Assignment base = restrict_asg(asg, u_idx, v);
            for (Elem b = 0; b < p_.fiber(v).size(); ++b) {
                Assignment ext = base;
                ext[w] = b;
                if (eval(point, v, ext, phi.child(0))) return true;
            }
        }
        return false;
    }

    default:
        throw Error("unreachable forcing case");
    }
}

bool ForcingContext::forces_at(int point, const SectionTuple& a, const Formula& phi) const {
    if (point < 0 || point >= p_.topology.point_count()) throw ValidationError("unknown point id");
    PointSet uset = p_.topology.opens.at(a.open_index);
    if (!(uset & (PointSet(1) << point)))
        throw ValidationError("point lies outside the section's open");
    auto fv = analyze_formula(phi).free_vars;
    if (fv.size() != a.elems.size())
        throw ValidationError("section arity does not match the formula's free variables");
    const FinStructure& f = p_.fiber(a.open_index);
    Assignment asg;
    for (std::size_t i = 0; i < fv.size(); ++i) {
        if (a.elems[i] < 0 || a.elems[i] >= f.size())
            throw ValidationError("section component outside the fiber");
        asg[fv[i]] = a.elems[i];
    }
    return eval(point, a.open_index, asg, phi);
}

bool ForcingContext::forces_on(int v_idx, const SectionTuple& a, const Formula& phi) const {
    PointSet vs = p_.topology.opens.at(v_idx);
    PointSet us = p_.topology.opens.at(a.open_index);
    if ((vs & us) != vs) throw ValidationError("forcing open is not below the section's open");
    for (int x = 0; x < p_.topology.point_count(); ++x)
        if (vs & (PointSet(1) << x))
            if (!forces_at(x, a, phi)) return false;
    return true;
}

PointSet ForcingContext::forcing_locus(const SectionTuple& a, const Formula& phi) const {
    PointSet us = p_.topology.opens.at(a.open_index);
    PointSet locus = 0;
    for (int x = 0; x < p_.topology.point_count(); ++x)
        if (us & (PointSet(1) << x))
            if (forces_at(x, a, phi)) locus |= PointSet(1) << x;
    return locus;
}

// -------------------------------------------------------------------------
// Genericity
// -------------------------------------------------------------------------

GenericityResult is_generic_filter(const ForcingContext& ctx, const OpenFilter& f,
                                   const GenericityOptions& opts) {
    f.validate();
    if (!f.is_proper()) throw ValidationError("genericity requires a proper filter");
    const PresheafOfGStructures& p = ctx.presheaf();
    GenericityResult out;

    auto member_idx = [&](PointSet s) { return p.topology.open_index(s); };
    auto members_below = [&](PointSet u) {
        std::vector<int> v;
        for (PointSet m : f.members)
            if ((m & u) == m) v.push_back(member_idx(m));
        return v;
    };

    FormulaEnumOptions space = opts.formula_space;
    space.free_vars = {"u"};
    auto formulas = enumerate_formulas(p.sig, space);

    // clause one: decidability on a member
    for (const auto& phi : formulas) {
        Formula nphi = Formula::negation(phi);
        int arity = static_cast<int>(analyze_formula(phi).free_vars.size());
        for (PointSet u : f.members) {
            int u_idx = member_idx(u);
            for (const auto& tup : all_tuples(p.fiber(u_idx).size(), arity)) {
                SectionTuple a{u_idx, tup};
                ++out.decidability_checks;
                bool decided = false;
                for (int v : members_below(u)) {
                    if (ctx.forces_on(v, a, phi) || ctx.forces_on(v, a, nphi)) {
                        decided = true;
                        break;
                    }
                }
                if (!decided) {
                    out.generic = false;
                    out.failing_instance = "undecided: " + phi.to_string() + " at " +
                                           p.topology.set_to_string(u);
                    return out;
                }
            }
        }
    }

    // clause two: witnesses for forced existentials
    auto bodies = enumerate_formulas_with_free(p.sig, space, {"u", "w"});
    {
        auto closed = enumerate_formulas_with_free(p.sig, space, {"w"});
        bodies.insert(bodies.end(), closed.begin(), closed.end());
    }
    for (const auto& psi : bodies) {
        Formula ex = Formula::exists("w", psi);
        auto fv = analyze_formula(psi).free_vars;
        int arity = static_cast<int>(fv.size()) - 1;
        for (PointSet u : f.members) {
            int u_idx = member_idx(u);
            for (const auto& tup : all_tuples(p.fiber(u_idx).size(), arity)) {
                SectionTuple a{u_idx, tup};
                if (!ctx.forces_on(u_idx, a, ex)) continue;
                ++out.witness_checks;
                bool witnessed = false;
                for (int v : members_below(u)) {
                    for (Elem b = 0; b < p.fiber(v).size() && !witnessed; ++b) {
                        Tuple full;
                        std::size_t ai = 0;
                        for (const auto& var : fv)
                            full.push_back(var == "w" ? b : p.restrict_elem(u_idx, v, tup[ai++]));
                        witnessed = ctx.forces_on(v, SectionTuple{v, full}, psi);
                    }
                    if (witnessed) break;
                }
                if (!witnessed) {
                    out.generic = false;
                    out.failing_instance = "unwitnessed: " + ex.to_string() + " at " +
                                           p.topology.set_to_string(u);
                    return out;
                }
            }
        }
    }
    return out;
}

// -------------------------------------------------------------------------
// Generic models
// -------------------------------------------------------------------------

Elem GenericModel::germ(int open_idx, Elem e) const {
    for (std::size_t i = 0; i < member_indices.size(); ++i)
        if (member_indices[i] == open_idx) return germ_of[i].at(e);
    throw ValidationError("open is not a member of the filter");
}

Tuple GenericModel::germ_tuple(const SectionTuple& s) const {
    Tuple out;
    out.reserve(s.elems.size());
    for (Elem e : s.elems) out.push_back(germ(s.open_index, e));
    return out;
}

GenericModel generic_model(const ForcingContext& ctx, const OpenFilter& f) {
    f.validate();
    const PresheafOfGStructures& p = ctx.presheaf();
    if (!(f.topology == p.topology)) throw ValidationError("filter lives on a different topology");

    DirectedDiagram d;
    std::vector<int> member_idx;
    for (PointSet m : f.members) member_idx.push_back(p.topology.open_index(m));
    const int n = static_cast<int>(member_idx.size());
    d.le.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        d.objects.push_back(p.fiber(member_idx[i]));
        for (int j = 0; j < n; ++j)
            d.le[j][i] = (f.members[j] & f.members[i]) == f.members[j];
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (d.le[j][i]) d.maps[{j, i}] = p.restrict_map(member_idx[i], member_idx[j]);
    for (int i = 0; i < n; ++i) d.actions.push_back(p.action(member_idx[i]));

    Colimit col = colimit_diagram(d);

    GenericModel out;
    out.filter = f;
    out.structure = std::move(col.colimit);
    out.member_indices = std::move(member_idx);
    out.germ_of = std::move(col.germ_of);
    out.action = std::move(col.action);

    PointSet o = f.minimal_member();
    for (int i = 0; i < n; ++i)
        if (f.members[i] == o) out.min_member_pos = i;
    StructMorphism to_gen{p.fiber(out.member_indices[out.min_member_pos]), out.structure,
                          out.germ_of[out.min_member_pos]};
    if (!classify_morphism(to_gen).is_iso)
        throw ValidationError("generic model is not isomorphic to the minimal member fiber");
    return out;
}

GmtResult verify_generic_model_theorem(const ForcingContext& ctx, const GenericModel& gm,
                                       const Formula& phi, const SectionTuple& a) {
    const PresheafOfGStructures& p = ctx.presheaf();
    PointSet u = p.topology.opens.at(a.open_index);
    if (!gm.filter.contains(u)) throw ValidationError("section open is not a filter member");

    GmtResult out;
    auto fv = analyze_formula(phi).free_vars;
    if (fv.size() != a.elems.size())
        throw ValidationError("section arity does not match the formula");

    VarAssignment asg;
    Tuple germs = gm.germ_tuple(a);
    for (std::size_t i = 0; i < fv.size(); ++i) asg[fv[i]] = germs[i];
    out.s1 = satisfies(gm.structure, phi, asg);

    Formula phig = godel_translate(phi);
    out.s2 = false;
    for (PointSet v : gm.filter.members) {
        if ((v & u) != v) continue;
        if (ctx.forces_on(p.topology.open_index(v), a, phig)) {
            out.s2 = true;
            break;
        }
    }
    out.s3 = gm.filter.contains(ctx.forcing_locus(a, phig));
    return out;
}

std::optional<MaximumPrincipleWitness> maximum_principle_witness(const ForcingContext& ctx,
                                                                 const SectionTuple& a,
                                                                 const Formula& phi,
                                                                 const std::string& witness_var) {
    const PresheafOfGStructures& p = ctx.presheaf();
    auto fv = analyze_formula(phi).free_vars;
    if (std::find(fv.begin(), fv.end(), witness_var) == fv.end())
        throw ValidationError("witness variable is not free in the body");
    if (fv.size() != a.elems.size() + 1)
        throw ValidationError("section arity does not match the body");

    Formula ex = Formula::exists(witness_var, phi);
    if (!ctx.forces_on(a.open_index, a, ex))
        throw ValidationError("the existential is not forced on the section's open");

    PointSet u = p.topology.opens[a.open_index];
    std::vector<int> candidates;
    for (int v : p.nonempty_open_indices()) {
        PointSet vs = p.topology.opens[v];
        if ((vs & u) == vs && p.topology.dense_in(vs, u)) candidates.push_back(v);
    }
    std::sort(candidates.begin(), candidates.end(), [&](int l, int r) {
        int pl = __builtin_popcount(p.topology.opens[l]);
        int pr = __builtin_popcount(p.topology.opens[r]);
        if (pl != pr) return pl > pr;  // largest first
        return p.topology.opens[l] < p.topology.opens[r];
    });

    for (int v : candidates) {
        for (Elem b = 0; b < p.fiber(v).size(); ++b) {
            Tuple full;
            std::size_t ai = 0;
            for (const auto& var : fv)
                full.push_back(var == witness_var ? b : p.restrict_elem(a.open_index, v, a.elems[ai++]));
            if (ctx.forces_on(v, SectionTuple{v, full}, phi)) return MaximumPrincipleWitness{v, b};
        }
    }
    return std::nullopt;
}

DoubleNegationDense double_negation_dense(const ForcingContext& ctx, const SectionTuple& a,
                                          const Formula& phi) {
    if (!analyze_formula(phi).is_positive)
        throw ValidationError("dense-witness equivalence needs a positive formula");
    const PresheafOfGStructures& p = ctx.presheaf();
    DoubleNegationDense out;
    out.lhs = ctx.forces_on(a.open_index, a, Formula::negation(Formula::negation(phi)));

    PointSet u = p.topology.opens[a.open_index];
    std::vector<int> candidates;
    for (int v : p.nonempty_open_indices()) {
        PointSet vs = p.topology.opens[v];
        if ((vs & u) == vs && p.topology.dense_in(vs, u)) candidates.push_back(v);
    }
    std::sort(candidates.begin(), candidates.end(), [&](int l, int r) {
        int pl = __builtin_popcount(p.topology.opens[l]);
        int pr = __builtin_popcount(p.topology.opens[r]);
        if (pl != pr) return pl > pr;
        return p.topology.opens[l] < p.topology.opens[r];
    });
    for (int v : candidates)
        if (ctx.forces_on(v, a, phi)) {
            out.dense_witness_open = v;
            break;
        }
    return out;
}

bool excluded_middle_separation_direct(const PresheafOfGStructures& p, int point) {
    p.check_complete();
    auto decided = [&](int y) {
        PointSet uy = p.topology.min_open_nbhd(y);
        int uy_idx = p.topology.open_index(uy);
        const FinStructure& f = p.fiber(uy_idx);
        // pairs of sections of the minimal neighborhood carry every germ
        // pair any section pair can realize near y
        for (Elem a = 0; a < f.size(); ++a)
            for (Elem b = 0; b < f.size(); ++b) {
                if (a == b) continue;
                bool separated = true;
                for (int z = 0; z < p.topology.point_count() && separated; ++z) {
                    if (!(uy & (PointSet(1) << z))) continue;
                    int uz_idx = p.topology.open_index(p.topology.min_open_nbhd(z));
                    separated = p.restrict_elem(uy_idx, uz_idx, a) != p.restrict_elem(uy_idx, uz_idx, b);
                }
                if (!separated) return false;
            }
        return true;
    };
    for (int u : p.nonempty_open_indices()) {
        PointSet us = p.topology.opens[u];
        if (!(us & (PointSet(1) << point))) continue;
        bool all = true;
        for (int y = 0; y < p.topology.point_count() && all; ++y)
            if (us & (PointSet(1) << y)) all = decided(y);
        if (all) return true;
    }
    return false;
}

// -------------------------------------------------------------------------
// Functoriality
// -------------------------------------------------------------------------

InducedGenericMorphism induced_generic_morphism(const PresheafOfGStructures& src,
                                                const PresheafOfGStructures& dst,
                                                const std::map<int, std::vector<Elem>>& tau,
                                                const OpenFilter& f) {
    src.check_complete();
    dst.check_complete();
    if (!(src.topology == dst.topology))
        throw ValidationError("presheaves live on different topologies");

    for (int u : src.nonempty_open_indices()) {
        auto it = tau.find(u);
        if (it == tau.end())
            throw ValidationError("missing component at " +
                                  src.topology.set_to_string(src.topology.opens[u]));
        if (static_cast<int>(it->second.size()) != src.fiber(u).size())
            throw ValidationError("component is not total at " +
                                  src.topology.set_to_string(src.topology.opens[u]));
    }
    for (int u : src.nonempty_open_indices())
        for (int v : src.nonempty_open_indices()) {
            if ((src.topology.opens[v] & src.topology.opens[u]) != src.topology.opens[v]) continue;
            const auto& rho_src = src.restrict_map(u, v);
            const auto& rho_dst = dst.restrict_map(u, v);
            for (Elem e = 0; e < src.fiber(u).size(); ++e)
                if (tau.at(v)[rho_src[e]] != rho_dst[tau.at(u)[e]])
                    throw ValidationError(
                        "naturality fails on the square " +
                        src.topology.set_to_string(src.topology.opens[v]) + " c " +
                        src.topology.set_to_string(src.topology.opens[u]));
        }

    ForcingContext src_ctx(src), dst_ctx(dst);
    InducedGenericMorphism out{generic_model(src_ctx, f), generic_model(dst_ctx, f), {}};

    const int n = out.source_model.structure.size();
    std::vector<Elem> map(n, -1);
    for (std::size_t pos = 0; pos < out.source_model.member_indices.size(); ++pos) {
        int u = out.source_model.member_indices[pos];
        for (Elem e = 0; e < src.fiber(u).size(); ++e) {
            Elem cls = out.source_model.germ_of[pos][e];
            if (map[cls] < 0) map[cls] = out.target_model.germ_of[pos][tau.at(u)[e]];
        }
    }
    out.morphism = {out.source_model.structure, out.target_model.structure, std::move(map)};
    return out;
}

} // namespace sforcer
