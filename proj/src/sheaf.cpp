#include "sforcer/sheaf.hpp"

#include <algorithm>
#include <numeric>

namespace sforcer {

// -------------------------------------------------------------------------
// PresheafOfGStructures
// -------------------------------------------------------------------------

const FinStructure& PresheafOfGStructures::fiber(int open_idx) const {
    auto it = fibers.find(open_idx);
    if (it == fibers.end())
        throw ValidationError("no fiber for open " + topology.set_to_string(topology.opens.at(open_idx)));
    return it->second;
}

const GAction& PresheafOfGStructures::action(int open_idx) const {
    auto it = actions.find(open_idx);
    if (it == actions.end())
        throw ValidationError("no action for open " + topology.set_to_string(topology.opens.at(open_idx)));
    return it->second;
}

const std::vector<Elem>& PresheafOfGStructures::restrict_map(int u, int v) const {
    auto it = restrictions.find({u, v});
    if (it == restrictions.end())
        throw ValidationError("no restriction " + topology.set_to_string(topology.opens.at(u)) +
                              " -> " + topology.set_to_string(topology.opens.at(v)));
    return it->second;
}

Elem PresheafOfGStructures::restrict_elem(int u, int v, Elem e) const {
    return restrict_map(u, v).at(e);
}

std::vector<int> PresheafOfGStructures::nonempty_open_indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < topology.opens.size(); ++i)
        if (topology.opens[i] != 0) out.push_back(static_cast<int>(i));
    return out;
}

void PresheafOfGStructures::check_complete() const {
    topology.validate();
    sig.validate();
    for (int u : nonempty_open_indices()) {
        const FinStructure& f = fiber(u);
        f.validate();
        if (!(f.sig == sig))
            throw ValidationError("fiber at " + topology.set_to_string(topology.opens[u]) +
                                  " has a different signature");
        const GAction& a = action(u);
        a.validate(f.size());
        const GAction& a0 = action(nonempty_open_indices().front());
        if (!(a.group.elem_names == a0.group.elem_names && a.group.mul == a0.group.mul))
            throw ValidationError("fibers do not share one group");
    }
    for (int u : nonempty_open_indices())
        for (int v : nonempty_open_indices()) {
            if ((topology.opens[v] & topology.opens[u]) != topology.opens[v]) continue;
            const auto& m = restrict_map(u, v);
            if (static_cast<int>(m.size()) != fiber(u).size())
                throw ValidationError("restriction map is not total");
            for (Elem e : m)
                if (e < 0 || e >= fiber(v).size())
                    throw ValidationError("restriction maps outside the target fiber");
        }
}

ViolationReport validate_presheaf(const PresheafOfGStructures& p) {
    p.check_complete();
    ViolationReport report;
    auto opens = p.nonempty_open_indices();
    auto name = [&](int u) { return p.topology.set_to_string(p.topology.opens[u]); };

    for (int u : opens) {
        const auto& idm = p.restrict_map(u, u);
        for (Elem e = 0; e < p.fiber(u).size(); ++e)
            if (idm[e] != e) {
                report.push_back({"functoriality", "restriction " + name(u) + " -> " + name(u) +
                                                       " is not the identity"});
                break;
            }
    }
    for (int u : opens)
        for (int v : opens) {
            if ((p.topology.opens[v] & p.topology.opens[u]) != p.topology.opens[v]) continue;
            StructMorphism m{p.fiber(u), p.fiber(v), p.restrict_map(u, v)};
            MorphismFlags flags = classify_morphism(m, p.action(u), p.action(v));
            if (!flags.is_morphism)
                report.push_back({"morphism", "restriction " + name(u) + " -> " + name(v) +
                                                  " is not a morphism"});
            if (!flags.is_equivariant)
                report.push_back({"equivariance", "restriction " + name(u) + " -> " + name(v) +
                                                     " is not equivariant"});
            for (int w : opens) {
                if ((p.topology.opens[w] & p.topology.opens[v]) != p.topology.opens[w]) continue;
                const auto& uv = p.restrict_map(u, v);
                const auto& vw = p.restrict_map(v, w);
                const auto& uw = p.restrict_map(u, w);
                for (Elem e = 0; e < p.fiber(u).size(); ++e)
                    if (vw[uv[e]] != uw[e]) {
                        report.push_back({"functoriality",
                                          "triple " + name(w) + " c " + name(v) + " c " + name(u) +
                                              " does not commute"});
                        break;
                    }
            }
        }
    return report;
}

SectionTuple restrict_section(const PresheafOfGStructures& p, const SectionTuple& s, int v_idx) {
    PointSet u = p.topology.opens.at(s.open_index);
    PointSet v = p.topology.opens.at(v_idx);
    if (v == 0) throw ValidationError("cannot restrict a section to the empty open");
    if ((v & u) != v) throw ValidationError("restriction target is not a subset");
    SectionTuple out;
    out.open_index = v_idx;
    out.elems.reserve(s.elems.size());
    for (Elem e : s.elems) out.elems.push_back(p.restrict_elem(s.open_index, v_idx, e));
    return out;
}

// -------------------------------------------------------------------------
// Stalks
// -------------------------------------------------------------------------

Elem StalkResult::germ(int open_idx, Elem e) const {
    for (std::size_t i = 0; i < open_indices.size(); ++i)
        if (open_indices[i] == open_idx) return germ_table[i].at(e);
    throw ValidationError("open does not contain the stalk point");
}

Tuple StalkResult::germ_tuple(const SectionTuple& s) const {
    Tuple out;
    out.reserve(s.elems.size());
    for (Elem e : s.elems) out.push_back(germ(s.open_index, e));
    return out;
}

StalkResult stalk_at(const PresheafOfGStructures& p, int point) {
    p.check_complete();
    if (point < 0 || point >= p.topology.point_count()) throw ValidationError("unknown point id");

    std::vector<int> around;
    for (int u : p.nonempty_open_indices())
        if (p.topology.opens[u] & (PointSet(1) << point)) around.push_back(u);

    DirectedDiagram d;
    const int n = static_cast<int>(around.size());
    d.le.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        d.objects.push_back(p.fiber(around[i]));
        for (int j = 0; j < n; ++j)
            d.le[j][i] = (p.topology.opens[around[j]] & p.topology.opens[around[i]]) ==
                         p.topology.opens[around[j]];
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (d.le[j][i]) d.maps[{j, i}] = p.restrict_map(around[i], around[j]);
    for (int i = 0; i < n; ++i) d.actions.push_back(p.action(around[i]));

    Colimit col = colimit_diagram(d);

    StalkResult out;
    out.stalk = std::move(col.colimit);
    out.open_indices = around;
    out.germ_table = std::move(col.germ_of);
    out.action = std::move(col.action);

    PointSet ux = p.topology.min_open_nbhd(point);
    int ux_idx = p.topology.open_index(ux);
    for (int i = 0; i < n; ++i)
        if (around[i] == ux_idx) out.min_open_pos = i;
    StructMorphism to_stalk{p.fiber(ux_idx), out.stalk, out.germ_table[out.min_open_pos]};
    if (!classify_morphism(to_stalk).is_iso)
        throw ValidationError("stalk is not isomorphic to the minimal-neighborhood fiber");
    return out;
}

// -------------------------------------------------------------------------
// Exactness / coherence
// -------------------------------------------------------------------------

ExactnessReport check_exactness(const PresheafOfGStructures& p) {
    p.check_complete();
    ExactnessReport out;
    auto opens = p.nonempty_open_indices();
    auto name = [&](int u) { return p.topology.set_to_string(p.topology.opens[u]); };

    for (int u : opens) {
        PointSet uset = p.topology.opens[u];
        std::vector<int> below;
        for (int v : opens)
            if ((p.topology.opens[v] & uset) == p.topology.opens[v]) below.push_back(v);
        if (below.size() > 18) throw BoundExceeded("too many opens for cover enumeration");

        const int k = static_cast<int>(below.size());
        for (std::uint32_t bits = 1; bits < (1u << k); ++bits) {
            std::vector<int> cover;
            PointSet uni = 0;
            for (int i = 0; i < k; ++i)
                if (bits & (1u << i)) {
                    cover.push_back(below[i]);
                    uni |= p.topology.opens[below[i]];
                }
            if (uni != uset) continue;
            // antichain covers suffice: a compatible family determines its
            // values on redundant members through restriction
            bool antichain = true;
            for (std::size_t a = 0; a < cover.size() && antichain; ++a)
                for (std::size_t b = 0; b < cover.size() && antichain; ++b) {
                    if (a == b) continue;
                    PointSet sa = p.topology.opens[cover[a]], sb = p.topology.opens[cover[b]];
                    if ((sa & sb) == sa) antichain = false;
                }
            if (!antichain) continue;

            const std::size_t m = cover.size();
            std::vector<Elem> family(m, 0);
            double total = 1;
            for (int v : cover) total *= p.fiber(v).size();
            if (total > 2e6) throw BoundExceeded("cover family space too large at " + name(u));

            auto compatible_prefix = [&](std::size_t i) {
                for (std::size_t j = 0; j < i; ++j) {
                    PointSet inter = p.topology.opens[cover[i]] & p.topology.opens[cover[j]];
                    if (inter == 0) continue;
                    int w = p.topology.open_index(inter);
                    if (p.restrict_elem(cover[i], w, family[i]) !=
                        p.restrict_elem(cover[j], w, family[j]))
                        return false;
                }
                return true;
            };

            auto handle_family = [&]() {
                int gluings = 0;
                for (Elem s = 0; s < p.fiber(u).size() && gluings < 2; ++s) {
                    bool glues = true;
                    for (std::size_t i = 0; i < m && glues; ++i)
                        glues = p.restrict_elem(u, cover[i], s) == family[i];
                    if (glues) ++gluings;
                }
                if (gluings == 0 && out.exact) {
                    out.exact = false;
                    out.exact_witness = "no gluing over a cover of " + name(u);
                }
                if (gluings >= 2 && out.coherent) {
                    out.coherent = false;
                    out.coherent_witness = "two gluings over a cover of " + name(u);
                }
            };

            auto dfs = [&](auto&& self, std::size_t i) -> void {
                if (i == m) {
                    handle_family();
                    return;
                }
                for (Elem s = 0; s < p.fiber(cover[i]).size(); ++s) {
                    family[i] = s;
                    if (compatible_prefix(i)) self(self, i + 1);
                }
            };
            dfs(dfs, 0);
        }
    }
    return out;
}

// -------------------------------------------------------------------------
// Generators
// -------------------------------------------------------------------------

namespace {

std::vector<int> points_of(PointSet s, int n) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (s & (PointSet(1) << i)) out.push_back(i);
    return out;
}

} // namespace

PresheafOfGStructures sequence_sheaf(const FinStructure& coeff, const GAction& coeff_action,
                                     const std::vector<std::string>& base_points,
                                     std::size_t max_fiber_size) {
    coeff.validate();
    coeff_action.validate(coeff.size());
    const int npoints = static_cast<int>(base_points.size());
    std::vector<PointSet> singletons;
    for (int i = 0; i < npoints; ++i) singletons.push_back(PointSet(1) << i);
    PresheafOfGStructures p;
    p.topology = build_topology(base_points, singletons);
    p.sig = coeff.sig;

    const int c = coeff.size();
    for (int u : p.nonempty_open_indices()) {
        auto pts = points_of(p.topology.opens[u], npoints);
        const int dim = static_cast<int>(pts.size());
        std::size_t fsize = 1;
        for (int i = 0; i < dim; ++i) {
            fsize *= static_cast<std::size_t>(c);
            if (fsize > max_fiber_size)
                throw BoundExceeded("sequence fiber larger than " + std::to_string(max_fiber_size));
        }
        // fiber elements are tuples over the points of u in ascending
        // point order, encoded lexicographically
        auto tuples = all_tuples(c, dim);
        FinStructure f;
        f.sig = coeff.sig;
        for (const auto& t : tuples) {
            std::string nm;
            for (int i = 0; i < dim; ++i) nm += (i ? "_" : "") + coeff.name_of(t[i]);
            f.elem_names.push_back(nm);
        }
        for (const auto& [cn, ce] : coeff.const_interp) {
            Tuple t(dim, ce);
            f.const_interp[cn] = static_cast<Elem>(FunTable::index_of(t, c));
        }
        for (const auto& [fn, table] : coeff.fun_interp) {
            FunTable ft;
            ft.arity = table.arity;
            ft.universe_size = static_cast<int>(tuples.size());
            std::size_t total = 1;
            for (int i = 0; i < ft.arity; ++i) total *= tuples.size();
            ft.values.assign(total, -1);
            Tuple result(dim), coords(ft.arity);
            std::size_t flat = 0;
            for_each_tuple(ft.universe_size, ft.arity, [&](const Tuple& args) {
                for (int i = 0; i < dim; ++i) {
                    for (int a = 0; a < ft.arity; ++a) coords[a] = tuples[args[a]][i];
                    result[i] = table.apply(coords);
                }
                ft.values[flat++] = static_cast<Elem>(FunTable::index_of(result, c));
                return true;
            });
            f.fun_interp[fn] = std::move(ft);
        }
        for (const auto& [rn, rel] : coeff.rel_interp) {
            const int ar = coeff.sig.relations.at(rn);
            std::set<Tuple> rr;
            Tuple coords(ar);
            for_each_tuple(static_cast<int>(tuples.size()), ar, [&](const Tuple& args) {
                bool all = true;
                for (int i = 0; i < dim && all; ++i) {
                    for (int a = 0; a < ar; ++a) coords[a] = tuples[args[a]][i];
                    all = rel.count(coords) != 0;
                }
                if (all) rr.insert(args);
                return true;
            });
            f.rel_interp[rn] = std::move(rr);
        }
        f.validate();
        p.fibers[u] = std::move(f);

        GAction act;
        act.group = coeff_action.group;
        act.act.assign(act.group.size(), std::vector<Elem>(tuples.size()));
        for (int g = 0; g < act.group.size(); ++g)
            for (std::size_t t = 0; t < tuples.size(); ++t) {
                Tuple moved(dim);
                for (int i = 0; i < dim; ++i) moved[i] = coeff_action.apply(g, tuples[t][i]);
                act.act[g][t] = static_cast<Elem>(FunTable::index_of(moved, c));
            }
        p.actions[u] = std::move(act);
    }

    for (int u : p.nonempty_open_indices()) {
        auto upts = points_of(p.topology.opens[u], npoints);
        auto utuples = all_tuples(c, static_cast<int>(upts.size()));
        for (int v : p.nonempty_open_indices()) {
            if ((p.topology.opens[v] & p.topology.opens[u]) != p.topology.opens[v]) continue;
            auto vpts = points_of(p.topology.opens[v], npoints);
            std::vector<int> coord;
            for (int q : vpts)
                coord.push_back(static_cast<int>(std::find(upts.begin(), upts.end(), q) - upts.begin()));
            std::vector<Elem> rho(utuples.size());
            for (std::size_t t = 0; t < utuples.size(); ++t) {
                Tuple proj(vpts.size());
                for (std::size_t i = 0; i < vpts.size(); ++i) proj[i] = utuples[t][coord[i]];
                rho[t] = static_cast<Elem>(FunTable::index_of(proj, c));
            }
            p.restrictions[{u, v}] = std::move(rho);
        }
    }
    p.check_complete();
    return p;
}

PresheafOfGStructures graph_presheaf(int n) {
    if (n < 1 || n > 6) throw BoundExceeded("graph presheaf supported for 1 <= n <= 6");
    std::vector<std::string> names;
    std::vector<PointSet> singletons;
    for (int i = 0; i < n; ++i) {
        names.push_back("v" + std::to_string(i));
        singletons.push_back(PointSet(1) << i);
    }
    PresheafOfGStructures p;
    p.topology = build_topology(names, singletons);
    p.sig = LanguageSig{};

    auto pairs_of = [&](PointSet s) {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if ((s & (PointSet(1) << i)) && (s & (PointSet(1) << j))) out.push_back({i, j});
        return out;
    };

    for (int u : p.nonempty_open_indices()) {
        auto pairs = pairs_of(p.topology.opens[u]);
        const int bits = static_cast<int>(pairs.size());
        FinStructure f;
        f.sig = p.sig;
        for (int g = 0; g < (1 << bits); ++g) {
            std::string nm = "g";
            for (int b = 0; b < bits; ++b) nm += ((g >> b) & 1) ? '1' : '0';
            f.elem_names.push_back(nm);
        }
        f.validate();
        p.fibers[u] = std::move(f);
        p.actions[u] = GAction::trivial(1 << bits);
    }
    for (int u : p.nonempty_open_indices()) {
        auto upairs = pairs_of(p.topology.opens[u]);
        for (int v : p.nonempty_open_indices()) {
            if ((p.topology.opens[v] & p.topology.opens[u]) != p.topology.opens[v]) continue;
            auto vpairs = pairs_of(p.topology.opens[v]);
            std::vector<int> sel;
            for (const auto& q : vpairs)
                sel.push_back(static_cast<int>(std::find(upairs.begin(), upairs.end(), q) - upairs.begin()));
            std::vector<Elem> rho(std::size_t(1) << upairs.size());
            for (std::size_t g = 0; g < rho.size(); ++g) {
                int img = 0;
                for (std::size_t b = 0; b < sel.size(); ++b)
                    if ((g >> sel[b]) & 1) img |= 1 << b;
                rho[g] = img;
            }
            p.restrictions[{u, v}] = std::move(rho);
        }
    }
    p.check_complete();
    return p;
}

PresheafOfGStructures constant_presheaf(const FinTopology& t, const FinStructure& m,
                                        const GAction& act) {
    m.validate();
    act.validate(m.size());
    PresheafOfGStructures p;
    p.topology = t;
    p.sig = m.sig;
    std::vector<Elem> id(m.size());
    std::iota(id.begin(), id.end(), 0);
    for (int u : p.nonempty_open_indices()) {
        p.fibers[u] = m;
        p.actions[u] = act;
        for (int v : p.nonempty_open_indices())
            if ((t.opens[v] & t.opens[u]) == t.opens[v]) p.restrictions[{u, v}] = id;
    }
    p.check_complete();
    return p;
}

} // namespace sforcer
