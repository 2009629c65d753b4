#include "sforcer/fixtures.hpp"

#include <numeric>

namespace sforcer {

LanguageSig sweep_signature() {
    LanguageSig sig;
    sig.relations["R"] = 1;
    sig.functions["f"] = 1;
    return sig;
}

namespace {

FinStructure small_structure(const std::vector<Elem>& f, const std::set<Tuple>& r,
                             const std::string& prefix) {
    FinStructure m;
    m.sig = sweep_signature();
    for (std::size_t i = 0; i < f.size(); ++i) m.elem_names.push_back(prefix + std::to_string(i));
    FunTable ft;
    ft.arity = 1;
    ft.universe_size = static_cast<int>(f.size());
    ft.values = f;
    m.fun_interp["f"] = std::move(ft);
    m.rel_interp["R"] = r;
    m.validate();
    return m;
}

std::vector<std::string> point_names(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
    return out;
}

} // namespace

std::vector<NamedTopology> sweep_topologies(int max_points) {
    std::vector<NamedTopology> out;
    auto add = [&](const std::string& name, int n, std::vector<PointSet> gens) {
        out.push_back({name + std::to_string(n), build_topology(point_names(n), std::move(gens))});
    };
    for (int n = 1; n <= max_points; ++n) {
        add("indiscrete", n, {});
        {
            std::vector<PointSet> singles;
            for (int i = 0; i < n; ++i) singles.push_back(PointSet(1) << i);
            add("discrete", n, singles);
        }
        if (n >= 2) {
            // chain of opens {a} c {a,b} c ...
            std::vector<PointSet> chain;
            PointSet acc = 0;
            for (int i = 0; i + 1 < n; ++i) {
                acc |= PointSet(1) << i;
                chain.push_back(acc);
            }
            add("chain", n, chain);
            // particular point: every nonempty open contains a
            std::vector<PointSet> part;
            for (int i = 1; i < n; ++i) part.push_back(1 | (PointSet(1) << i));
            part.push_back(1);
            add("particular", n, part);
        }
        if (n >= 3) {
            // one isolated point next to an indiscrete blob
            add("split", n, {PointSet(1)});
        }
        if (n == 4) {
            // two independent two-point blobs
            add("pairs", n, {0b0011, 0b1100});
        }
    }
    return out;
}

std::vector<NamedPresheaf> sweep_presheaves(const FinTopology& t) {
    std::vector<NamedPresheaf> out;
    const int n = t.point_count();

    FinStructure one = small_structure({0}, {}, "s");
    FinStructure one_r = small_structure({0}, {{0}}, "t");
    FinStructure two = small_structure({0, 1}, {{0}}, "p");
    FinStructure two_swap = small_structure({1, 0}, {}, "q");
    FinStructure three = small_structure({0, 1, 2}, {{0}}, "r");

    for (const auto& [name, m] : std::initializer_list<std::pair<const char*, FinStructure>>{
             {"const1", one}, {"const2", two}, {"const3", three}})
        out.push_back({name, constant_presheaf(t, m, GAction::trivial(m.size()))});

    {
        // constant fibers with a two-element group acting by the swap
        GAction swap;
        swap.group = FinGroup::cyclic(2);
        swap.act = {{0, 1}, {1, 0}};
        swap.validate(2);
        out.push_back({"constswap", constant_presheaf(t, two_swap, swap)});
    }

    // skyscrapers: the two-element fiber lives only over opens
    // containing the chosen point
    for (int pt = 0; pt < n; ++pt) {
        PresheafOfGStructures p;
        p.topology = t;
        p.sig = sweep_signature();
        for (int u : p.nonempty_open_indices()) {
            bool rich = (t.opens[u] >> pt) & 1;
            p.fibers[u] = rich ? two : one_r;
            p.actions[u] = GAction::trivial(p.fibers[u].size());
        }
        for (int u : p.nonempty_open_indices())
            for (int v : p.nonempty_open_indices()) {
                if ((t.opens[v] & t.opens[u]) != t.opens[v]) continue;
                bool ru = (t.opens[u] >> pt) & 1, rv = (t.opens[v] >> pt) & 1;
                if (ru && rv)
                    p.restrictions[{u, v}] = {0, 1};
                else if (ru && !rv)
                    p.restrictions[{u, v}] = {0, 0};
                else
                    p.restrictions[{u, v}] = {0};
            }
        p.check_complete();
        out.push_back({"sky" + t.point_names[pt], std::move(p)});
    }

    {
        // two-level: rich fiber on the full space, collapsed elsewhere
        PresheafOfGStructures p;
        p.topology = t;
        p.sig = sweep_signature();
        int x_idx = t.open_index(t.full_set());
        std::vector<Elem> collapse = {0, 1, 1};
        for (int u : p.nonempty_open_indices()) {
            p.fibers[u] = (u == x_idx) ? three : two;
            p.actions[u] = GAction::trivial(p.fibers[u].size());
        }
        for (int u : p.nonempty_open_indices())
            for (int v : p.nonempty_open_indices()) {
                if ((t.opens[v] & t.opens[u]) != t.opens[v]) continue;
                if (u == x_idx && v != x_idx)
                    p.restrictions[{u, v}] = collapse;
                else if (u == v && u == x_idx)
                    p.restrictions[{u, v}] = {0, 1, 2};
                else
                    p.restrictions[{u, v}] = {0, 1};
            }
        p.check_complete();
        out.push_back({"twolevel", std::move(p)});
    }

    {
        // fibers growing as opens shrink, with non-surjective inclusions
        PresheafOfGStructures p;
        p.topology = t;
        p.sig = sweep_signature();
        auto level = [&](int u) {
            int size = n - __builtin_popcount(t.opens[u]);  // 0 for X
            return std::min(size, 2);
        };
        std::vector<FinStructure> fibers = {one, two, three};
        for (int u : p.nonempty_open_indices()) {
            p.fibers[u] = fibers[level(u)];
            p.actions[u] = GAction::trivial(p.fibers[u].size());
        }
        for (int u : p.nonempty_open_indices())
            for (int v : p.nonempty_open_indices()) {
                if ((t.opens[v] & t.opens[u]) != t.opens[v]) continue;
                std::vector<Elem> inc;
                for (Elem e = 0; e < p.fibers[u].size(); ++e) inc.push_back(e);
                p.restrictions[{u, v}] = inc;  // level(v) >= level(u): inclusion
            }
        p.check_complete();
        out.push_back({"growing", std::move(p)});
    }

    // only structurally sound candidates leave the catalog
    std::vector<NamedPresheaf> valid;
    for (auto& np : out)
        if (validate_presheaf(np.presheaf).empty()) valid.push_back(std::move(np));
    return valid;
}

std::vector<NamedPresheaf> sweep_exact_presheaves(const FinTopology& t) {
    std::vector<NamedPresheaf> out;
    for (auto& np : sweep_presheaves(t))
        if (check_exactness(np.presheaf).exact) out.push_back(std::move(np));
    return out;
}

} // namespace sforcer
