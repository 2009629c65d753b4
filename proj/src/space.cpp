#include "sforcer/space.hpp"

#include <algorithm>
#include <set>

namespace sforcer {

// -------------------------------------------------------------------------
// FinTopology
// -------------------------------------------------------------------------

bool FinTopology::is_open(PointSet s) const {
    return std::binary_search(opens.begin(), opens.end(), s);
}

int FinTopology::open_index(PointSet s) const {
    auto it = std::lower_bound(opens.begin(), opens.end(), s);
    if (it == opens.end() || *it != s) return -1;
    return static_cast<int>(it - opens.begin());
}

PointSet FinTopology::min_open_nbhd(int x) const {
    if (x < 0 || x >= point_count()) throw ValidationError("unknown point id");
    PointSet u = full_set();
    for (PointSet o : opens)
        if (o & (PointSet(1) << x)) u &= o;
    return u;
}

PointSet FinTopology::closure(PointSet v) const {
    // complement of the union of opens disjoint from v
    PointSet avoid = 0;
    for (PointSet o : opens)
        if (!(o & v)) avoid |= o;
    return full_set() & ~avoid;
}

bool FinTopology::dense_in(PointSet v, PointSet u) const {
    return (u & ~closure(v)) == 0;
}

int FinTopology::point_by_name(const std::string& n) const {
    for (int i = 0; i < point_count(); ++i)
        if (point_names[i] == n) return i;
    throw ValidationError("unknown point '" + n + "'");
}

std::string FinTopology::set_to_string(PointSet s) const {
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < point_count(); ++i)
        if (s & (PointSet(1) << i)) {
            if (!first) out += ",";
            out += point_names[i];
            first = false;
        }
    return out + "}";
}

void FinTopology::validate() const {
    if (point_names.empty()) throw ValidationError("topology has no points");
    if (point_count() > 31) throw ValidationError("topology supports at most 31 points");
    if (!std::is_sorted(opens.begin(), opens.end()) ||
        std::adjacent_find(opens.begin(), opens.end()) != opens.end())
        throw ValidationError("open list must be sorted and duplicate-free");
    if (!is_open(0) || !is_open(full_set()))
        throw ValidationError("opens must contain the empty set and the full point set");
    for (PointSet a : opens) {
        if (a & ~full_set()) throw ValidationError("open set outside the point set");
        for (PointSet b : opens) {
            if (!is_open(a | b)) throw ValidationError("opens not closed under union");
            if (!is_open(a & b)) throw ValidationError("opens not closed under intersection");
        }
    }
}

FinTopology build_topology(std::vector<std::string> point_names,
                           const std::vector<PointSet>& generators) {
    FinTopology t;
    t.point_names = std::move(point_names);
    if (t.point_count() == 0 || t.point_count() > 31)
        throw ValidationError("topology needs between 1 and 31 points");
    PointSet full = t.full_set();
    std::set<PointSet> opens{0, full};
    for (PointSet g : generators) {
        if (g & ~full) throw ValidationError("generator is not a subset of the point set");
        opens.insert(g);
    }
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<PointSet> cur(opens.begin(), opens.end());
        for (PointSet a : cur)
            for (PointSet b : cur) {
                if (opens.insert(a | b).second) grew = true;
                if (opens.insert(a & b).second) grew = true;
            }
    }
    t.opens.assign(opens.begin(), opens.end());
    t.validate();
    return t;
}

std::vector<FinTopology> all_topologies(int n) {
    if (n < 1 || n > 5) throw BoundExceeded("topology enumeration supported for 1 <= n <= 5");
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));

    // Finite topologies correspond to preorders: x <= y iff every open
    // containing x contains y. Opens are the up-closed sets.
    std::vector<FinTopology> out;
    const int pairs = n * n;
    for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << pairs); ++bits) {
        auto rel = [&](int x, int y) { return (bits >> (x * n + y)) & 1; };
        bool ok = true;
        for (int x = 0; x < n && ok; ++x) ok = rel(x, x);
        for (int x = 0; x < n && ok; ++x)
            for (int y = 0; y < n && ok; ++y)
                for (int z = 0; z < n && ok; ++z)
                    if (rel(x, y) && rel(y, z) && !rel(x, z)) ok = false;
        if (!ok) continue;
        FinTopology t;
        t.point_names = names;
        for (PointSet s = 0; s <= ((PointSet(1) << n) - 1); ++s) {
            bool up = true;
            for (int x = 0; x < n && up; ++x) {
                if (!(s & (PointSet(1) << x))) continue;
                for (int y = 0; y < n && up; ++y)
                    if (rel(x, y) && !(s & (PointSet(1) << y))) up = false;
            }
            if (up) t.opens.push_back(s);
        }
        t.validate();
        out.push_back(std::move(t));
    }
    return out;
}

// -------------------------------------------------------------------------
// OpenFilter
// -------------------------------------------------------------------------

bool OpenFilter::contains(PointSet u) const {
    return std::binary_search(members.begin(), members.end(), u);
}

bool OpenFilter::is_proper() const { return !contains(0); }

PointSet OpenFilter::minimal_member() const {
    PointSet o = topology.full_set();
    for (PointSet m : members) o &= m;
    return o;
}

void OpenFilter::validate() const {
    topology.validate();
    if (members.empty() || !contains(topology.full_set()))
        throw ValidationError("filter must contain the full point set");
    if (!std::is_sorted(members.begin(), members.end()) ||
        std::adjacent_find(members.begin(), members.end()) != members.end())
        throw ValidationError("filter member list must be sorted and duplicate-free");
    if (contains(0)) throw ValidationError("filter is not proper (contains the empty set)");
    for (PointSet m : members)
        if (!topology.is_open(m)) throw ValidationError("filter member is not open");
    for (PointSet m : members) {
        for (PointSet o : topology.opens)
            if ((m & o) == m && o != m && !contains(o))
                throw ValidationError("filter is not upward closed");
        for (PointSet m2 : members)
            if (!contains(m & m2)) throw ValidationError("filter is not closed under intersection");
    }
}

OpenFilter principal_filter(const FinTopology& t, PointSet o) {
    if (!t.is_open(o) || o == 0)
        throw ValidationError("principal filter needs a nonempty open set");
    OpenFilter f;
    f.topology = t;
    for (PointSet u : t.opens)
        if ((o & u) == o) f.members.push_back(u);
    f.validate();
    return f;
}

std::vector<OpenFilter> maximal_open_filters(const FinTopology& t) {
    t.validate();
    // minimal nonempty opens
    std::vector<PointSet> minimal;
    for (PointSet o : t.opens) {
        if (o == 0) continue;
        bool min = true;
        for (PointSet o2 : t.opens)
            if (o2 != 0 && o2 != o && (o2 & o) == o2) { min = false; break; }
        if (min) minimal.push_back(o);
    }
    std::vector<OpenFilter> out;
    for (PointSet o : minimal) out.push_back(principal_filter(t, o));
    return out;
}

std::vector<OpenFilter> maximal_open_filters_bruteforce(const FinTopology& t) {
    t.validate();
    std::vector<PointSet> nonempty;
    for (PointSet o : t.opens)
        if (o != 0) nonempty.push_back(o);
    const int k = static_cast<int>(nonempty.size());
    if (k > 20) throw BoundExceeded("brute-force filter enumeration too large");

    std::vector<std::vector<PointSet>> proper_filters;
    for (std::uint64_t bits = 1; bits < (std::uint64_t(1) << k); ++bits) {
        std::vector<PointSet> fam;
        for (int i = 0; i < k; ++i)
            if (bits & (std::uint64_t(1) << i)) fam.push_back(nonempty[i]);
        if (!std::binary_search(fam.begin(), fam.end(), t.full_set())) continue;
        auto in = [&](PointSet s) { return std::binary_search(fam.begin(), fam.end(), s); };
        bool ok = true;
        for (PointSet a : fam) {
            for (PointSet b : fam)
                if (!in(a & b)) { ok = false; break; }
            if (!ok) break;
            for (PointSet o : nonempty)
                if ((a & o) == a && !in(o)) { ok = false; break; }
            if (!ok) break;
        }
        if (!ok || in(0)) continue;
        proper_filters.push_back(std::move(fam));
    }
    std::vector<OpenFilter> out;
    for (const auto& f : proper_filters) {
        bool maximal = true;
        for (const auto& g : proper_filters) {
            if (f.size() >= g.size() || &f == &g) continue;
            if (std::includes(g.begin(), g.end(), f.begin(), f.end())) { maximal = false; break; }
        }
        if (maximal) {
            OpenFilter of;
            of.topology = t;
            of.members = f;
            of.validate();
            out.push_back(std::move(of));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const OpenFilter& a, const OpenFilter& b) { return a.members < b.members; });
    return out;
}

FilterUtilities filter_utilities(const OpenFilter& f) {
    f.validate();
    FilterUtilities out;
    out.is_proper = f.is_proper();

    // maximal iff no open outside f can be added while staying proper;
    // equivalently the filter equals the up-set of its minimal member
    // and that member is a minimal nonempty open
    PointSet o = f.minimal_member();
    out.is_maximal = f.contains(o);
    if (out.is_maximal) {
        for (PointSet u : f.topology.opens)
            if (u != 0 && u != o && (u & o) == u) { out.is_maximal = false; break; }
        if (out.is_maximal) {
            std::size_t upset = 0;
            for (PointSet u : f.topology.opens)
                if ((o & u) == o) ++upset;
            out.is_maximal = upset == f.members.size();
        }
    }

    out.dense_open_membership = true;
    for (PointSet u : f.members)
        for (PointSet v : f.topology.opens) {
            if (v == 0 || (v & u) != v) continue;
            if (f.topology.dense_in(v, u) && !f.contains(v)) out.dense_open_membership = false;
        }
    return out;
}

} // namespace sforcer
