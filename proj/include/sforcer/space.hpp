#ifndef SFORCER_SPACE_HPP
#define SFORCER_SPACE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sforcer/error.hpp"

namespace sforcer {

/// Subsets of a point set, as bitmasks over point ids (at most 31 points).
using PointSet = std::uint32_t;

/// A finite topological space with an explicit open-set lattice.
/// `opens` is sorted ascending (so index 0 is the empty set) and closed
/// under union and intersection; it contains the empty set and the full
/// point set.
struct FinTopology {
    std::vector<std::string> point_names;
    std::vector<PointSet> opens;

    int point_count() const { return static_cast<int>(point_names.size()); }
    PointSet full_set() const { return (PointSet(1) << point_count()) - 1; }

    bool is_open(PointSet s) const;
    int open_index(PointSet s) const;  // -1 when not open
    /// The minimal open neighborhood U_x.
    PointSet min_open_nbhd(int x) const;
    PointSet closure(PointSet v) const;
    bool dense_in(PointSet v, PointSet u) const;  // u subset of closure(v)

    int point_by_name(const std::string& n) const;  // throws ValidationError
    std::string set_to_string(PointSet s) const;

    void validate() const;

    bool operator==(const FinTopology&) const = default;
};

/// Builds the coarsest topology whose opens include the generators:
/// closure under finite unions and intersections plus the empty and
/// full sets.
FinTopology build_topology(std::vector<std::string> point_names,
                           const std::vector<PointSet>& generators);

/// Every topology on n labeled points (n <= 5), enumerated through the
/// correspondence with preorders. Deterministic order.
std::vector<FinTopology> all_topologies(int n);

/// A proper filter in the lattice of open sets: upward closed among
/// opens, closed under intersection, contains the full set, never the
/// empty set.
struct OpenFilter {
    FinTopology topology;
    std::vector<PointSet> members;  // sorted ascending

    bool contains(PointSet u) const;
    bool is_proper() const;
    /// The intersection of all members (itself a member: finite lattice).
    PointSet minimal_member() const;

    void validate() const;
};

/// The up-set filter of a nonempty open set.
OpenFilter principal_filter(const FinTopology& t, PointSet o);

/// All maximal proper filters of open sets. On a finite lattice these
/// are exactly the up-sets of the minimal nonempty opens; the claim is
/// cross-checked against brute-force enumeration in the tests.
std::vector<OpenFilter> maximal_open_filters(const FinTopology& t);

/// Brute-force oracle: enumerate every proper, upward-closed,
/// intersection-closed family of opens containing the full set, and
/// keep the maximal ones. Exponential; for small spaces only.
std::vector<OpenFilter> maximal_open_filters_bruteforce(const FinTopology& t);

struct FilterUtilities {
    bool is_proper = false;
    bool is_maximal = false;
    /// Lemma-style check: every open dense subset of a member is itself
    /// a member. Expected to hold for maximal filters.
    bool dense_open_membership = false;
};

FilterUtilities filter_utilities(const OpenFilter& f);

} // namespace sforcer

#endif
