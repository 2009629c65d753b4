#ifndef SFORCER_SHEAF_HPP
#define SFORCER_SHEAF_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sforcer/model.hpp"
#include "sforcer/space.hpp"

namespace sforcer {

/// A presheaf of G-structures over a finite topology: one fiber per
/// nonempty open set (the empty open carries no structure), all over
/// one signature, each with an action of one shared group, and a
/// restriction map for every inclusion of nonempty opens.
///
/// Opens are addressed by their index in `topology.opens`. Restriction
/// maps are stored source-first: restrictions[{u,v}] maps elements of
/// the fiber at u to the fiber at v, for v a subset of u.
struct PresheafOfGStructures {
    FinTopology topology;
    LanguageSig sig;
    std::map<int, FinStructure> fibers;
    std::map<int, GAction> actions;
    std::map<std::pair<int, int>, std::vector<Elem>> restrictions;

    const FinStructure& fiber(int open_idx) const;
    const GAction& action(int open_idx) const;
    const std::vector<Elem>& restrict_map(int u, int v) const;
    Elem restrict_elem(int u, int v, Elem e) const;
    std::vector<int> nonempty_open_indices() const;

    /// Structural completeness: a fiber for every nonempty open, a map
    /// for every inclusion, one shared group. Throws ValidationError.
    void check_complete() const;
};

/// Functoriality, morphism-ness and equivariance of every restriction,
/// checked exhaustively; violations are data, not exceptions.
ViolationReport validate_presheaf(const PresheafOfGStructures& p);

/// A tuple of elements of one fiber.
struct SectionTuple {
    int open_index = -1;
    Tuple elems;

    bool operator==(const SectionTuple&) const = default;
};

/// Componentwise restriction to a nonempty open subset.
SectionTuple restrict_section(const PresheafOfGStructures& p, const SectionTuple& s, int v_idx);

/// The stalk at a point: colimit over the opens containing the point,
/// directed by reverse inclusion. On a finite space it is isomorphic to
/// the fiber at the minimal open neighborhood (verified on build).
struct StalkResult {
    FinStructure stalk;
    std::vector<int> open_indices;              // diagram indices -> open index
    std::vector<std::vector<Elem>> germ_table;  // per diagram index
    int min_open_pos = -1;                      // diagram index of U_x
    std::optional<GAction> action;

    Elem germ(int open_idx, Elem e) const;
    Tuple germ_tuple(const SectionTuple& s) const;
};

StalkResult stalk_at(const PresheafOfGStructures& p, int point);

/// Gluing data over antichain covers. `exact` = every compatible family
/// has at least one gluing; `coherent` = gluings, when they exist, are
/// unique. Witness strings name the first failing cover.
struct ExactnessReport {
    bool exact = true;
    bool coherent = true;
    std::string exact_witness;
    std::string coherent_witness;
};

ExactnessReport check_exactness(const PresheafOfGStructures& p);

// -------------------------------------------------------------------------
// Generators
// -------------------------------------------------------------------------

/// The presheaf of coefficient-valued sequences over the discrete
/// topology on the given base points: the fiber at U is coeff^U with
/// pointwise interpretations, restrictions are coordinate projections,
/// and the action is applied pointwise.
PresheafOfGStructures sequence_sheaf(const FinStructure& coeff, const GAction& coeff_action,
                                     const std::vector<std::string>& base_points,
                                     std::size_t max_fiber_size = 10000);

/// The presheaf of graphs on n vertices over the discrete topology:
/// the fiber at U is the set of edge indicators on two-element subsets
/// of U, in a pure-equality language, with the trivial group.
/// Restriction drops the edge bits that leave the subset.
PresheafOfGStructures graph_presheaf(int n);

/// One fiber everywhere, identity restrictions.
PresheafOfGStructures constant_presheaf(const FinTopology& t, const FinStructure& m,
                                        const GAction& act);

} // namespace sforcer

#endif
