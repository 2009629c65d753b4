#ifndef SFORCER_MODEL_HPP
#define SFORCER_MODEL_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sforcer/logic.hpp"

namespace sforcer {

using Elem = int;
using Tuple = std::vector<Elem>;

// -------------------------------------------------------------------------
// Finite structures
// -------------------------------------------------------------------------

/// A total interpretation table universe^arity -> universe, stored
/// row-major (first argument varies slowest).
struct FunTable {
    int arity = 1;
    int universe_size = 0;
    std::vector<Elem> values;  // size = universe_size^arity

    Elem apply(const Tuple& args) const;
    static std::size_t index_of(const Tuple& args, int universe_size);

    bool operator==(const FunTable&) const = default;
};

/// A finite first-order structure. Elements are dense ids 0..size-1 with
/// printable names.
struct FinStructure {
    LanguageSig sig;
    std::vector<std::string> elem_names;
    std::map<std::string, Elem> const_interp;
    std::map<std::string, FunTable> fun_interp;
    std::map<std::string, std::set<Tuple>> rel_interp;

    int size() const { return static_cast<int>(elem_names.size()); }
    const std::string& name_of(Elem e) const { return elem_names.at(e); }
    std::optional<Elem> elem_by_name(const std::string& n) const;

    /// Throws ValidationError unless every table is total, every tuple
    /// lies in the universe, and the universe is nonempty.
    void validate() const;

    bool operator==(const FinStructure&) const = default;
};

/// Classical Tarski satisfaction; quantifiers range over the universe.
using VarAssignment = std::map<std::string, Elem>;
bool satisfies(const FinStructure& m, const Formula& phi, const VarAssignment& asg);
Elem eval_term(const FinStructure& m, const Term& t, const VarAssignment& asg);

/// Enumerates all tuples universe^arity in lexicographic order.
std::vector<Tuple> all_tuples(int universe_size, int arity);

/// Visits the same tuples without materializing them; the callback
/// receives one reused buffer. Stops early when the callback returns
/// false. Returns false iff stopped early.
template <typename Fn>
bool for_each_tuple(int universe_size, int arity, Fn&& fn) {
    Tuple cur(arity, 0);
    if (arity == 0) return fn(static_cast<const Tuple&>(cur));
    if (universe_size == 0) return true;
    for (;;) {
        if (!fn(static_cast<const Tuple&>(cur))) return false;
        int k = arity - 1;
        while (k >= 0 && ++cur[k] == universe_size) cur[k--] = 0;
        if (k < 0) return true;
    }
}

// -------------------------------------------------------------------------
// Groups and actions
// -------------------------------------------------------------------------

struct FinGroup {
    std::vector<std::string> elem_names;
    std::vector<std::vector<int>> mul;  // mul[g][h] = g*h
    int identity = 0;
    std::vector<int> inverse;

    int size() const { return static_cast<int>(elem_names.size()); }

    /// Builds a group from a multiplication table, checking the axioms
    /// exhaustively and deriving identity and inverses.
    static FinGroup from_table(std::vector<std::string> names, std::vector<std::vector<int>> mul);

    static FinGroup trivial();
    static FinGroup cyclic(int n);
    /// Symmetric group on {0..n-1}; elements named by their one-line word.
    static FinGroup symmetric(int n);

    /// All subgroups, each as a sorted list of element ids. Deterministic
    /// order (by size, then lexicographic).
    std::vector<std::vector<int>> subgroups(int max_group_order = 120) const;
};

/// For the symmetric() group: the permutation (one-line form) of element g.
std::vector<int> symmetric_perm(const FinGroup& g, int elem, int n);

struct GAction {
    FinGroup group;
    std::vector<std::vector<Elem>> act;  // act[g][x]

    Elem apply(int g, Elem x) const { return act[g][x]; }
    /// Checks act(e,x)=x and act(g,act(h,x))=act(gh,x) exhaustively.
    void validate(int universe_size) const;

    static GAction trivial(int universe_size);
    /// Restriction of this action to a subgroup (element ids of `group`).
    GAction restrict_to(const std::vector<int>& subgroup_elems) const;
};

// -------------------------------------------------------------------------
// G-structure checks and orbit quotients
// -------------------------------------------------------------------------

/// How relation invariance (condition (b)) quantifies group elements:
/// one independent element per coordinate, or a single diagonal element.
enum class RelInvariance { Independent, Diagonal };

struct GCheckOptions {
    /// Strong mode replaces diagonal equivariance of functions by the
    /// per-coordinate condition f(x1,..,g*xj,..,xn) = g*f(x).
    bool strong = false;
    RelInvariance rel_mode = RelInvariance::Independent;
};

/// One violation of the G-structure conditions, with a printable witness.
struct Violation {
    std::string condition;  // "constants", "relations", "functions"
    std::string detail;
};

using ViolationReport = std::vector<Violation>;

ViolationReport check_g_structure(const FinStructure& m, const GAction& act,
                                  const GCheckOptions& opts = {});

/// Quotient by orbits of a strong G-structure. Throws ValidationError
/// with a witness when the action is not strong or an induced function
/// would be ill-defined.
struct OrbitQuotient {
    FinStructure quotient;
    std::vector<Elem> orbit_of;  // universe elem -> quotient elem
};
OrbitQuotient orbit_quotient(const FinStructure& m, const GAction& act);

// -------------------------------------------------------------------------
// Morphisms
// -------------------------------------------------------------------------

struct StructMorphism {
    FinStructure source;
    FinStructure target;
    std::vector<Elem> map;  // total on source universe

    Elem apply(Elem x) const { return map.at(x); }
    Tuple apply(const Tuple& t) const;
    void validate() const;  // map total, values in target universe, shared signature
};

struct MorphismFlags {
    bool is_morphism = false;
    bool is_transfitted = false;
    bool is_embedding = false;   // injective transfitted morphism
    bool is_submersion = false;  // surjective transfitted morphism
    bool is_iso = false;         // bijective morphism with morphism inverse
    bool is_equivariant = false; // only meaningful when actions are supplied
};

MorphismFlags classify_morphism(const StructMorphism& alpha);
MorphismFlags classify_morphism(const StructMorphism& alpha, const GAction& source_act,
                                const GAction& target_act);

StructMorphism compose(const StructMorphism& second, const StructMorphism& first);
StructMorphism identity_morphism(const FinStructure& m);

/// Image substructure, kernel quotient, projection and the induced
/// isomorphism quotient -> image. Requires alpha transfitted.
struct Factorization {
    FinStructure image;
    FinStructure quotient;
    StructMorphism projection;  // source -> quotient
    StructMorphism induced;     // quotient -> image
    std::vector<Elem> image_elems;  // image universe as target ids
};
Factorization factorize_morphism(const StructMorphism& alpha);

// -------------------------------------------------------------------------
// Directed diagrams and colimits
// -------------------------------------------------------------------------

/// A finite inverse system: indices with a partial order where j <= i
/// means "j is later"; the poset is downward directed; connecting
/// morphisms go M_i -> M_j for j <= i.
struct DirectedDiagram {
    std::vector<FinStructure> objects;
    std::vector<std::vector<bool>> le;  // le[j][i] : j <= i
    /// maps[{j,i}] for j <= i: element map M_i -> M_j
    std::map<std::pair<int, int>, std::vector<Elem>> maps;
    /// optional compatible actions (same group on every object)
    std::vector<GAction> actions;

    int count() const { return static_cast<int>(objects.size()); }
    const std::vector<Elem>& map_for(int j, int i) const;

    /// Checks the order is a downward-directed partial order and the maps
    /// are functorial morphisms; actions, when present, must make every
    /// connecting map equivariant. Throws ValidationError.
    void validate() const;
};

struct Colimit {
    FinStructure colimit;
    std::vector<std::vector<Elem>> germ_of;  // germ_of[index][element] -> colimit elem
    std::optional<GAction> action;           // induced limit action when inputs carry one
    std::vector<StructMorphism> germ_maps;   // per-index morphism into the colimit
};

Colimit colimit_diagram(const DirectedDiagram& d);

/// Checks the colimit preservation equivalence for a positive formula:
/// colim |= phi([a])  <=>  exists j <= i with M_j |= phi(rho_ji(a)).
/// Requires all connecting maps to be embeddings and phi positive.
bool verify_colimit_preservation(const DirectedDiagram& d, const Formula& phi, int index,
                                 const Tuple& a);

/// Same check against an already-built colimit of the same diagram;
/// the embedding precondition must have been checked by the caller
/// (use check_embedding_diagram).
bool verify_colimit_preservation(const DirectedDiagram& d, const Colimit& col, const Formula& phi,
                                 int index, const Tuple& a);

/// Throws unless every connecting map of the diagram is an embedding.
void check_embedding_diagram(const DirectedDiagram& d);

// -------------------------------------------------------------------------
// Fixtures
// -------------------------------------------------------------------------

/// The subset-poset structure of the standard combinatorial n-simplex:
/// universe = all subsets of {0..n-1} (boundary drops the full set),
/// one binary relation `lt` interpreted as strict inclusion by default.
/// Comes with the natural symmetric-group action on subsets.
struct SimplexFixture {
    FinStructure structure;
    GAction action;  // S_n permuting subsets
};
SimplexFixture simplex_fixture(int n, bool boundary, bool strict_subset = true);

/// Z_n as a structure in the language {add/2}; optionally with one
/// constant per residue (named "0".."n-1").
FinStructure zmod_structure(int n, bool numerals = false);
/// The subgroup of (Z_n,+) generated by the given residues, acting on
/// zmod_structure(n) by translation.
GAction zmod_translation_action(int n, const std::vector<int>& subgroup_gens);

/// Subgroups of `full.group` whose restricted action keeps `m` a
/// G-structure (under the given options). Throws BoundExceeded when the
/// group is larger than `max_group_order`.
std::vector<std::vector<int>> admissible_subgroups(const FinStructure& m, const GAction& full,
                                                   const GCheckOptions& opts = {},
                                                   int max_group_order = 120);

} // namespace sforcer

#endif
