#ifndef SFORCER_FORCING_HPP
#define SFORCER_FORCING_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "sforcer/sheaf.hpp"

namespace sforcer {

/// How the universal-quantifier clause supplies witnesses b:
///  - PaperLiteral: pick an open V around the point; b ranges over the
///    sections of that V only.
///  - CaicedoVariant: b additionally ranges over the sections of every
///    open W between the evaluation point and V, which makes the
///    relation invariant under restriction of parameters by
///    construction.
enum class ForcingMode { PaperLiteral, CaicedoVariant };

struct ForcingOptions {
    ForcingMode mode = ForcingMode::PaperLiteral;
    /// Use the minimal open neighborhood instead of enumerating all
    /// opens in the clauses where the condition is antitone in the open.
    /// The unoptimized form is kept for cross-checking.
    bool optimize_min_nbhd = true;
};

/// The pointwise forcing relation over one presheaf. Formulas are
/// evaluated by structural induction:
///  - positive formulas hold at x iff they hold classically in the
///    fiber at the minimal open neighborhood of x;
///  - negation, implication and the universal quantifier look for an
///    open around x whose points all satisfy the corresponding
///    condition;
///  - mixed conjunction/disjunction/existential recurse structurally.
/// Evaluation is pure; results are memoized per (formula, point,
/// section). A context may be shared across threads.
class ForcingContext {
public:
    explicit ForcingContext(PresheafOfGStructures p, ForcingOptions opts = {});

    const PresheafOfGStructures& presheaf() const { return p_; }
    const ForcingOptions& options() const { return opts_; }

    /// Does the presheaf force phi(a) at the point? The section tuple
    /// components correspond to the free variables of phi in
    /// first-occurrence order; the point must lie in the section's open.
    bool forces_at(int point, const SectionTuple& a, const Formula& phi) const;

    /// Forcing on an open: at every point of v_idx (a subset of the
    /// section's open).
    bool forces_on(int v_idx, const SectionTuple& a, const Formula& phi) const;

    /// The points of the section's open at which phi(a) is forced.
    PointSet forcing_locus(const SectionTuple& a, const Formula& phi) const;

    std::size_t memo_entries() const;

private:
    PresheafOfGStructures p_;
    ForcingOptions opts_;
    std::vector<int> min_nbhd_idx_;  // per point: open index of U_x

    struct KeyHash {
        std::size_t operator()(const std::tuple<int, int, int, Tuple>& k) const;
    };
    mutable std::unordered_map<std::tuple<int, int, int, Tuple>, bool, KeyHash> memo_;
    mutable std::mutex memo_mutex_;

    using Assignment = std::map<std::string, Elem>;
    bool eval(int point, int u_idx, const Assignment& asg, const Formula& phi) const;
    bool eval_uncached(int point, int u_idx, const Assignment& asg, const Formula& phi) const;
    Assignment restrict_asg(const Assignment& asg, int u_idx, int v_idx) const;
};

// -------------------------------------------------------------------------
// Generic filters and generic models
// -------------------------------------------------------------------------

struct GenericityOptions {
    FormulaEnumOptions formula_space;  // bounded space; defaults: two ops
    GenericityOptions() { formula_space.max_ops = 2; }
};

struct GenericityResult {
    bool generic = true;
    std::string failing_instance;  // first failure, when not generic
    int decidability_checks = 0;
    int witness_checks = 0;
};

/// Bounded genericity check: clause one (some member decides every
/// formula on every section) and clause two (forced existentials have
/// witnesses on some member), over the bounded formula space.
GenericityResult is_generic_filter(const ForcingContext& ctx, const OpenFilter& f,
                                   const GenericityOptions& opts = {});

/// The colimit of the fibers along a filter, directed by reverse
/// inclusion, with its germ maps and inherited action. On a finite
/// space the colimit is isomorphic to the fiber at the intersection of
/// the filter (verified on construction).
struct GenericModel {
    OpenFilter filter;
    FinStructure structure;
    std::vector<int> member_indices;         // diagram position -> open index
    std::vector<std::vector<Elem>> germ_of;  // per diagram position
    std::optional<GAction> action;
    int min_member_pos = -1;

    Elem germ(int open_idx, Elem e) const;
    Tuple germ_tuple(const SectionTuple& s) const;
};

GenericModel generic_model(const ForcingContext& ctx, const OpenFilter& f);

/// The three statements of the generic-model equivalence for one
/// formula and section: truth in the generic model, forcing of the
/// translated formula on some member below U, and membership of the
/// translated formula's locus in the filter.
struct GmtResult {
    bool s1 = false;
    bool s2 = false;
    bool s3 = false;
    bool all_equal() const { return s1 == s2 && s2 == s3; }
};

GmtResult verify_generic_model_theorem(const ForcingContext& ctx, const GenericModel& gm,
                                       const Formula& phi, const SectionTuple& a);

/// Witness search for a forced existential: a dense open below the
/// section's open and a section of it making the body forced there.
struct MaximumPrincipleWitness {
    int open_index = -1;
    Elem witness = -1;
};
std::optional<MaximumPrincipleWitness> maximum_principle_witness(const ForcingContext& ctx,
                                                                 const SectionTuple& a,
                                                                 const Formula& phi,
                                                                 const std::string& witness_var);

/// Double negation against dense witnesses: the left side is
/// forcing of ~~phi on the section's open; the witness, when present,
/// is a dense open below it forcing phi.
struct DoubleNegationDense {
    bool lhs = false;
    std::optional<int> dense_witness_open;
};
DoubleNegationDense double_negation_dense(const ForcingContext& ctx, const SectionTuple& a,
                                          const Formula& phi);

/// Direct implementation of the separation condition behind the
/// excluded-middle sentence, written independently of the forcing
/// engine: near the point, every pair of sections of a minimal
/// neighborhood is either equal or separated on that neighborhood.
bool excluded_middle_separation_direct(const PresheafOfGStructures& p, int point);

// -------------------------------------------------------------------------
// Functoriality
// -------------------------------------------------------------------------

struct InducedGenericMorphism {
    GenericModel source_model;
    GenericModel target_model;
    StructMorphism morphism;
};

/// Applies a natural family of fiber morphisms germ-wise between the
/// generic models of two presheaves over one topology. Naturality of
/// the family is checked first; a failing square is reported.
InducedGenericMorphism induced_generic_morphism(const PresheafOfGStructures& src,
                                                const PresheafOfGStructures& dst,
                                                const std::map<int, std::vector<Elem>>& tau,
                                                const OpenFilter& f);

} // namespace sforcer

#endif
