#ifndef SFORCER_COHOMOLOGY_HPP
#define SFORCER_COHOMOLOGY_HPP

#include <optional>
#include <string>
#include <vector>

#include "sforcer/forcing.hpp"

namespace sforcer {

// -------------------------------------------------------------------------
// Arithmetic of nilpotent residues
// -------------------------------------------------------------------------

struct NilpotencyProfile {
    bool nilpotent = false;
    std::optional<int> degree;  // least k with a^k = 0 mod n
    bool prime_criterion = false;  // every prime of n divides a
};

/// Brute-force nilpotency (powers until zero or a repeat) next to the
/// prime-divisor criterion. The two must agree; the acceptance suite
/// checks them against each other for every residue of every small
/// modulus.
NilpotencyProfile nilpotency_profile(long long a, long long n);

/// Splits a residue into its coprime unit part q and the remainder b
/// with a = b*q mod n, gcd(q,n) = 1, and every prime of b dividing n.
/// Multiplication by q is an automorphism of Z_n, so a and b generate
/// the same ideal and share their nilpotency degree.
struct CoprimeSplit {
    long long nilpotent_part = 0;  // b
    long long unit_part = 1;       // q
};
CoprimeSplit coprime_split(long long a, long long n);

// -------------------------------------------------------------------------
// Cyclic decompositions
// -------------------------------------------------------------------------

/// A finite abelian group presented as a multiset of cyclic orders,
/// kept sorted; order-one factors are dropped. Two decompositions may
/// present isomorphic groups with different order multisets (the
/// factors of one order can split), so comparisons go through the
/// iso-invariant order statistics.
struct CyclicDecomposition {
    std::vector<long long> orders;  // sorted ascending

    void add(long long order);
    void add_all(const CyclicDecomposition& other);
    long long total_order() const;
    bool trivial() const { return orders.empty(); }

    /// Number of elements of each order in the presented group.
    std::map<long long, long long> order_statistics() const;
    bool isomorphic_to(const CyclicDecomposition& other) const;

    /// Fixed table form: factors as `Z_k^m` joined by " + ", sorted by
    /// k; the trivial group prints as "0".
    std::string to_string() const;

    bool operator==(const CyclicDecomposition&) const = default;
};

/// ker(a_ker * .) / im(a_im * .) inside Z_n, as a single cyclic factor:
/// the kernel has order gcd(a_ker, n), the image has order
/// n / gcd(a_im, n), and the quotient is cyclic of the ratio. Requires
/// the image to lie inside the kernel (a_ker * a_im = 0 mod n). The
/// closed form is cross-checked against coset enumeration in the tests.
CyclicDecomposition cyclic_subquotient(long long a_ker, long long a_im, long long n);

// -------------------------------------------------------------------------
// Diagonal differentials
// -------------------------------------------------------------------------

/// A coordinatewise multiplication operator on Z_n-valued sequences
/// over a finite index set. Every eigenvalue must be nilpotent mod n;
/// the order N is the largest per-coordinate nilpotency degree.
struct DiagonalDifferential {
    long long modulus = 0;
    std::vector<long long> eigenvalues;  // one per index
    std::vector<int> degrees;            // per-index nilpotency degree
    int order = 0;                       // N = max degree

    static DiagonalDifferential make(long long n, std::vector<long long> eigenvalues);
};

/// The m-th amplitude cohomology ker d^m / im d^(N-m), computed per
/// coordinate through cyclic_subquotient and returned as the multiset
/// union over the index set.
CyclicDecomposition amplitude_cohomology(const DiagonalDifferential& d, int m);

/// Brute-force oracle on the full product group Z_n^I: enumerate the
/// kernel and image subgroups, build the quotient's order statistics,
/// and decompose. Exponential in |I|; for cross-checks only.
CyclicDecomposition amplitude_cohomology_bruteforce(const DiagonalDifferential& d, int m);

// -------------------------------------------------------------------------
// Differential presheaves and generic cohomology
// -------------------------------------------------------------------------

/// A presheaf of Z_n sequence structures together with one endomorphism
/// per fiber commuting with the restrictions.
struct DifferentialPresheaf {
    PresheafOfGStructures presheaf;
    std::map<int, std::vector<Elem>> endo;  // per open index
    long long modulus = 0;

    const std::vector<Elem>& endo_at(int open_idx) const;
};

/// The sequence sheaf of Z_n over the given base points with the
/// diagonal differential of the given eigenvalues (one per base point).
DifferentialPresheaf diagonal_differential_presheaf(long long n,
                                                    const std::vector<long long>& eigenvalues,
                                                    std::size_t max_fiber_size = 10000);

/// Naturality and per-fiber morphism checks for the differential;
/// violations are data. Reports the nilpotency order when the
/// differential is diagonal on a sequence fixture.
struct DifferentialReport {
    ViolationReport violations;
    std::optional<int> order;
};
DifferentialReport validate_differential(const DifferentialPresheaf& dp);

/// Generic cohomology along a filter: transports the differential to
/// the colimit germ-wise and computes ker d^m / im d^(N-m) there by
/// enumeration ("ordinary" = N = 2, m = 1, requiring d^2 = 0).
/// The group structure of the colimit fiber must be abelian.
struct GenericCohomology {
    CyclicDecomposition decomposition;
    long long kernel_order = 0;
    long long image_order = 0;
};
GenericCohomology generic_cohomology(const DifferentialPresheaf& dp, const OpenFilter& f,
                                     std::optional<int> amplitude = std::nullopt);

/// The germ map at the full space, its commutation with the
/// differential, and the induced map on ordinary cohomology classes
/// (well-definedness verified by enumeration).
struct GlobalToGeneric {
    StructMorphism chain_map;  // fiber at X -> generic model
    bool commutes_with_differential = false;
    long long global_cohomology_order = 0;
    long long generic_cohomology_order = 0;
    bool cohomology_map_well_defined = false;
    bool cohomology_map_injective = false;
    bool cohomology_map_surjective = false;
};
GlobalToGeneric global_to_generic_map(const DifferentialPresheaf& dp, const OpenFilter& f);

} // namespace sforcer

#endif
