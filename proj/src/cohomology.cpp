#include "sforcer/cohomology.hpp"

#include <algorithm>
#include <numeric>

namespace sforcer {

// -------------------------------------------------------------------------
// Residue arithmetic
// -------------------------------------------------------------------------

namespace {

std::vector<long long> prime_factors(long long n) {
    std::vector<long long> out;
    for (long long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) out.push_back(n);
    return out;
}

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

} // namespace

NilpotencyProfile nilpotency_profile(long long a, long long n) {
    if (n < 2) throw ValidationError("modulus must be at least 2");
    if (a < 0 || a >= n) throw ValidationError("residue outside [0, n)");
    NilpotencyProfile out;

    std::set<long long> seen;
    long long x = a % n;
    int k = 1;
    for (;;) {
        if (x == 0) {
            out.nilpotent = true;
            out.degree = k;
            break;
        }
        if (!seen.insert(x).second) break;  // entered a nonzero cycle
        x = (x * a) % n;
        ++k;
    }

    out.prime_criterion = true;
    for (long long p : prime_factors(n))
        if (a % p != 0) out.prime_criterion = false;
    return out;
}

CoprimeSplit coprime_split(long long a, long long n) {
    if (n < 2) throw ValidationError("modulus must be at least 2");
    if (a == 0) return {0, 1};
    CoprimeSplit out;
    long long q = a, b = 1;
    for (long long p : prime_factors(n))
        while (q % p == 0) {
            q /= p;
            b *= p;
        }
    out.nilpotent_part = b % n;
    out.unit_part = q % n;
    return out;
}

// -------------------------------------------------------------------------
// CyclicDecomposition
// -------------------------------------------------------------------------

void CyclicDecomposition::add(long long order) {
    if (order < 1) throw ValidationError("cyclic order must be positive");
    if (order == 1) return;
    orders.insert(std::upper_bound(orders.begin(), orders.end(), order), order);
}

void CyclicDecomposition::add_all(const CyclicDecomposition& other) {
    for (long long o : other.orders) add(o);
}

long long CyclicDecomposition::total_order() const {
    long long t = 1;
    for (long long o : orders) t *= o;
    return t;
}

std::map<long long, long long> CyclicDecomposition::order_statistics() const {
    long long total = total_order();
    if (total > 2'000'000) throw BoundExceeded("group too large for order statistics");
    std::map<long long, long long> stats;
    // iterate the product group, tracking the lcm of component orders
    std::vector<long long> idx(orders.size(), 0);
    for (;;) {
        long long ord = 1;
        for (std::size_t i = 0; i < orders.size(); ++i) {
            long long comp = orders[i] / gcd_ll(orders[i], idx[i]);
            ord = ord / gcd_ll(ord, comp) * comp;
        }
        ++stats[ord];
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == orders[k]) idx[k++] = 0;
        if (k == idx.size()) break;
        if (orders.empty()) break;
    }
    return stats;
}

bool CyclicDecomposition::isomorphic_to(const CyclicDecomposition& other) const {
    if (total_order() != other.total_order()) return false;
    return order_statistics() == other.order_statistics();
}

std::string CyclicDecomposition::to_string() const {
    if (orders.empty()) return "0";
    std::string out;
    std::size_t i = 0;
    while (i < orders.size()) {
        std::size_t j = i;
        while (j < orders.size() && orders[j] == orders[i]) ++j;
        if (!out.empty()) out += " + ";
        out += "Z_" + std::to_string(orders[i]);
        if (j - i > 1) out += "^" + std::to_string(j - i);
        i = j;
    }
    return out;
}

CyclicDecomposition cyclic_subquotient(long long a_ker, long long a_im, long long n) {
    if (n < 2) throw ValidationError("modulus must be at least 2");
    a_ker = ((a_ker % n) + n) % n;
    a_im = ((a_im % n) + n) % n;
    if ((a_ker * a_im) % n != 0)
        throw ValidationError("image does not lie inside the kernel at this index");
    long long ker_order = gcd_ll(a_ker, n);  // gcd(0,n) = n: the zero map keeps everything
    long long im_order = n / gcd_ll(a_im, n);
    CyclicDecomposition out;
    out.add(ker_order / im_order);
    return out;
}

// -------------------------------------------------------------------------
// Diagonal differentials
// -------------------------------------------------------------------------

DiagonalDifferential DiagonalDifferential::make(long long n, std::vector<long long> eigenvalues) {
    if (n < 2) throw ValidationError("modulus must be at least 2");
    if (eigenvalues.empty()) throw ValidationError("empty index set");
    DiagonalDifferential d;
    d.modulus = n;
    for (long long a : eigenvalues) {
        long long r = ((a % n) + n) % n;
        NilpotencyProfile prof = nilpotency_profile(r, n);
        if (!prof.nilpotent)
            throw ValidationError("eigenvalue " + std::to_string(r) + " is not nilpotent mod " +
                                  std::to_string(n));
        d.eigenvalues.push_back(r);
        d.degrees.push_back(*prof.degree);
        d.order = std::max(d.order, *prof.degree);
    }
    // d^N = 0 and d^(N-1) != 0
    for (std::size_t i = 0; i < d.eigenvalues.size(); ++i) {
        long long p = 1;
        for (int k = 0; k < d.order; ++k) p = (p * d.eigenvalues[i]) % n;
        if (p != 0) throw ValidationError("internal: order check failed");
    }
    if (d.order > 1) {
        bool nonzero = false;
        for (std::size_t i = 0; i < d.eigenvalues.size(); ++i) {
            long long p = 1;
            for (int k = 0; k + 1 < d.order; ++k) p = (p * d.eigenvalues[i]) % n;
            if (p != 0) nonzero = true;
        }
        if (!nonzero) throw ValidationError("internal: order is not minimal");
    }
    return d;
}

namespace {

long long pow_mod(long long a, int k, long long n) {
    long long p = 1;
    for (int i = 0; i < k; ++i) p = (p * a) % n;
    return p;
}

} // namespace

CyclicDecomposition amplitude_cohomology(const DiagonalDifferential& d, int m) {
    if (m < 1 || m > d.order - 1)
        throw ValidationError("amplitude must lie between 1 and N-1 = " +
                              std::to_string(d.order - 1));
    CyclicDecomposition out;
    for (long long a : d.eigenvalues)
        out.add_all(cyclic_subquotient(pow_mod(a, m, d.modulus), pow_mod(a, d.order - m, d.modulus),
                                       d.modulus));
    return out;
}

namespace {

// invariant-factor form from order statistics, via the primary parts
CyclicDecomposition decomposition_from_stats(const std::map<long long, long long>& stats,
                                             long long group_order) {
    std::map<long long, std::vector<int>> primary;  // prime -> exponent multiset
    for (long long p : prime_factors(group_order)) {
        // lambda_j = log_p #(elements of order dividing p^j)
        std::vector<long long> counts;  // index j
        counts.push_back(1);
        for (long long pj = p; pj <= group_order; pj *= p) {
            long long c = 0;
            for (const auto& [ord, cnt] : stats)
                if (pj % ord == 0) c += cnt;
            counts.push_back(c);
            if (c == counts[counts.size() - 2]) break;
        }
        std::vector<int> lambda;
        for (long long c : counts) {
            int l = 0;
            long long x = c;
            while (x > 1) {
                x /= p;
                ++l;
            }
            lambda.push_back(l);
        }
        // factors with exponent >= j: lambda_j - lambda_{j-1}
        std::vector<int> atleast;
        for (std::size_t j = 1; j < lambda.size(); ++j) atleast.push_back(lambda[j] - lambda[j - 1]);
        std::vector<int> exps;
        for (std::size_t j = 0; j < atleast.size(); ++j) {
            int exactly = atleast[j] - (j + 1 < atleast.size() ? atleast[j + 1] : 0);
            for (int t = 0; t < exactly; ++t) exps.push_back(static_cast<int>(j) + 1);
        }
        std::sort(exps.rbegin(), exps.rend());
        primary[p] = exps;
    }
    // zip the primary parts, largest exponents together, into invariant factors
    std::size_t rank = 0;
    for (const auto& [p, exps] : primary) rank = std::max(rank, exps.size());
    CyclicDecomposition out;
    for (std::size_t i = 0; i < rank; ++i) {
        long long factor = 1;
        for (const auto& [p, exps] : primary)
            if (i < exps.size()) {
                long long pe = 1;
                for (int t = 0; t < exps[i]; ++t) pe *= p;
                factor *= pe;
            }
        out.add(factor);
    }
    return out;
}

} // namespace

CyclicDecomposition amplitude_cohomology_bruteforce(const DiagonalDifferential& d, int m) {
    if (m < 1 || m > d.order - 1) throw ValidationError("amplitude out of range");
    const long long n = d.modulus;
    const std::size_t k = d.eigenvalues.size();
    double total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= static_cast<double>(n);
    if (total > 300000) throw BoundExceeded("product group too large for brute force");

    std::vector<long long> kmul(k), imul(k);
    for (std::size_t i = 0; i < k; ++i) {
        kmul[i] = pow_mod(d.eigenvalues[i], m, n);
        imul[i] = pow_mod(d.eigenvalues[i], d.order - m, n);
    }

    auto tuples = all_tuples(static_cast<int>(n), static_cast<int>(k));
    std::set<Tuple> image;
    for (const auto& t : tuples) {
        Tuple img(k);
        for (std::size_t i = 0; i < k; ++i)
            img[i] = static_cast<Elem>((imul[i] * t[i]) % n);
        image.insert(img);
    }
    std::vector<Tuple> kernel;
    for (const auto& t : tuples) {
        bool ker = true;
        for (std::size_t i = 0; i < k && ker; ++i) ker = (kmul[i] * t[i]) % n == 0;
        if (ker) kernel.push_back(t);
    }

    // order of each coset in kernel/image
    std::map<long long, long long> stats;
    for (const auto& x : kernel) {
        long long t = 1;
        Tuple acc = x;
        while (!image.count(acc)) {
            for (std::size_t i = 0; i < k; ++i) acc[i] = static_cast<Elem>((acc[i] + x[i]) % n);
            ++t;
        }
        ++stats[t];
    }
    long long im_size = static_cast<long long>(image.size() & 0x7fffffffffffffffull);
    // each coset was visited once per representative
    std::map<long long, long long> coset_stats;
    for (const auto& [ord, cnt] : stats) coset_stats[ord] = cnt / im_size;
    long long q = static_cast<long long>(kernel.size()) / im_size;
    return decomposition_from_stats(coset_stats, q);
}

// -------------------------------------------------------------------------
// Differential presheaves
// -------------------------------------------------------------------------

const std::vector<Elem>& DifferentialPresheaf::endo_at(int open_idx) const {
    auto it = endo.find(open_idx);
    if (it == endo.end())
        throw ValidationError("no differential component at open index " + std::to_string(open_idx));
    return it->second;
}

DifferentialPresheaf diagonal_differential_presheaf(long long n,
                                                    const std::vector<long long>& eigenvalues,
                                                    std::size_t max_fiber_size) {
    DiagonalDifferential d = DiagonalDifferential::make(n, eigenvalues);
    std::vector<std::string> points;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) points.push_back(std::to_string(i));

    DifferentialPresheaf out;
    out.modulus = n;
    FinStructure coeff = zmod_structure(static_cast<int>(n));
    out.presheaf = sequence_sheaf(coeff, GAction::trivial(coeff.size()), points, max_fiber_size);

    const int c = coeff.size();
    for (int u : out.presheaf.nonempty_open_indices()) {
        PointSet us = out.presheaf.topology.opens[u];
        std::vector<int> pts;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (us & (PointSet(1) << i)) pts.push_back(static_cast<int>(i));
        auto tuples = all_tuples(c, static_cast<int>(pts.size()));
        std::vector<Elem> de(tuples.size());
        for (std::size_t t = 0; t < tuples.size(); ++t) {
            Tuple moved(pts.size());
            for (std::size_t i = 0; i < pts.size(); ++i)
                moved[i] = static_cast<Elem>((d.eigenvalues[pts[i]] * tuples[t][i]) % n);
            de[t] = static_cast<Elem>(FunTable::index_of(moved, c));
        }
        out.endo[u] = std::move(de);
    }
    return out;
}

DifferentialReport validate_differential(const DifferentialPresheaf& dp) {
    dp.presheaf.check_complete();
    DifferentialReport out;
    const PresheafOfGStructures& p = dp.presheaf;
    auto name = [&](int u) { return p.topology.set_to_string(p.topology.opens[u]); };

    for (int u : p.nonempty_open_indices()) {
        const auto& de = dp.endo_at(u);
        if (static_cast<int>(de.size()) != p.fiber(u).size()) {
            out.violations.push_back({"totality", "differential not total at " + name(u)});
            continue;
        }
        StructMorphism m{p.fiber(u), p.fiber(u), de};
        MorphismFlags flags = classify_morphism(m);
        if (!flags.is_morphism)
            out.violations.push_back({"morphism", "differential is not a morphism at " + name(u)});
        if (!flags.is_transfitted)
            out.violations.push_back({"transfitted", "preimage condition fails at " + name(u)});
    }
    for (int u : p.nonempty_open_indices())
        for (int v : p.nonempty_open_indices()) {
            if ((p.topology.opens[v] & p.topology.opens[u]) != p.topology.opens[v]) continue;
            const auto& rho = p.restrict_map(u, v);
            const auto& du = dp.endo_at(u);
            const auto& dv = dp.endo_at(v);
            for (Elem e = 0; e < p.fiber(u).size(); ++e)
                if (rho[du[e]] != dv[rho[e]]) {
                    out.violations.push_back({"naturality", "differential does not commute with " +
                                                                name(u) + " -> " + name(v)});
                    break;
                }
        }

    if (out.violations.empty()) {
        // nilpotency order on the fiber at the full space
        int x_idx = p.topology.open_index(p.topology.full_set());
        const auto& dx = dp.endo_at(x_idx);
        const int size = p.fiber(x_idx).size();
        std::vector<Elem> power(size);
        std::iota(power.begin(), power.end(), 0);
        for (int k = 1; k <= 64; ++k) {
            for (Elem& e : power) e = dx[e];
            bool constant = true;
            for (Elem e = 1; e < size && constant; ++e) constant = power[e] == power[0];
            bool zero = constant && dx[power[0]] == power[0];
            if (zero) {
                out.order = k;
                break;
            }
        }
    }
    return out;
}

// -------------------------------------------------------------------------
// Generic cohomology
// -------------------------------------------------------------------------

namespace {

// the additive structure of a fiber: a binary function that is an
// abelian group operation, with its identity element
struct AbelianOp {
    const FunTable* add = nullptr;
    Elem zero = -1;
};

AbelianOp abelian_structure(const FinStructure& m) {
    for (const auto& [fname, table] : m.fun_interp) {
        if (table.arity != 2) continue;
        const int n = m.size();
        Elem zero = -1;
        for (Elem e = 0; e < n && zero < 0; ++e) {
            bool id = true;
            for (Elem x = 0; x < n && id; ++x)
                id = table.apply({e, x}) == x && table.apply({x, e}) == x;
            if (id) zero = e;
        }
        if (zero < 0) continue;
        bool ok = true;
        for (Elem a = 0; a < n && ok; ++a) {
            bool inverse = false;
            for (Elem b = 0; b < n && !inverse; ++b) inverse = table.apply({a, b}) == zero;
            ok = inverse;
            for (Elem b = 0; b < n && ok; ++b) {
                ok = table.apply({a, b}) == table.apply({b, a});
                for (Elem cc = 0; cc < n && ok; ++cc)
                    ok = table.apply({table.apply({a, b}), cc}) == table.apply({a, table.apply({b, cc})});
            }
        }
        if (ok) return {&table, zero};
    }
    throw ValidationError("fiber carries no abelian group operation");
}

std::map<long long, long long> quotient_order_stats(const FinStructure& m, const AbelianOp& op,
                                                    const std::vector<Elem>& kernel,
                                                    const std::set<Elem>& image) {
    std::map<long long, long long> stats;
    for (Elem x : kernel) {
        long long t = 1;
        Elem acc = x;
        while (!image.count(acc)) {
            acc = op.add->apply({acc, x});
            ++t;
        }
        ++stats[t];
    }
    std::map<long long, long long> out;
    for (const auto& [ord, cnt] : stats) out[ord] = cnt / static_cast<long long>(image.size());
    return out;
}

} // namespace

GenericCohomology generic_cohomology(const DifferentialPresheaf& dp, const OpenFilter& f,
                                     std::optional<int> amplitude) {
    DifferentialReport rep = validate_differential(dp);
    if (!rep.violations.empty())
        throw ValidationError(rep.violations.front().condition + ": " +
                              rep.violations.front().detail);

    ForcingContext ctx(dp.presheaf);
    GenericModel gm = generic_model(ctx, f);
    const FinStructure& s = gm.structure;

    // transport the differential germ-wise; well defined by naturality
    std::vector<Elem> d(s.size(), -1);
    for (std::size_t pos = 0; pos < gm.member_indices.size(); ++pos) {
        int u = gm.member_indices[pos];
        const auto& du = dp.endo_at(u);
        for (Elem e = 0; e < dp.presheaf.fiber(u).size(); ++e) {
            Elem cls = gm.germ_of[pos][e];
            if (d[cls] < 0) d[cls] = gm.germ_of[pos][du[e]];
        }
    }

    AbelianOp op = abelian_structure(s);

    int ker_power, im_power;
    if (!amplitude) {
        // ordinary mode needs d^2 = 0
        for (Elem e = 0; e < s.size(); ++e)
            if (d[d[e]] != op.zero)
                throw ValidationError("d^2 is nonzero; ordinary cohomology undefined");
        ker_power = 1;
        im_power = 1;
    } else {
        int order = 0;
        std::vector<Elem> power(s.size());
        std::iota(power.begin(), power.end(), 0);
        for (int k = 1; k <= 64 && order == 0; ++k) {
            for (Elem& e : power) e = d[e];
            bool zero = true;
            for (Elem e = 0; e < s.size() && zero; ++e) zero = power[e] == op.zero;
            if (zero) order = k;
        }
        if (order == 0) throw ValidationError("differential is not nilpotent on the generic model");
        if (*amplitude < 1 || *amplitude > order - 1)
            throw ValidationError("amplitude out of range 1..N-1 with N = " + std::to_string(order));
        ker_power = *amplitude;
        im_power = order - *amplitude;
    }

    auto iterate = [&](Elem e, int k) {
        for (int i = 0; i < k; ++i) e = d[e];
        return e;
    };
    std::vector<Elem> kernel;
    for (Elem e = 0; e < s.size(); ++e)
        if (iterate(e, ker_power) == op.zero) kernel.push_back(e);
    std::set<Elem> image;
    for (Elem e = 0; e < s.size(); ++e) image.insert(iterate(e, im_power));

    GenericCohomology out;
    out.kernel_order = static_cast<long long>(kernel.size());
    out.image_order = static_cast<long long>(image.size());
    auto stats = quotient_order_stats(s, op, kernel, image);
    out.decomposition = decomposition_from_stats(stats, out.kernel_order / out.image_order);
    return out;
}

GlobalToGeneric global_to_generic_map(const DifferentialPresheaf& dp, const OpenFilter& f) {
    DifferentialReport rep = validate_differential(dp);
    if (!rep.violations.empty())
        throw ValidationError(rep.violations.front().condition + ": " +
                              rep.violations.front().detail);

    ForcingContext ctx(dp.presheaf);
    GenericModel gm = generic_model(ctx, f);
    const PresheafOfGStructures& p = dp.presheaf;
    int x_idx = p.topology.open_index(p.topology.full_set());
    int x_pos = -1;
    for (std::size_t i = 0; i < gm.member_indices.size(); ++i)
        if (gm.member_indices[i] == x_idx) x_pos = static_cast<int>(i);
    if (x_pos < 0) throw ValidationError("filter does not contain the full space");

    GlobalToGeneric out;
    out.chain_map = {p.fiber(x_idx), gm.structure, gm.germ_of[x_pos]};

    std::vector<Elem> dgen(gm.structure.size(), -1);
    for (std::size_t pos = 0; pos < gm.member_indices.size(); ++pos) {
        int u = gm.member_indices[pos];
        const auto& du = dp.endo_at(u);
        for (Elem e = 0; e < p.fiber(u).size(); ++e) {
            Elem cls = gm.germ_of[pos][e];
            if (dgen[cls] < 0) dgen[cls] = gm.germ_of[pos][du[e]];
        }
    }
    const auto& dx = dp.endo_at(x_idx);
    out.commutes_with_differential = true;
    for (Elem e = 0; e < p.fiber(x_idx).size(); ++e)
        if (out.chain_map.map[dx[e]] != dgen[out.chain_map.map[e]])
            out.commutes_with_differential = false;

    AbelianOp opx = abelian_structure(p.fiber(x_idx));
    AbelianOp opg = abelian_structure(gm.structure);
    for (Elem e = 0; e < p.fiber(x_idx).size(); ++e)
        if (dx[dx[e]] != opx.zero) throw ValidationError("d^2 is nonzero on the full-space fiber");

    std::vector<Elem> ker_x, ker_g;
    std::set<Elem> im_x, im_g;
    for (Elem e = 0; e < p.fiber(x_idx).size(); ++e) {
        if (dx[e] == opx.zero) ker_x.push_back(e);
        im_x.insert(dx[e]);
    }
    for (Elem e = 0; e < gm.structure.size(); ++e) {
        if (dgen[e] == opg.zero) ker_g.push_back(e);
        im_g.insert(dgen[e]);
    }
    out.global_cohomology_order = static_cast<long long>(ker_x.size() / im_x.size());
    out.generic_cohomology_order = static_cast<long long>(ker_g.size() / im_g.size());

    auto canon = [](Elem x, const std::set<Elem>& im, const AbelianOp& op) {
        Elem best = -1;
        for (Elem i : im) {
            Elem y = op.add->apply({x, i});
            if (best < 0 || y < best) best = y;
        }
        return best;
    };

    out.cohomology_map_well_defined = true;
    std::map<Elem, Elem> induced;  // canonical X-coset -> canonical generic coset
    for (Elem x : ker_x) {
        Elem cx = canon(x, im_x, opx);
        Elem cg = canon(out.chain_map.map[x], im_g, opg);
        auto it = induced.find(cx);
        if (it == induced.end())
            induced[cx] = cg;
        else if (it->second != cg)
            out.cohomology_map_well_defined = false;
    }
    std::set<Elem> image_cosets;
    for (const auto& [cx, cg] : induced) image_cosets.insert(cg);
    out.cohomology_map_injective =
        static_cast<long long>(image_cosets.size()) == static_cast<long long>(induced.size());
    out.cohomology_map_surjective =
        static_cast<long long>(image_cosets.size()) == out.generic_cohomology_order;
    return out;
}

} // namespace sforcer
