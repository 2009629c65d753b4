#ifndef SFORCER_FIXTURES_HPP
#define SFORCER_FIXTURES_HPP

#include <string>
#include <vector>

#include "sforcer/sheaf.hpp"

namespace sforcer {

/// One relation R/1 and one function f/1: the signature the equivalence
/// sweeps run over.
LanguageSig sweep_signature();

struct NamedTopology {
    std::string name;
    FinTopology topology;
};

/// A deterministic catalog of topologies on up to `max_points` points:
/// discrete, indiscrete, chains, particular-point and split spaces.
std::vector<NamedTopology> sweep_topologies(int max_points);

struct NamedPresheaf {
    std::string name;
    PresheafOfGStructures presheaf;
};

/// Candidate presheaves over one topology, fibers of at most three
/// elements: constant fibers, skyscrapers, two-level collapses and
/// fiber chains with non-surjective restrictions. All candidates pass
/// validate_presheaf; exactness varies and is the caller's filter.
std::vector<NamedPresheaf> sweep_presheaves(const FinTopology& t);

/// The candidates that are exact (gluings exist).
std::vector<NamedPresheaf> sweep_exact_presheaves(const FinTopology& t);

} // namespace sforcer

#endif
