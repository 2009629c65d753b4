#ifndef SFORCER_DOCUMENT_HPP
#define SFORCER_DOCUMENT_HPP

#include <map>
#include <string>
#include <vector>

#include "sforcer/cohomology.hpp"

namespace sforcer {

/// A parsed .sfd document: named declarations in a line-oriented block
/// format. Blocks open with `kind name {` and close with `}`; inside a
/// block each line is one keyword clause. Point sets are written
/// `{a b}`, tuples `(x y)`, comments start with `#`.
///
/// Block kinds: signature, group, structure (with an optional action
/// sub-clause), topology, presheaf (explicit fibers/restrictions or a
/// `fixture` clause), differential, filter, morphism; plus the
/// one-line form `formula NAME SIGNATURE "text"`.
struct Document {
    std::map<std::string, LanguageSig> signatures;
    std::map<std::string, FinGroup> groups;
    std::map<std::string, FinStructure> structures;
    std::map<std::string, GAction> structure_actions;  // by structure name
    std::map<std::string, FinTopology> topologies;
    std::map<std::string, PresheafOfGStructures> presheaves;
    std::map<std::string, DifferentialPresheaf> differentials;
    std::map<std::string, Formula> formulas;
    std::map<std::string, std::string> formula_sigs;  // formula name -> signature name
    std::map<std::string, OpenFilter> filters;
    std::map<std::string, StructMorphism> morphisms;

    /// The single declared presheaf, or the one with the given name
    /// (differentials contribute theirs). Throws ValidationError.
    const PresheafOfGStructures& presheaf(const std::string& name = "") const;
    const DifferentialPresheaf& differential(const std::string& name = "") const;
};

/// Parses and fully resolves a document; cross-reference failures and
/// malformed syntax raise ParseError with a line-anchored message.
Document parse_document(const std::string& text);

// Block emitters for generated documents. Output re-parses to the same
// data (the golden files in the tests rely on this being stable).
std::string emit_signature(const std::string& name, const LanguageSig& sig);
std::string emit_group(const std::string& name, const FinGroup& g);
std::string emit_structure(const std::string& name, const std::string& sig_name,
                           const FinStructure& m, const GAction* action = nullptr,
                           const std::string& group_name = "");
std::string emit_topology(const std::string& name, const FinTopology& t);

/// Generated fixture documents for the CLI `fixtures` subcommand.
/// simplex/boundary emit expanded blocks; the presheaf generators emit
/// a fixture clause (their expanded fibers can be very large).
std::string fixture_document(const std::string& kind, const std::vector<std::string>& params);

} // namespace sforcer

#endif
