#ifndef SCOPQ_SPEC_IO_HPP
#define SCOPQ_SPEC_IO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scopq/composite.hpp"
#include "scopq/concept.hpp"

namespace scopq {

// Syntax or schema problem in a spec document (bad JSON, unknown field,
// negative count, dangling reference).
class SpecError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Inconsistency that strict allocation refuses to materialize.
class AllocationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A context is declared either by cell counts (size, with per-exemplar
// intersections) or by an explicit member list.
struct ContextDecl {
  std::string name;
  std::optional<std::uint32_t> size;
  std::optional<std::vector<std::uint32_t>> members;
};

struct ExemplarDecl {
  std::string name;
  std::uint32_t total = 0;
  std::map<std::string, std::uint32_t> intersections;
};

struct ConceptSpecFile {
  int format_version = 1;
  std::string name;
  std::uint32_t universe = 0;
  std::vector<ContextDecl> contexts;
  std::vector<ExemplarDecl> exemplars;
};

ConceptSpecFile parse_concept_spec(const std::string& text);
std::string serialize(const ConceptSpecFile& spec);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Count consistency checks: exemplar totals sum to the universe, per-context
// intersections sum to the declared size, every intersection fits its
// exemplar total. Reports all violations without aborting.
ValidationReport validate(const ConceptSpecFile& spec);

enum class AllocationMode { strict, paper };

struct AllocationReport {
  std::vector<std::string> adjustments;
};

struct AllocatedConcept {
  Concept built;
  AllocationReport report;
};

// Deterministic id assignment: exemplars receive contiguous ranges in spec
// order, and each counted context marks a prefix of every exemplar's range.
// Strict mode requires a fully consistent spec. Paper mode keeps the declared
// universe and context sizes: cell attributions are capped at the exemplar
// total, unattributable context members become exemplar-free ids, and the id
// budget is rebalanced by shaving the largest non-cell remainders; every
// adjustment lands in the report.
AllocatedConcept allocate(const ConceptSpecFile& spec, AllocationMode mode);

// One table column materialized as a standalone concept: the column support
// becomes the universe and the column's cells become the exemplar sets. This
// reproduces each column from its own counts, independent of cross-column
// consistency. `context_name` may be "ground" or "unity" for the totals
// column.
Concept column_concept(const ConceptSpecFile& spec, const std::string& context_name);

struct CompositionSpecFile {
  int format_version = 1;
  std::vector<std::string> factors;
  std::map<std::string, std::string> shared;  // factor name -> context name
  std::optional<std::vector<Tuple>> explicit_rows;  // nullopt: canonical rank pairing
};

CompositionSpecFile parse_composition_spec(const std::string& text);
std::string serialize(const CompositionSpecFile& spec);

struct ResolvedComposition {
  CompositeSpace space;
  SharedContextPairing pairing;
};

// Binds a composition to already-loaded factor concepts (given in spec
// order) and resolves the pairing to explicit aligned tuples.
ResolvedComposition resolve_composition(const CompositionSpecFile& spec,
                                        std::vector<Concept> factors);

}  // namespace scopq

#endif
