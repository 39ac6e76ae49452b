#ifndef SCOPQ_CONCEPT_HPP
#define SCOPQ_CONCEPT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scopq/dense.hpp"
#include "scopq/rational.hpp"

namespace scopq {

inline constexpr const char* kUnityName = "unity";

// A context as the set of basic contexts at or below it; realized as the
// projector onto the spanned basis labels.
struct ContextSet {
  std::string concept_name;
  std::string name;
  std::vector<std::uint32_t> members;  // sorted ascending, unique
};

ContextSet meet(const ContextSet& a, const ContextSet& b);

bool contains(const ContextSet& e, std::uint32_t id);

enum class StateKind { pure, density };

// Sparse state over a concept's basic-context basis. Pure states hold an
// amplitude per label, density states a coefficient per label pair. States
// built by the model are count-uniform over a support set, which keeps every
// weight an exact ratio of set sizes; arbitrary amplitudes are allowed for
// testing.
struct SparseState {
  StateKind kind = StateKind::pure;
  std::string concept_name;
  std::map<std::uint32_t, Complex> amplitudes;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Complex> coefficients;
  bool uniform = false;

  static SparseState uniform_pure(std::string concept_name,
                                  const std::vector<std::uint32_t>& support);
  static SparseState uniform_diagonal(std::string concept_name,
                                      const std::vector<std::uint32_t>& support);

  std::vector<std::uint32_t> support() const;
  std::size_t support_size() const;
  // Pure -> |x><x| with the same uniformity marker.
  SparseState to_density() const;
};

// A weight or probability; carries the exact fraction when the computation
// stayed in count arithmetic.
struct Weight {
  double value = 0.0;
  std::optional<Rational> exact;
};

struct CollapseResult {
  SparseState state;
  Weight probability;
};

class Concept {
public:
  std::string name;
  std::uint32_t universe_size = 0;
  // Includes the auto-defined unity context (full universe), then spec order.
  std::vector<ContextSet> contexts;
  // Names of the contexts designated as exemplars, in spec order.
  std::vector<std::string> exemplars;

  const ContextSet& context(const std::string& context_name) const;
  bool has_context(const std::string& context_name) const;

  // Canonical serialization; byte-identical for identical inputs.
  std::string serialize() const;
};

// Uniform superposition over the whole universe, amplitude 1/sqrt(m).
SparseState ground_state(const Concept& c);

// Uniform pure state over the named context's members. Coincides with
// ground_state for unity.
SparseState state_from_counts(const Concept& c, const std::string& context_name);

const ContextSet& context_projector(const Concept& c, const std::string& context_name);

// Collapse: amplitudes outside e are zeroed and the state renormalized;
// probability is the removed-mass complement. Throws ImpossibleContextError
// when the context has no overlap with the state.
CollapseResult apply_context(const SparseState& s, const ContextSet& e);

Weight exemplar_weight(const Concept& c, const SparseState& s, const std::string& exemplar);

std::vector<std::pair<std::string, Weight>> weight_table(const Concept& c, const SparseState& s);

struct VerifyReport {
  std::vector<std::string> violations;
  std::vector<std::string> notes;
  bool ok() const { return violations.empty(); }
};

// Structural checks for the SCOP realization: ground state norm, projector
// idempotence (densely, when the universe fits the dense cap), weights in
// [0,1], collapse/weight chain consistency, exemplar coverage.
VerifyReport verify_scop(const Concept& c);

// Oracle bridges.
DenseVector to_dense(const SparseState& s, const Concept& c);
DenseOperator to_dense_operator(const SparseState& s, const Concept& c);
DenseOperator to_dense(const ContextSet& e, const Concept& c);

}  // namespace scopq

#endif
