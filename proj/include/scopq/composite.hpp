#ifndef SCOPQ_COMPOSITE_HPP
#define SCOPQ_COMPOSITE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scopq/concept.hpp"
#include "scopq/dense.hpp"

namespace scopq {

using Tuple = std::vector<std::uint32_t>;

class CompositeSpace {
public:
  explicit CompositeSpace(std::vector<Concept> factors);

  std::size_t arity() const { return factors_.size(); }
  const Concept& factor(std::size_t i) const { return factors_.at(i); }
  const std::vector<Concept>& factors() const { return factors_; }

private:
  std::vector<Concept> factors_;
};

// One shared context per factor, all of equal cardinality, with an explicit
// alignment: row r of `aligned` is the tuple (u, sigma_2(u), ..., sigma_k(u)).
// The factors own disjoint universes, so the identification across them is a
// bijection, not label equality.
struct SharedContextPairing {
  std::vector<ContextSet> shared;
  std::vector<Tuple> aligned;

  std::size_t size() const { return aligned.size(); }
};

// Aligns the shared sets position-by-position in ascending id order.
SharedContextPairing canonical_pairing(const CompositeSpace& space,
                                       const std::vector<std::string>& shared_context_names);

// Alignment given as explicit rows; validated to be total and injective per
// factor.
SharedContextPairing explicit_pairing(const CompositeSpace& space,
                                      const std::vector<std::string>& shared_context_names,
                                      std::vector<Tuple> rows);

// Members of e (living in slot `from`) translated through the pairing into
// slot `to`.
ContextSet pairing_image(const SharedContextPairing& pairing, const ContextSet& e,
                         std::size_t from, std::size_t to);

// A context acting on one factor, identity on all others.
struct LiftedContext {
  std::size_t slot = 0;
  ContextSet inner;
};

LiftedContext lift(const ContextSet& e, std::size_t slot, const CompositeSpace& space);

// Composite states store only nonzero structure. Product states keep their
// factors; collapsing one slot of a product never disturbs the others, so the
// representation is closed under everything the model does. Non-product
// states hold explicit tuple amplitudes (pure) or tuple-pair coefficients
// (density); entangled and collapsed states have at most n_shared of them.
class CompositeState {
public:
  StateKind kind = StateKind::pure;
  std::size_t arity = 0;
  std::optional<std::vector<SparseState>> product;
  std::map<Tuple, Complex> tuples;
  std::map<std::pair<Tuple, Tuple>, Complex> pairs;
  bool uniform = false;

  bool is_product_form() const { return product.has_value(); }
  // Product form expanded to explicit tuples (for tests and small oracles).
  CompositeState expanded() const;
  CompositeState to_density() const;
};

CompositeState product_state(const CompositeSpace& space, std::vector<SparseState> states);

// Uniform amplitude 1/sqrt(n_shared) on every aligned tuple. A product basis
// state when n_shared = 1, entangled for n_shared >= 2.
CompositeState entangled_state(const CompositeSpace& space, const SharedContextPairing& pairing);

struct CompositeCollapseResult {
  CompositeState state;
  Weight probability;
};

// Tuples whose slot component falls outside the context are removed and the
// state renormalized; probability is the removed-mass complement.
CompositeCollapseResult collapse_composite(const CompositeState& s, const LiftedContext& e);

// <s|P_lifted|s> (or Tr rho P); equals the weight of e.inner on reduce(s, slot).
Weight composite_weight(const CompositeState& s, const LiftedContext& e);

// Partial trace over all factors except `slot`, renormalized to trace 1, in
// sparse form on that factor's concept.
SparseState reduce(const CompositeState& s, const CompositeSpace& space, std::size_t slot);

// Oracle bridges; refuse composites beyond the dense cap.
std::vector<std::size_t> dense_dims(const CompositeSpace& space);
DenseVector to_dense(const CompositeState& s, const CompositeSpace& space);
DenseOperator to_dense_operator(const CompositeState& s, const CompositeSpace& space);
DenseOperator to_dense(const LiftedContext& e, const CompositeSpace& space);

}  // namespace scopq

#endif
