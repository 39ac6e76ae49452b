#include "scopq/composite.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace scopq {

namespace {

void require_slot(std::size_t slot, std::size_t arity) {
  if (slot >= arity)
    throw std::invalid_argument("slot " + std::to_string(slot) + " out of range for arity " +
                                std::to_string(arity));
}

// Tuple with the slot component removed; used to group tuples that agree on
// every other factor.
Tuple without_slot(const Tuple& t, std::size_t slot) {
  Tuple rest;
  rest.reserve(t.size() - 1);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (i != slot) rest.push_back(t[i]);
  return rest;
}

}  // namespace

CompositeSpace::CompositeSpace(std::vector<Concept> factors) : factors_(std::move(factors)) {
  if (factors_.size() < 2)
    throw std::invalid_argument("composite space needs at least two factors");
  std::set<std::string> names;
  for (const auto& f : factors_)
    if (!names.insert(f.name).second)
      throw std::invalid_argument("composite space has duplicate factor '" + f.name + "'");
}

SharedContextPairing canonical_pairing(const CompositeSpace& space,
                                       const std::vector<std::string>& shared_context_names) {
  if (shared_context_names.size() != space.arity())
    throw std::invalid_argument("pairing needs one shared context per factor");
  SharedContextPairing pairing;
  for (std::size_t f = 0; f < space.arity(); ++f)
    pairing.shared.push_back(space.factor(f).context(shared_context_names[f]));
  const std::size_t n = pairing.shared.front().members.size();
  if (n == 0) throw std::invalid_argument("pairing over an empty shared context");
  for (const auto& s : pairing.shared)
    if (s.members.size() != n)
      throw std::invalid_argument("shared context '" + s.name + "' of '" + s.concept_name +
                                  "' has cardinality " + std::to_string(s.members.size()) +
                                  ", expected " + std::to_string(n));
  // Members are stored sorted; rank alignment is just positional.
  for (std::size_t r = 0; r < n; ++r) {
    Tuple row(space.arity());
    for (std::size_t f = 0; f < space.arity(); ++f) row[f] = pairing.shared[f].members[r];
    pairing.aligned.push_back(std::move(row));
  }
  return pairing;
}

SharedContextPairing explicit_pairing(const CompositeSpace& space,
                                      const std::vector<std::string>& shared_context_names,
                                      std::vector<Tuple> rows) {
  SharedContextPairing pairing = canonical_pairing(space, shared_context_names);
  const std::size_t n = pairing.size();
  if (rows.size() != n)
    throw std::invalid_argument("explicit pairing has " + std::to_string(rows.size()) +
                                " rows, shared sets have " + std::to_string(n));
  for (std::size_t f = 0; f < space.arity(); ++f) {
    std::set<std::uint32_t> seen;
    for (const auto& row : rows) {
      if (row.size() != space.arity())
        throw std::invalid_argument("explicit pairing row has wrong arity");
      if (!contains(pairing.shared[f], row[f]))
        throw std::invalid_argument("pairing id " + std::to_string(row[f]) +
                                    " is not a member of shared context '" +
                                    pairing.shared[f].name + "'");
      if (!seen.insert(row[f]).second)
        throw std::invalid_argument("pairing repeats id " + std::to_string(row[f]) +
                                    " in factor " + std::to_string(f));
    }
  }
  pairing.aligned = std::move(rows);
  return pairing;
}

ContextSet pairing_image(const SharedContextPairing& pairing, const ContextSet& e,
                         std::size_t from, std::size_t to) {
  require_slot(from, pairing.shared.size());
  require_slot(to, pairing.shared.size());
  ContextSet image;
  image.concept_name = pairing.shared[to].concept_name;
  image.name = "image(" + e.name + ")";
  for (const auto& row : pairing.aligned)
    if (contains(e, row[from])) image.members.push_back(row[to]);
  std::sort(image.members.begin(), image.members.end());
  return image;
}

LiftedContext lift(const ContextSet& e, std::size_t slot, const CompositeSpace& space) {
  require_slot(slot, space.arity());
  if (e.concept_name != space.factor(slot).name)
    throw std::invalid_argument("context '" + e.name + "' belongs to '" + e.concept_name +
                                "', not to factor " + std::to_string(slot) + " ('" +
                                space.factor(slot).name + "')");
  return LiftedContext{slot, e};
}

CompositeState CompositeState::expanded() const {
  if (!is_product_form()) return *this;
  CompositeState out;
  out.kind = StateKind::pure;
  out.arity = arity;
  out.tuples[{}] = Complex(1.0, 0.0);
  for (const auto& factor_state : *product) {
    std::map<Tuple, Complex> next;
    for (const auto& [prefix, amp] : out.tuples) {
      for (const auto& [u, a] : factor_state.amplitudes) {
        Tuple t = prefix;
        t.push_back(u);
        next.emplace(std::move(t), amp * a);
      }
    }
    out.tuples = std::move(next);
  }
  // A product of uniform factors is uniform over the product support.
  out.uniform = std::all_of(product->begin(), product->end(),
                            [](const SparseState& s) { return s.uniform; });
  return out;
}

CompositeState CompositeState::to_density() const {
  if (kind == StateKind::density) return *this;
  const CompositeState src = is_product_form() ? expanded() : *this;
  CompositeState out;
  out.kind = StateKind::density;
  out.arity = arity;
  for (const auto& [t, at] : src.tuples)
    for (const auto& [v, av] : src.tuples)
      out.pairs.emplace(std::make_pair(t, v), at * std::conj(av));
  out.uniform = src.uniform;
  return out;
}

CompositeState product_state(const CompositeSpace& space, std::vector<SparseState> states) {
  if (states.size() != space.arity())
    throw std::invalid_argument("product_state: expected " + std::to_string(space.arity()) +
                                " factor states, got " + std::to_string(states.size()));
  for (std::size_t f = 0; f < states.size(); ++f) {
    if (states[f].kind != StateKind::pure)
      throw std::invalid_argument("product_state: factor " + std::to_string(f) + " is not pure");
    if (states[f].concept_name != space.factor(f).name)
      throw std::invalid_argument("product_state: factor " + std::to_string(f) +
                                  " state belongs to '" + states[f].concept_name + "'");
  }
  CompositeState out;
  out.kind = StateKind::pure;
  out.arity = space.arity();
  out.uniform = std::all_of(states.begin(), states.end(),
                            [](const SparseState& s) { return s.uniform; });
  out.product = std::move(states);
  return out;
}

CompositeState entangled_state(const CompositeSpace& space, const SharedContextPairing& pairing) {
  if (pairing.shared.size() != space.arity())
    throw std::invalid_argument("pairing arity does not match the composite space");
  if (pairing.aligned.empty()) throw std::invalid_argument("entangled_state: empty pairing");
  CompositeState out;
  out.kind = StateKind::pure;
  out.arity = space.arity();
  const double amp = 1.0 / std::sqrt(static_cast<double>(pairing.size()));
  for (const auto& row : pairing.aligned) out.tuples.emplace(row, Complex(amp, 0.0));
  out.uniform = true;
  return out;
}

CompositeCollapseResult collapse_composite(const CompositeState& s, const LiftedContext& e) {
  require_slot(e.slot, s.arity);

  if (s.is_product_form()) {
    // Only the addressed factor changes; the collapse probability is its own.
    CollapseResult inner = apply_context((*s.product)[e.slot], e.inner);
    CompositeState out = s;
    (*out.product)[e.slot] = std::move(inner.state);
    return {std::move(out), inner.probability};
  }

  if (s.kind == StateKind::pure) {
    double prob = 0.0;
    std::vector<const Tuple*> surviving;
    for (const auto& [t, a] : s.tuples) {
      if (contains(e.inner, t[e.slot])) {
        prob += std::norm(a);
        surviving.push_back(&t);
      }
    }
    if (prob <= kNormTol)
      throw ImpossibleContextError("collapse_composite: context '" + e.inner.name +
                                   "' has zero probability in this state");
    Weight p{prob, std::nullopt};
    CompositeState out;
    out.kind = StateKind::pure;
    out.arity = s.arity;
    if (s.uniform) {
      p.exact = Rational(static_cast<std::int64_t>(surviving.size()),
                         static_cast<std::int64_t>(s.tuples.size()));
      p.value = p.exact->value();
      const double amp = 1.0 / std::sqrt(static_cast<double>(surviving.size()));
      for (const Tuple* t : surviving) out.tuples.emplace(*t, Complex(amp, 0.0));
      out.uniform = true;
    } else {
      const double scale = 1.0 / std::sqrt(prob);
      for (const Tuple* t : surviving) out.tuples.emplace(*t, s.tuples.at(*t) * scale);
    }
    return {std::move(out), p};
  }

  double prob = 0.0;
  for (const auto& [tv, coeff] : s.pairs)
    if (tv.first == tv.second && contains(e.inner, tv.first[e.slot])) prob += coeff.real();
  if (prob <= kNormTol)
    throw ImpossibleContextError("collapse_composite: context '" + e.inner.name +
                                 "' has zero probability in this state");
  CompositeState out;
  out.kind = StateKind::density;
  out.arity = s.arity;
  for (const auto& [tv, coeff] : s.pairs)
    if (contains(e.inner, tv.first[e.slot]) && contains(e.inner, tv.second[e.slot]))
      out.pairs.emplace(tv, coeff / prob);
  Weight p{prob, std::nullopt};
  if (s.uniform) {
    std::int64_t total = 0, kept = 0;
    for (const auto& [tv, coeff] : s.pairs) {
      (void)coeff;
      if (tv.first != tv.second) continue;
      ++total;
      if (contains(e.inner, tv.first[e.slot])) ++kept;
    }
    p.exact = Rational(kept, total);
    p.value = p.exact->value();
  }
  return {std::move(out), p};
}

Weight composite_weight(const CompositeState& s, const LiftedContext& e) {
  require_slot(e.slot, s.arity);

  if (s.is_product_form()) {
    const SparseState& factor = (*s.product)[e.slot];
    if (factor.uniform) {
      const auto support = factor.support();
      std::int64_t hit = 0;
      for (std::uint32_t u : support)
        if (contains(e.inner, u)) ++hit;
      Weight w;
      w.exact = Rational(hit, static_cast<std::int64_t>(support.size()));
      w.value = w.exact->value();
      return w;
    }
    double value = 0.0;
    for (const auto& [u, a] : factor.amplitudes)
      if (contains(e.inner, u)) value += std::norm(a);
    return Weight{value, std::nullopt};
  }

  if (s.kind == StateKind::pure) {
    double value = 0.0;
    std::int64_t hit = 0;
    for (const auto& [t, a] : s.tuples) {
      if (contains(e.inner, t[e.slot])) {
        value += std::norm(a);
        ++hit;
      }
    }
    Weight w{value, std::nullopt};
    if (s.uniform) {
      w.exact = Rational(hit, static_cast<std::int64_t>(s.tuples.size()));
      w.value = w.exact->value();
    }
    return w;
  }

  double value = 0.0;
  for (const auto& [tv, coeff] : s.pairs)
    if (tv.first == tv.second && contains(e.inner, tv.first[e.slot])) value += coeff.real();
  return Weight{value, std::nullopt};
}

SparseState reduce(const CompositeState& s, const CompositeSpace& space, std::size_t slot) {
  require_slot(slot, s.arity);
  const std::string& concept_name = space.factor(slot).name;

  if (s.is_product_form()) return (*s.product)[slot].to_density();

  if (s.kind == StateKind::pure) {
    // Aligned states (one tuple per rest-index) reduce to a uniform diagonal;
    // keep that path exact.
    std::map<Tuple, std::vector<std::pair<std::uint32_t, Complex>>> groups;
    for (const auto& [t, a] : s.tuples) groups[without_slot(t, slot)].emplace_back(t[slot], a);
    const bool aligned = s.uniform && std::all_of(groups.begin(), groups.end(), [](const auto& g) {
                           return g.second.size() == 1;
                         });
    if (aligned) {
      std::vector<std::uint32_t> support;
      for (const auto& [rest, entries] : groups) {
        (void)rest;
        support.push_back(entries.front().first);
      }
      std::sort(support.begin(), support.end());
      if (std::adjacent_find(support.begin(), support.end()) == support.end())
        return SparseState::uniform_diagonal(concept_name, support);
    }
    SparseState rho;
    rho.kind = StateKind::density;
    rho.concept_name = concept_name;
    double tr = 0.0;
    for (const auto& [rest, entries] : groups) {
      (void)rest;
      for (const auto& [u, au] : entries)
        for (const auto& [v, av] : entries) {
          rho.coefficients[{u, v}] += au * std::conj(av);
          if (u == v) tr += (au * std::conj(av)).real();
        }
    }
    for (auto& [uv, coeff] : rho.coefficients) coeff /= tr;
    return rho;
  }

  SparseState rho;
  rho.kind = StateKind::density;
  rho.concept_name = concept_name;
  double tr = 0.0;
  for (const auto& [tv, coeff] : s.pairs) {
    if (without_slot(tv.first, slot) != without_slot(tv.second, slot)) continue;
    const std::uint32_t u = tv.first[slot];
    const std::uint32_t v = tv.second[slot];
    rho.coefficients[{u, v}] += coeff;
    if (u == v) tr += coeff.real();
  }
  for (auto& [uv, coeff] : rho.coefficients) coeff /= tr;
  return rho;
}

std::vector<std::size_t> dense_dims(const CompositeSpace& space) {
  std::vector<std::size_t> dims;
  for (const auto& f : space.factors()) dims.push_back(f.universe_size);
  return dims;
}

namespace {

std::size_t flat_index(const Tuple& t, const std::vector<std::size_t>& dims) {
  std::size_t idx = 0;
  for (std::size_t f = 0; f < dims.size(); ++f) idx = idx * dims[f] + t[f];
  return idx;
}

std::uint64_t total_dim(const std::vector<std::size_t>& dims) {
  std::uint64_t total = 1;
  for (std::size_t d : dims) total *= d;
  return total;
}

}  // namespace

DenseVector to_dense(const CompositeState& s, const CompositeSpace& space) {
  if (s.kind != StateKind::pure)
    throw std::invalid_argument("to_dense: density composites materialize via to_dense_operator");
  const auto dims = dense_dims(space);
  const std::uint64_t total = total_dim(dims);
  if (total > kDenseDimCap)
    throw std::length_error("to_dense: composite dimension " + std::to_string(total) +
                            " exceeds dense cap");
  const CompositeState src = s.is_product_form() ? s.expanded() : s;
  DenseVector v(static_cast<std::size_t>(total));
  for (const auto& [t, a] : src.tuples) v[flat_index(t, dims)] = a;
  return v;
}

DenseOperator to_dense_operator(const CompositeState& s, const CompositeSpace& space) {
  const auto dims = dense_dims(space);
  const std::uint64_t total = total_dim(dims);
  if (total > kDenseDimCap)
    throw std::length_error("to_dense_operator: composite dimension exceeds dense cap");
  if (s.kind == StateKind::pure) {
    const DenseVector v = to_dense(s, space);
    return outer(v, v);
  }
  DenseOperator rho(static_cast<std::size_t>(total));
  for (const auto& [tv, coeff] : s.pairs)
    rho.at(flat_index(tv.first, dims), flat_index(tv.second, dims)) = coeff;
  return rho;
}

DenseOperator to_dense(const LiftedContext& e, const CompositeSpace& space) {
  const auto dims = dense_dims(space);
  const std::uint64_t total = total_dim(dims);
  if (total > kDenseDimCap)
    throw std::length_error("to_dense: composite dimension exceeds dense cap");
  DenseOperator p(static_cast<std::size_t>(total));
  // Diagonal 0/1: a joint index is kept iff its slot component lies in e.
  for (std::size_t idx = 0; idx < p.dim(); ++idx) {
    std::size_t rest = idx;
    Tuple t(dims.size());
    for (std::size_t f = dims.size(); f-- > 0;) {
      t[f] = static_cast<std::uint32_t>(rest % dims[f]);
      rest /= dims[f];
    }
    if (contains(e.inner, t[e.slot])) p.at(idx, idx) = Complex(1.0, 0.0);
  }
  return p;
}

}  // namespace scopq
