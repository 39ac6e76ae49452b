#include "scopq/concept.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace scopq {

namespace {

std::vector<std::uint32_t> intersect_sorted(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::size_t count_in(const ContextSet& e, const std::vector<std::uint32_t>& support) {
  return intersect_sorted(e.members, support).size();
}

}  // namespace

ContextSet meet(const ContextSet& a, const ContextSet& b) {
  if (a.concept_name != b.concept_name)
    throw std::invalid_argument("meet: contexts belong to different concepts ('" +
                                a.concept_name + "' vs '" + b.concept_name + "')");
  return ContextSet{a.concept_name, a.name + "&" + b.name,
                    intersect_sorted(a.members, b.members)};
}

bool contains(const ContextSet& e, std::uint32_t id) {
  return std::binary_search(e.members.begin(), e.members.end(), id);
}

SparseState SparseState::uniform_pure(std::string concept_name,
                                      const std::vector<std::uint32_t>& support) {
  if (support.empty())
    throw std::invalid_argument("uniform_pure: empty support");
  SparseState s;
  s.kind = StateKind::pure;
  s.concept_name = std::move(concept_name);
  const double amp = 1.0 / std::sqrt(static_cast<double>(support.size()));
  for (std::uint32_t u : support) s.amplitudes.emplace(u, Complex(amp, 0.0));
  s.uniform = true;
  return s;
}

SparseState SparseState::uniform_diagonal(std::string concept_name,
                                          const std::vector<std::uint32_t>& support) {
  if (support.empty())
    throw std::invalid_argument("uniform_diagonal: empty support");
  SparseState s;
  s.kind = StateKind::density;
  s.concept_name = std::move(concept_name);
  const double coeff = 1.0 / static_cast<double>(support.size());
  for (std::uint32_t u : support) s.coefficients.emplace(std::make_pair(u, u), Complex(coeff, 0.0));
  s.uniform = true;
  return s;
}

std::vector<std::uint32_t> SparseState::support() const {
  std::vector<std::uint32_t> out;
  if (kind == StateKind::pure) {
    for (const auto& [u, a] : amplitudes)
      if (std::norm(a) > 0.0) out.push_back(u);
  } else {
    for (const auto& [uv, c] : coefficients)
      if (uv.first == uv.second && std::abs(c) > 0.0) out.push_back(uv.first);
  }
  return out;
}

std::size_t SparseState::support_size() const { return support().size(); }

SparseState SparseState::to_density() const {
  if (kind == StateKind::density) return *this;
  SparseState d;
  d.kind = StateKind::density;
  d.concept_name = concept_name;
  for (const auto& [u, au] : amplitudes)
    for (const auto& [v, av] : amplitudes)
      d.coefficients.emplace(std::make_pair(u, v), au * std::conj(av));
  d.uniform = uniform;
  return d;
}

const ContextSet& Concept::context(const std::string& context_name) const {
  for (const auto& e : contexts)
    if (e.name == context_name) return e;
  throw std::invalid_argument("concept '" + name + "' has no context '" + context_name + "'");
}

bool Concept::has_context(const std::string& context_name) const {
  for (const auto& e : contexts)
    if (e.name == context_name) return true;
  return false;
}

std::string Concept::serialize() const {
  std::ostringstream out;
  out << "concept " << name << "\nuniverse " << universe_size << "\n";
  for (const auto& e : contexts) {
    out << "context " << e.name << " :";
    for (std::uint32_t u : e.members) out << ' ' << u;
    out << "\n";
  }
  out << "exemplars";
  for (const auto& x : exemplars) out << ' ' << x;
  out << "\n";
  return out.str();
}

SparseState ground_state(const Concept& c) {
  if (c.universe_size == 0) throw std::invalid_argument("ground_state: empty universe");
  return state_from_counts(c, kUnityName);
}

SparseState state_from_counts(const Concept& c, const std::string& context_name) {
  const ContextSet& e = c.context(context_name);
  if (e.members.empty())
    throw std::invalid_argument("state_from_counts: context '" + context_name + "' is empty");
  return SparseState::uniform_pure(c.name, e.members);
}

const ContextSet& context_projector(const Concept& c, const std::string& context_name) {
  return c.context(context_name);
}

CollapseResult apply_context(const SparseState& s, const ContextSet& e) {
  if (s.concept_name != e.concept_name)
    throw std::invalid_argument("apply_context: state and context belong to different concepts");

  if (s.kind == StateKind::pure) {
    double prob = 0.0;
    std::vector<std::uint32_t> surviving;
    for (const auto& [u, a] : s.amplitudes) {
      if (contains(e, u)) {
        prob += std::norm(a);
        surviving.push_back(u);
      }
    }
    if (prob <= kNormTol)
      throw ImpossibleContextError("apply_context: context '" + e.name +
                                   "' has zero probability in this state");
    Weight p{prob, std::nullopt};
    SparseState out;
    if (s.uniform) {
      const auto total = static_cast<std::int64_t>(s.amplitudes.size());
      p.exact = Rational(static_cast<std::int64_t>(surviving.size()), total);
      p.value = p.exact->value();
      out = SparseState::uniform_pure(s.concept_name, surviving);
    } else {
      out.kind = StateKind::pure;
      out.concept_name = s.concept_name;
      const double scale = 1.0 / std::sqrt(prob);
      for (std::uint32_t u : surviving) out.amplitudes.emplace(u, s.amplitudes.at(u) * scale);
    }
    return {std::move(out), p};
  }

  // Density: restrict the coefficient map to e x e, renormalize by trace.
  double prob = 0.0;
  for (const auto& [uv, coeff] : s.coefficients)
    if (uv.first == uv.second && contains(e, uv.first)) prob += coeff.real();
  if (prob <= kNormTol)
    throw ImpossibleContextError("apply_context: context '" + e.name +
                                 "' has zero probability in this state");
  Weight p{prob, std::nullopt};
  SparseState out;
  if (s.uniform) {
    std::vector<std::uint32_t> surviving;
    for (const auto& [uv, coeff] : s.coefficients) {
      (void)coeff;
      if (uv.first == uv.second && contains(e, uv.first)) surviving.push_back(uv.first);
    }
    std::size_t total = 0;
    for (const auto& [uv, coeff] : s.coefficients) {
      (void)coeff;
      if (uv.first == uv.second) ++total;
    }
    p.exact = Rational(static_cast<std::int64_t>(surviving.size()),
                       static_cast<std::int64_t>(total));
    p.value = p.exact->value();
    out = SparseState::uniform_diagonal(s.concept_name, surviving);
  } else {
    out.kind = StateKind::density;
    out.concept_name = s.concept_name;
    for (const auto& [uv, coeff] : s.coefficients)
      if (contains(e, uv.first) && contains(e, uv.second))
        out.coefficients.emplace(uv, coeff / prob);
  }
  return {std::move(out), p};
}

Weight exemplar_weight(const Concept& c, const SparseState& s, const std::string& exemplar) {
  if (std::find(c.exemplars.begin(), c.exemplars.end(), exemplar) == c.exemplars.end())
    throw std::invalid_argument("concept '" + c.name + "' has no exemplar '" + exemplar + "'");
  const ContextSet& e = c.context(exemplar);

  if (s.uniform) {
    const auto support = s.support();
    Weight w;
    w.exact = Rational(static_cast<std::int64_t>(count_in(e, support)),
                       static_cast<std::int64_t>(support.size()));
    w.value = w.exact->value();
    return w;
  }
  double value = 0.0;
  if (s.kind == StateKind::pure) {
    for (const auto& [u, a] : s.amplitudes)
      if (contains(e, u)) value += std::norm(a);
  } else {
    for (const auto& [uv, coeff] : s.coefficients)
      if (uv.first == uv.second && contains(e, uv.first)) value += coeff.real();
  }
  return Weight{value, std::nullopt};
}

std::vector<std::pair<std::string, Weight>> weight_table(const Concept& c, const SparseState& s) {
  std::vector<std::pair<std::string, Weight>> rows;
  rows.reserve(c.exemplars.size());
  for (const auto& x : c.exemplars) rows.emplace_back(x, exemplar_weight(c, s, x));
  return rows;
}

VerifyReport verify_scop(const Concept& c) {
  VerifyReport report;
  if (c.universe_size == 0) {
    report.violations.push_back("universe is empty");
    return report;
  }

  const SparseState ground = ground_state(c);
  double norm_sq = 0.0;
  for (const auto& [u, a] : ground.amplitudes) {
    (void)u;
    norm_sq += std::norm(a);
  }
  if (std::abs(norm_sq - 1.0) > kNormTol)
    report.violations.push_back("ground state is not normalized");

  const bool dense_ok = c.universe_size <= kDenseDimCap;
  if (!dense_ok)
    report.notes.push_back("universe exceeds dense cap; projector checks done set-wise");

  for (const auto& e : c.contexts) {
    for (std::size_t i = 1; i < e.members.size(); ++i)
      if (e.members[i - 1] >= e.members[i])
        report.violations.push_back("context '" + e.name + "' members not strictly sorted");
    if (!e.members.empty() && e.members.back() >= c.universe_size)
      report.violations.push_back("context '" + e.name + "' has members outside the universe");
    if (dense_ok && !e.members.empty()) {
      if (!is_projector(to_dense(e, c), kStructuralTol))
        report.violations.push_back("context '" + e.name + "' does not materialize to a projector");
    }
    if (e.members.empty()) continue;
    const Weight mu = [&] {
      double v = 0.0;
      for (const auto& [u, a] : ground.amplitudes)
        if (contains(e, u)) v += std::norm(a);
      return Weight{v, Rational(static_cast<std::int64_t>(e.members.size()),
                                static_cast<std::int64_t>(c.universe_size))};
    }();
    if (mu.value < -kNormTol || mu.value > 1.0 + kNormTol)
      report.violations.push_back("context '" + e.name + "' weight outside [0,1]");
  }

  // Collapse then weight must reproduce conditional set ratios.
  for (const auto& e : c.contexts) {
    if (e.members.empty()) continue;
    const CollapseResult collapsed = apply_context(ground, e);
    for (const auto& x : c.exemplars) {
      const ContextSet& ex = c.context(x);
      const Weight w = exemplar_weight(c, collapsed.state, x);
      const Rational expect(static_cast<std::int64_t>(meet(ex, e).members.size()),
                            static_cast<std::int64_t>(e.members.size()));
      if (std::abs(w.value - expect.value()) > kNormTol)
        report.violations.push_back("conditional weight of '" + x + "' under '" + e.name +
                                    "' deviates from set ratio");
    }
  }

  // Exemplar coverage: the strict allocator guarantees a partition; anything
  // else is worth a note (paper-mode repairs land here).
  if (!c.exemplars.empty()) {
    std::size_t covered = 0;
    for (const auto& x : c.exemplars) covered += c.context(x).members.size();
    if (covered != c.universe_size)
      report.notes.push_back("exemplars cover " + std::to_string(covered) + " of " +
                             std::to_string(c.universe_size) + " basic contexts");
    for (const auto& e : c.contexts) {
      if (e.name == kUnityName) continue;
      bool is_exemplar =
          std::find(c.exemplars.begin(), c.exemplars.end(), e.name) != c.exemplars.end();
      if (is_exemplar) continue;
      std::size_t attributed = 0;
      for (const auto& x : c.exemplars) attributed += meet(c.context(x), e).members.size();
      if (attributed != e.members.size())
        report.notes.push_back("context '" + e.name + "' has " +
                               std::to_string(e.members.size() - attributed) +
                               " members outside every exemplar");
    }
  }
  return report;
}

DenseVector to_dense(const SparseState& s, const Concept& c) {
  if (c.universe_size > kDenseDimCap)
    throw std::length_error("to_dense: universe exceeds dense cap");
  if (s.kind != StateKind::pure)
    throw std::invalid_argument("to_dense: density states materialize via to_dense_operator");
  DenseVector v(c.universe_size);
  for (const auto& [u, a] : s.amplitudes) v[u] = a;
  return v;
}

DenseOperator to_dense_operator(const SparseState& s, const Concept& c) {
  if (c.universe_size > kDenseDimCap)
    throw std::length_error("to_dense_operator: universe exceeds dense cap");
  DenseOperator rho(c.universe_size);
  if (s.kind == StateKind::pure) {
    for (const auto& [u, au] : s.amplitudes)
      for (const auto& [v, av] : s.amplitudes) rho.at(u, v) = au * std::conj(av);
  } else {
    for (const auto& [uv, coeff] : s.coefficients) rho.at(uv.first, uv.second) = coeff;
  }
  return rho;
}

DenseOperator to_dense(const ContextSet& e, const Concept& c) {
  if (c.universe_size > kDenseDimCap)
    throw std::length_error("to_dense: universe exceeds dense cap");
  DenseOperator p(c.universe_size);
  for (std::uint32_t u : e.members) p.at(u, u) = Complex(1.0, 0.0);
  return p;
}

}  // namespace scopq
