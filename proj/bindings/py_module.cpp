#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scopq/composite.hpp"
#include "scopq/concept.hpp"
#include "scopq/spec_io.hpp"

namespace py = pybind11;
using namespace scopq;

namespace {

py::object weight_to_py(const Weight& w) {
  py::dict d;
  d["value"] = w.value;
  if (w.exact) {
    d["numerator"] = w.exact->num();
    d["denominator"] = w.exact->den();
  }
  return d;
}

py::list table_to_py(const std::vector<std::pair<std::string, Weight>>& rows) {
  py::list out;
  for (const auto& [name, w] : rows) out.append(py::make_tuple(name, weight_to_py(w)));
  return out;
}

}  // namespace

PYBIND11_MODULE(scopq, m) {
  m.doc() = "Hilbert-space concept models: states, contexts, weights, tensor combination";

  py::register_exception<ImpossibleContextError>(m, "ImpossibleContextError");
  py::register_exception<SpecError>(m, "SpecError");
  py::register_exception<AllocationError>(m, "AllocationError");

  py::enum_<AllocationMode>(m, "AllocationMode")
      .value("strict", AllocationMode::strict)
      .value("paper", AllocationMode::paper);

  py::class_<ContextSet>(m, "ContextSet")
      .def_readonly("concept_name", &ContextSet::concept_name)
      .def_readonly("name", &ContextSet::name)
      .def_readonly("members", &ContextSet::members)
      .def("__len__", [](const ContextSet& e) { return e.members.size(); });

  py::class_<SparseState>(m, "SparseState")
      .def_property_readonly("concept_name",
                             [](const SparseState& s) { return s.concept_name; })
      .def_property_readonly("is_pure",
                             [](const SparseState& s) { return s.kind == StateKind::pure; })
      .def_property_readonly("uniform", [](const SparseState& s) { return s.uniform; })
      .def("support", &SparseState::support)
      .def("support_size", &SparseState::support_size);

  py::class_<Concept>(m, "Concept")
      .def_readonly("name", &Concept::name)
      .def_readonly("universe_size", &Concept::universe_size)
      .def_readonly("exemplars", &Concept::exemplars)
      .def_property_readonly("context_names",
                             [](const Concept& c) {
                               std::vector<std::string> names;
                               for (const auto& e : c.contexts) names.push_back(e.name);
                               return names;
                             })
      .def("context", &Concept::context, py::return_value_policy::reference_internal)
      .def("serialize", &Concept::serialize);

  m.def("parse_concept_spec", &parse_concept_spec);
  m.def("validate", [](const ConceptSpecFile& spec) { return validate(spec).violations; });
  m.def("allocate", [](const ConceptSpecFile& spec, AllocationMode mode) {
    AllocatedConcept out = allocate(spec, mode);
    return py::make_tuple(out.built, out.report.adjustments);
  });
  m.def("column_concept", &column_concept);

  py::class_<ConceptSpecFile>(m, "ConceptSpecFile")
      .def_readonly("name", &ConceptSpecFile::name)
      .def_readonly("universe", &ConceptSpecFile::universe);

  m.def("ground_state", &ground_state);
  m.def("state_from_counts", &state_from_counts);
  m.def("apply_context", [](const SparseState& s, const ContextSet& e) {
    CollapseResult r = apply_context(s, e);
    return py::make_tuple(r.state, weight_to_py(r.probability));
  });
  m.def("exemplar_weight", [](const Concept& c, const SparseState& s, const std::string& x) {
    return weight_to_py(exemplar_weight(c, s, x));
  });
  m.def("weight_table",
        [](const Concept& c, const SparseState& s) { return table_to_py(weight_table(c, s)); });
  m.def("verify_scop", [](const Concept& c) {
    VerifyReport r = verify_scop(c);
    return py::make_tuple(r.violations, r.notes);
  });

  py::class_<CompositeSpace>(m, "CompositeSpace")
      .def(py::init<std::vector<Concept>>())
      .def_property_readonly("arity", &CompositeSpace::arity)
      .def("factor", &CompositeSpace::factor, py::return_value_policy::reference_internal);

  py::class_<SharedContextPairing>(m, "SharedContextPairing")
      .def("__len__", &SharedContextPairing::size);

  py::class_<LiftedContext>(m, "LiftedContext")
      .def_readonly("slot", &LiftedContext::slot);

  py::class_<CompositeState>(m, "CompositeState")
      .def_property_readonly("arity", [](const CompositeState& s) { return s.arity; })
      .def_property_readonly("is_product_form", &CompositeState::is_product_form);

  m.def("canonical_pairing", &canonical_pairing);
  m.def("lift", &lift);
  m.def("product_state", &product_state);
  m.def("entangled_state", &entangled_state);
  m.def("collapse_composite", [](const CompositeState& s, const LiftedContext& e) {
    CompositeCollapseResult r = collapse_composite(s, e);
    return py::make_tuple(r.state, weight_to_py(r.probability));
  });
  m.def("composite_weight", [](const CompositeState& s, const LiftedContext& e) {
    return weight_to_py(composite_weight(s, e));
  });
  m.def("reduce", &reduce);
  m.def("pairing_image", &pairing_image);

  py::class_<CompositionSpecFile>(m, "CompositionSpecFile")
      .def_readonly("factors", &CompositionSpecFile::factors);
  m.def("parse_composition_spec", &parse_composition_spec);
  m.def("resolve_composition", [](const CompositionSpecFile& spec, std::vector<Concept> factors) {
    ResolvedComposition r = resolve_composition(spec, std::move(factors));
    return py::make_tuple(std::move(r.space), std::move(r.pairing));
  });
}
