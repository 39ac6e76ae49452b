#include "scopq/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "scopq/composite.hpp"
#include "scopq/spec_io.hpp"

namespace scopq {

namespace fs = std::filesystem;

std::string format_value(double value, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

std::string resolve_spec_path(const std::string& arg) {
  if (fs::exists(arg)) return arg;
  if (const char* base = std::getenv("SCOP_SPEC_PATH")) {
    const fs::path candidate = fs::path(base) / arg;
    if (fs::exists(candidate)) return candidate.string();
  }
  throw std::runtime_error("cannot find spec file '" + arg + "'");
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ConceptSpecFile load_concept_spec(const std::string& arg) {
  return parse_concept_spec(read_file(resolve_spec_path(arg)));
}

std::string fraction_or_blank(const std::optional<Rational>& exact) {
  return exact ? exact->str() : std::string();
}

void print_rows_csv(const std::vector<ReportRow>& rows, int digits, std::ostream& out) {
  out << "exemplar,weight,fraction\n";
  for (const auto& row : rows)
    out << row.label << ',' << format_value(row.value, digits) << ','
        << fraction_or_blank(row.exact) << '\n';
}

void print_rows_table(const std::vector<ReportRow>& rows, int digits, std::ostream& out) {
  std::size_t width = 8;
  for (const auto& row : rows) width = std::max(width, row.label.size());
  for (const auto& row : rows) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << row.label
        << format_value(row.value, digits);
    if (row.exact) out << "  (" << row.exact->str() << ")";
    out << '\n';
  }
}

std::vector<ReportRow> column_rows(const ConceptSpecFile& spec, const std::string& state) {
  const Concept column = column_concept(spec, state);
  std::vector<ReportRow> rows;
  for (const auto& [name, w] : weight_table(column, ground_state(column)))
    rows.push_back(ReportRow{name, w.value, w.exact});
  return rows;
}

// Factor concepts referenced by a composition are looked up next to the
// composition file, then under SCOP_SPEC_PATH.
Concept load_factor(const std::string& name, const fs::path& composition_dir) {
  const std::string filename = name + ".concept";
  fs::path candidate = composition_dir / filename;
  std::string path;
  if (fs::exists(candidate))
    path = candidate.string();
  else
    path = resolve_spec_path(filename);
  return allocate(parse_concept_spec(read_file(path)), AllocationMode::paper).built;
}

struct SlotView {
  SparseState reduced;
  std::size_t support = 0;
};

}  // namespace

int run_validate(const std::string& spec_path, std::ostream& out, std::ostream& err) {
  ConceptSpecFile spec;
  try {
    spec = load_concept_spec(spec_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoParse;
  }
  const ValidationReport report = validate(spec);
  if (report.ok()) {
    out << "ok: '" << spec.name << "' is consistent (" << spec.exemplars.size()
        << " exemplars, universe " << spec.universe << ")\n";
    return kExitOk;
  }
  out << "'" << spec.name << "': " << report.violations.size() << " violation(s)\n";
  for (const auto& v : report.violations) out << "  " << v << '\n';
  return kExitValidation;
}

int run_weights(const std::string& spec_path, const WeightsOptions& options, std::ostream& out,
                std::ostream& err) {
  try {
    const ConceptSpecFile spec = load_concept_spec(spec_path);
    const std::vector<ReportRow> rows = column_rows(spec, options.state);
    if (options.format == "csv")
      print_rows_csv(rows, options.digits, out);
    else
      print_rows_table(rows, options.digits, out);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoParse;
  }
}

int run_collapse(const std::string& spec_path, const std::string& state_name,
                 const std::string& context_name, std::ostream& out, std::ostream& err) {
  Concept built;
  try {
    const ConceptSpecFile spec = load_concept_spec(spec_path);
    built = allocate(spec, AllocationMode::paper).built;
  } catch (const AllocationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoParse;
  }
  try {
    const SparseState start = state_name == "ground" ? ground_state(built)
                                                     : state_from_counts(built, state_name);
    const ContextSet& e = context_projector(built, context_name);
    const CollapseResult result = apply_context(start, e);
    const std::size_t support = result.state.support_size();
    out << "support " << support << '\n';
    out << "amplitude 1/sqrt(" << support << ")\n";
    out << "probability " << format_value(result.probability.value, 6);
    if (result.probability.exact) out << " = " << result.probability.exact->str();
    out << '\n';
    return kExitOk;
  } catch (const ImpossibleContextError& e) {
    err << "error: " << e.what() << '\n';
    return kExitImpossibleContext;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoParse;
  }
}

int run_combine(const std::string& composition_path, const CombineOptions& options,
                std::ostream& out, std::ostream& err) {
  std::optional<ResolvedComposition> composition;
  try {
    const std::string path = resolve_spec_path(composition_path);
    const CompositionSpecFile spec = parse_composition_spec(read_file(path));
    std::vector<Concept> factors;
    for (const auto& name : spec.factors)
      factors.push_back(load_factor(name, fs::path(path).parent_path()));
    composition = resolve_composition(spec, std::move(factors));
  } catch (const AllocationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoParse;
  }

  const CompositeSpace& space = composition->space;
  try {
    out << "compound:";
    for (const auto& f : space.factors()) out << ' ' << f.name;
    out << '\n';

    CompositeState state = [&] {
      if (options.mode == "product") {
        std::vector<SparseState> grounds;
        for (const auto& f : space.factors()) grounds.push_back(ground_state(f));
        return product_state(space, std::move(grounds));
      }
      return entangled_state(space, composition->pairing);
    }();
    out << "mode: " << options.mode;
    if (options.mode == "entangled") out << " (" << composition->pairing.size() << " aligned tuples)";
    out << '\n';

    Weight total{1.0, Rational(1, 1)};
    std::vector<LiftedContext> applied;
    for (const auto& step : options.applies) {
      const LiftedContext lifted =
          lift(space.factor(step.slot).context(step.context), step.slot, space);
      CompositeCollapseResult result = collapse_composite(state, lifted);
      out << "apply [" << step.slot << "] " << step.context << ": probability "
          << format_value(result.probability.value, 6);
      if (result.probability.exact) out << " = " << result.probability.exact->str();
      out << '\n';
      if (total.exact && result.probability.exact)
        total.exact = *total.exact * *result.probability.exact;
      else
        total.exact.reset();
      total.value *= result.probability.value;
      state = std::move(result.state);
      applied.push_back(lifted);
    }
    if (!options.applies.empty()) {
      out << "total probability " << format_value(total.value, 6);
      if (total.exact) out << " = " << total.exact->str();
      out << '\n';
    }

    for (std::size_t slot = 0; slot < space.arity(); ++slot) {
      const Concept& factor = space.factor(slot);
      const SparseState reduced = reduce(state, space, slot);
      const std::size_t support = reduced.support_size();
      out << "slot " << slot << " (" << factor.name << "): reduced support " << support;
      if (reduced.uniform) {
        out << ", uniform diagonal 1/" << support;
        // Sub-normalized form for comparison: scale by the total collapse
        // probability instead of renormalizing.
        out << " (raw " << format_value(total.value / static_cast<double>(support), 6) << ")";
      }
      out << '\n';
      if (options.mode == "entangled") {
        for (const auto& lifted : applied) {
          const ContextSet image =
              pairing_image(composition->pairing, meet(lifted.inner,
                                                      composition->pairing.shared[lifted.slot]),
                            lifted.slot, slot);
          double w = 0.0;
          for (const auto& [uv, coeff] : reduced.coefficients)
            if (uv.first == uv.second && contains(image, uv.first)) w += coeff.real();
          out << "  weight of " << lifted.inner.name << "-image: " << format_value(w, 6) << '\n';
        }
      }
      if (options.report == "weights" && !factor.exemplars.empty()) {
        std::vector<ReportRow> rows;
        for (const auto& [name, w] : weight_table(factor, reduced))
          rows.push_back(ReportRow{name, w.value, w.exact});
        print_rows_table(rows, 2, out);
      }
    }
    return kExitOk;
  } catch (const ImpossibleContextError& e) {
    err << "error: " << e.what() << '\n';
    return kExitImpossibleContext;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoParse;
  }
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

std::string fish_weights_csv(const ConceptSpecFile& fish) {
  const auto ground = column_rows(fish, "ground");
  const auto e30 = column_rows(fish, "e30");
  std::ostringstream out;
  out << "exemplar,ground,ground_fraction,e30,e30_fraction\n";
  for (std::size_t i = 0; i < ground.size(); ++i)
    out << ground[i].label << ',' << format_value(ground[i].value, 2) << ','
        << ground[i].exact->str() << ',' << format_value(e30[i].value, 2) << ','
        << e30[i].exact->str() << '\n';
  return out.str();
}

}  // namespace

int run_paper(const std::string& out_dir, const std::string& specs_dir, std::ostream& out,
              std::ostream& err) {
  try {
    const fs::path specs(specs_dir);
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    const ConceptSpecFile fish_spec = parse_concept_spec(read_file((specs / "fish.concept").string()));
    const ConceptSpecFile pet_spec = parse_concept_spec(read_file((specs / "pet.concept").string()));
    write_file(dir / "fish_weights.csv", fish_weights_csv(fish_spec));

    // Weight of the goldfish-pet context on the two product states.
    const Concept pet = allocate(pet_spec, AllocationMode::paper).built;
    const Concept fish = allocate(fish_spec, AllocationMode::paper).built;
    CompositeSpace space({pet, fish});
    const LiftedContext goldfish_pet = lift(space.factor(0).context("goldfish"), 0, space);

    const CompositeState grounds =
        product_state(space, {ground_state(space.factor(0)), ground_state(space.factor(1))});
    const CompositeState fish_pet = product_state(
        space, {state_from_counts(space.factor(0), "e6"), state_from_counts(space.factor(1), "e30")});
    const Weight w_ground = composite_weight(grounds, goldfish_pet);
    const Weight w_fishpet = composite_weight(fish_pet, goldfish_pet);
    {
      std::ostringstream csv;
      csv << "state,weight,fraction\n";
      csv << "ground x ground," << format_value(w_ground.value, 2) << ',' << w_ground.exact->str()
          << '\n';
      csv << "fish-pet x pet-fish," << format_value(w_fishpet.value, 2) << ','
          << w_fishpet.exact->str() << '\n';
      write_file(dir / "guppy_effect.csv", csv.str());
    }

    // Entangled pet-fish: collapse by the goldfish-pet context and reduce.
    const CompositionSpecFile petfish_spec =
        parse_composition_spec(read_file((specs / "petfish.composition").string()));
    ResolvedComposition petfish = resolve_composition(petfish_spec, {pet, fish});
    const CompositeState entangled = entangled_state(petfish.space, petfish.pairing);
    const CompositeCollapseResult collapsed = collapse_composite(entangled, goldfish_pet);
    const SparseState pet_reduced = reduce(collapsed.state, petfish.space, 0);
    const SparseState fish_reduced = reduce(collapsed.state, petfish.space, 1);
    const ContextSet selection = meet(space.factor(0).context("goldfish"), petfish.pairing.shared[0]);
    const ContextSet image = pairing_image(petfish.pairing, selection, 0, 1);
    double image_weight = 0.0;
    for (const auto& [uv, coeff] : fish_reduced.coefficients)
      if (uv.first == uv.second && contains(image, uv.first)) image_weight += coeff.real();
    const CompositeCollapseResult control = collapse_composite(fish_pet, goldfish_pet);
    {
      std::ostringstream csv;
      csv << "quantity,value,fraction\n";
      csv << "entangled_pairs," << petfish.pairing.size() << ",\n";
      csv << "collapse_probability," << format_value(collapsed.probability.value, 2) << ','
          << collapsed.probability.exact->str() << '\n';
      csv << "pet_reduced_support," << pet_reduced.support_size() << ",\n";
      csv << "fish_reduced_support," << fish_reduced.support_size() << ",\n";
      csv << "fish_image_weight," << format_value(image_weight, 2) << ",\n";
      csv << "product_control_fish_support,"
          << reduce(control.state, petfish.space, 1).support_size() << ",\n";
      write_file(dir / "petfish_entangled.csv", csv.str());
    }

    // Three-concept sentence demo.
    std::vector<Concept> sentence_factors;
    const CompositionSpecFile catfood_spec =
        parse_composition_spec(read_file((specs / "catfood.composition").string()));
    for (const auto& name : catfood_spec.factors)
      sentence_factors.push_back(
          allocate(parse_concept_spec(read_file((specs / (name + ".concept")).string())),
                   AllocationMode::paper)
              .built);
    ResolvedComposition catfood = resolve_composition(catfood_spec, std::move(sentence_factors));
    const CompositeState sentence = entangled_state(catfood.space, catfood.pairing);
    const LiftedContext felix = lift(catfood.space.factor(0).context("e46"), 0, catfood.space);
    const CompositeCollapseResult sentence_collapsed = collapse_composite(sentence, felix);
    {
      std::ostringstream csv;
      csv << "quantity,value,fraction\n";
      csv << "collapse_probability," << format_value(sentence_collapsed.probability.value, 2)
          << ',' << sentence_collapsed.probability.exact->str() << '\n';
      for (std::size_t slot = 0; slot < catfood.space.arity(); ++slot)
        csv << catfood.space.factor(slot).name << "_reduced_support,"
            << reduce(sentence_collapsed.state, catfood.space, slot).support_size() << ",\n";
      write_file(dir / "sentence.csv", csv.str());
    }

    // Manifest of the exact fractions behind every reported number.
    {
      std::ostringstream csv;
      csv << "name,numerator,denominator\n";
      const Concept ground_col = column_concept(fish_spec, "ground");
      const Concept e30_col = column_concept(fish_spec, "e30");
      const SparseState g = ground_state(ground_col);
      const SparseState p30 = ground_state(e30_col);
      for (const auto& [name, w] : weight_table(ground_col, g))
        csv << name << "_ground," << w.exact->num() << ',' << w.exact->den() << '\n';
      for (const auto& [name, w] : weight_table(e30_col, p30))
        csv << name << "_e30," << w.exact->num() << ',' << w.exact->den() << '\n';
      const CollapseResult ground_collapse = apply_context(ground_state(fish), fish.context("e30"));
      csv << "fish_ground_to_e30," << ground_collapse.probability.exact->num() << ','
          << ground_collapse.probability.exact->den() << '\n';
      csv << "goldfish_pet_ground," << w_ground.exact->num() << ',' << w_ground.exact->den()
          << '\n';
      csv << "goldfish_pet_fishpet," << w_fishpet.exact->num() << ',' << w_fishpet.exact->den()
          << '\n';
      csv << "entangled_collapse," << collapsed.probability.exact->num() << ','
          << collapsed.probability.exact->den() << '\n';
      csv << "sentence_collapse," << sentence_collapsed.probability.exact->num() << ','
          << sentence_collapsed.probability.exact->den() << '\n';
      write_file(dir / "fractions.csv", csv.str());
    }

    out << "wrote fish_weights.csv, guppy_effect.csv, petfish_entangled.csv, sentence.csv, "
           "fractions.csv to "
        << dir.string() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoParse;
  }
}

}  // namespace scopq
