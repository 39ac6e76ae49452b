#include "scopq/spec_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <set>

namespace scopq {

namespace {

using nlohmann::ordered_json;

void reject_unknown_fields(const ordered_json& obj, const std::set<std::string>& known,
                           const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.count(key)) throw SpecError(where + ": unknown field '" + key + "'");
  }
}

std::uint32_t read_count(const ordered_json& obj, const std::string& field,
                         const std::string& where) {
  if (!obj.contains(field)) throw SpecError(where + ": missing field '" + field + "'");
  const auto& v = obj.at(field);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw SpecError(where + ": field '" + field + "' must be a nonnegative integer");
  return static_cast<std::uint32_t>(v.get<std::int64_t>());
}

std::string read_string(const ordered_json& obj, const std::string& field,
                        const std::string& where) {
  if (!obj.contains(field) || !obj.at(field).is_string())
    throw SpecError(where + ": missing string field '" + field + "'");
  return obj.at(field).get<std::string>();
}

ordered_json parse_document(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(std::string("syntax error: ") + e.what());
  }
}

void check_format_version(const ordered_json& doc, const std::string& where) {
  if (read_count(doc, "format_version", where) != 1)
    throw SpecError(where + ": unsupported format_version");
}

}  // namespace

ConceptSpecFile parse_concept_spec(const std::string& text) {
  const ordered_json doc = parse_document(text);
  if (!doc.is_object()) throw SpecError("concept spec: document is not an object");
  reject_unknown_fields(doc, {"format_version", "name", "universe", "contexts", "exemplars"},
                        "concept spec");
  check_format_version(doc, "concept spec");

  ConceptSpecFile spec;
  spec.name = read_string(doc, "name", "concept spec");
  spec.universe = read_count(doc, "universe", "concept spec");
  if (spec.universe == 0) throw SpecError("concept spec: universe must be positive");

  std::set<std::string> names{kUnityName};
  if (doc.contains("contexts")) {
    if (!doc.at("contexts").is_array()) throw SpecError("concept spec: contexts must be an array");
    for (const auto& item : doc.at("contexts")) {
      const std::string where = "context #" + std::to_string(spec.contexts.size());
      reject_unknown_fields(item, {"name", "size", "members"}, where);
      ContextDecl decl;
      decl.name = read_string(item, "name", where);
      if (!names.insert(decl.name).second)
        throw SpecError(where + ": duplicate name '" + decl.name + "'");
      if (item.contains("size") == item.contains("members"))
        throw SpecError(where + ": declare exactly one of 'size' or 'members'");
      if (item.contains("size")) {
        decl.size = read_count(item, "size", where);
      } else {
        if (!item.at("members").is_array()) throw SpecError(where + ": members must be an array");
        std::vector<std::uint32_t> members;
        for (const auto& m : item.at("members")) {
          if (!m.is_number_integer() || m.get<std::int64_t>() < 0)
            throw SpecError(where + ": member ids must be nonnegative integers");
          members.push_back(static_cast<std::uint32_t>(m.get<std::int64_t>()));
        }
        std::sort(members.begin(), members.end());
        if (std::adjacent_find(members.begin(), members.end()) != members.end())
          throw SpecError(where + ": duplicate member id");
        if (!members.empty() && members.back() >= spec.universe)
          throw SpecError(where + ": member id outside the universe");
        decl.members = std::move(members);
      }
      spec.contexts.push_back(std::move(decl));
    }
  }

  if (doc.contains("exemplars")) {
    if (!doc.at("exemplars").is_array())
      throw SpecError("concept spec: exemplars must be an array");
    for (const auto& item : doc.at("exemplars")) {
      const std::string where = "exemplar #" + std::to_string(spec.exemplars.size());
      reject_unknown_fields(item, {"name", "total", "intersections"}, where);
      ExemplarDecl decl;
      decl.name = read_string(item, "name", where);
      if (!names.insert(decl.name).second)
        throw SpecError(where + ": duplicate name '" + decl.name + "'");
      decl.total = read_count(item, "total", where);
      if (item.contains("intersections")) {
        if (!item.at("intersections").is_object())
          throw SpecError(where + ": intersections must be an object");
        for (const auto& [ctx, count] : item.at("intersections").items()) {
          const auto decl_it =
              std::find_if(spec.contexts.begin(), spec.contexts.end(),
                           [&](const ContextDecl& c) { return c.name == ctx; });
          if (decl_it == spec.contexts.end())
            throw SpecError(where + ": intersection references unknown context '" + ctx + "'");
          if (!decl_it->size.has_value())
            throw SpecError(where + ": intersection references explicit-member context '" + ctx +
                            "'");
          if (!count.is_number_integer() || count.get<std::int64_t>() < 0)
            throw SpecError(where + ": intersection counts must be nonnegative integers");
          decl.intersections[ctx] = static_cast<std::uint32_t>(count.get<std::int64_t>());
        }
      }
      spec.exemplars.push_back(std::move(decl));
    }
  }
  return spec;
}

std::string serialize(const ConceptSpecFile& spec) {
  ordered_json doc;
  doc["format_version"] = spec.format_version;
  doc["name"] = spec.name;
  doc["universe"] = spec.universe;
  doc["contexts"] = ordered_json::array();
  for (const auto& c : spec.contexts) {
    ordered_json item;
    item["name"] = c.name;
    if (c.size)
      item["size"] = *c.size;
    else
      item["members"] = *c.members;
    doc["contexts"].push_back(std::move(item));
  }
  doc["exemplars"] = ordered_json::array();
  for (const auto& x : spec.exemplars) {
    ordered_json item;
    item["name"] = x.name;
    item["total"] = x.total;
    item["intersections"] = ordered_json::object();
    for (const auto& [ctx, count] : x.intersections) item["intersections"][ctx] = count;
    doc["exemplars"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

ValidationReport validate(const ConceptSpecFile& spec) {
  ValidationReport report;

  if (!spec.exemplars.empty()) {
    std::uint64_t total = 0;
    for (const auto& x : spec.exemplars) total += x.total;
    if (total != spec.universe)
      report.violations.push_back("exemplar totals sum to " + std::to_string(total) +
                                  ", universe is " + std::to_string(spec.universe));
  }

  for (const auto& c : spec.contexts) {
    if (!c.size) continue;
    std::uint64_t cells = 0;
    for (const auto& x : spec.exemplars) {
      const auto it = x.intersections.find(c.name);
      if (it != x.intersections.end()) cells += it->second;
    }
    if (cells != *c.size)
      report.violations.push_back("context '" + c.name + "' cells sum to " +
                                  std::to_string(cells) + ", declared size is " +
                                  std::to_string(*c.size));
  }

  for (const auto& x : spec.exemplars)
    for (const auto& [ctx, count] : x.intersections)
      if (count > x.total)
        report.violations.push_back("exemplar '" + x.name + "': intersection with '" + ctx +
                                    "' is " + std::to_string(count) + ", exceeds total " +
                                    std::to_string(x.total));
  return report;
}

namespace {

bool is_cell_overflow_only(const ConceptSpecFile& spec, const ValidationReport& report) {
  // Paper mode repairs exactly the cell-exceeds-total class; anything else
  // stays an error in both modes.
  std::size_t overflow = 0;
  for (const auto& x : spec.exemplars)
    for (const auto& [ctx, count] : x.intersections) {
      (void)ctx;
      if (count > x.total) ++overflow;
    }
  return overflow == report.violations.size();
}

}  // namespace

AllocatedConcept allocate(const ConceptSpecFile& spec, AllocationMode mode) {
  const ValidationReport report = validate(spec);
  if (!report.ok()) {
    if (mode == AllocationMode::strict || !is_cell_overflow_only(spec, report)) {
      std::string message = "allocation rejected: " + report.violations.front();
      if (report.violations.size() > 1)
        message += " (+" + std::to_string(report.violations.size() - 1) + " more)";
      throw AllocationError(message);
    }
  }

  AllocatedConcept out;
  Concept& c = out.built;
  c.name = spec.name;
  c.universe_size = spec.universe;

  // Effective totals: paper mode may shave remainders to make room for
  // unattributable context members.
  std::vector<std::uint32_t> effective;
  std::vector<std::uint32_t> attributed_max(spec.exemplars.size(), 0);
  std::map<std::string, std::uint32_t> deficit;
  for (std::size_t i = 0; i < spec.exemplars.size(); ++i) {
    const auto& x = spec.exemplars[i];
    effective.push_back(x.total);
    for (const auto& [ctx, count] : x.intersections) {
      const std::uint32_t fit = std::min(count, x.total);
      attributed_max[i] = std::max(attributed_max[i], fit);
      if (count > x.total) {
        deficit[ctx] += count - x.total;
        out.report.adjustments.push_back("exemplar '" + x.name + "': context '" + ctx +
                                         "' cell " + std::to_string(count) + " capped at total " +
                                         std::to_string(x.total));
      }
    }
  }
  std::uint64_t deficit_total = 0;
  for (const auto& [ctx, d] : deficit) {
    (void)ctx;
    deficit_total += d;
  }

  std::uint64_t need = deficit_total;
  for (std::uint32_t t : effective) need += t;
  while (need > spec.universe) {
    // Shave one id from the largest remainder (ties by spec order).
    std::size_t best = spec.exemplars.size();
    std::uint32_t best_remainder = 0;
    for (std::size_t i = 0; i < spec.exemplars.size(); ++i) {
      const std::uint32_t remainder =
          effective[i] > attributed_max[i] ? effective[i] - attributed_max[i] : 0;
      if (remainder > best_remainder) {
        best_remainder = remainder;
        best = i;
      }
    }
    if (best == spec.exemplars.size())
      throw AllocationError("allocation rejected: universe too small for declared context cells");
    --effective[best];
    --need;
    out.report.adjustments.push_back("exemplar '" + spec.exemplars[best].name +
                                     "': total reduced to " + std::to_string(effective[best]) +
                                     " to keep the declared universe size");
  }

  // Layout: exemplar ranges in spec order, counted-context prefixes inside
  // each range, then per-context regions for unattributable members.
  std::map<std::string, std::vector<std::uint32_t>> context_members;
  std::uint32_t offset = 0;
  for (std::size_t i = 0; i < spec.exemplars.size(); ++i) {
    const auto& x = spec.exemplars[i];
    ContextSet set;
    set.concept_name = c.name;
    set.name = x.name;
    for (std::uint32_t k = 0; k < effective[i]; ++k) set.members.push_back(offset + k);
    for (const auto& [ctx, count] : x.intersections) {
      const std::uint32_t fit = std::min(count, x.total);
      for (std::uint32_t k = 0; k < fit; ++k) context_members[ctx].push_back(offset + k);
    }
    offset += effective[i];
    c.contexts.push_back(std::move(set));
    c.exemplars.push_back(x.name);
  }
  for (auto& [ctx, d] : deficit) {
    for (std::uint32_t k = 0; k < d; ++k) context_members[ctx].push_back(offset + k);
    offset += d;
    out.report.adjustments.push_back("context '" + ctx + "': " + std::to_string(d) +
                                     " members carried by no exemplar");
  }
  if (offset < spec.universe && !spec.exemplars.empty())
    out.report.adjustments.push_back(std::to_string(spec.universe - offset) +
                                     " basic contexts belong to no exemplar");

  for (const auto& decl : spec.contexts) {
    ContextSet set;
    set.concept_name = c.name;
    set.name = decl.name;
    if (decl.members) {
      set.members = *decl.members;
    } else {
      set.members = context_members[decl.name];
      std::sort(set.members.begin(), set.members.end());
    }
    c.contexts.push_back(std::move(set));
  }

  ContextSet unity;
  unity.concept_name = c.name;
  unity.name = kUnityName;
  unity.members.resize(spec.universe);
  std::iota(unity.members.begin(), unity.members.end(), 0);
  c.contexts.insert(c.contexts.begin(), std::move(unity));
  return out;
}

Concept column_concept(const ConceptSpecFile& spec, const std::string& context_name) {
  const bool ground = context_name == "ground" || context_name == kUnityName;

  std::uint32_t support = 0;
  std::vector<std::uint32_t> cells;
  if (ground) {
    support = spec.universe;
    for (const auto& x : spec.exemplars) cells.push_back(x.total);
  } else {
    const auto decl = std::find_if(spec.contexts.begin(), spec.contexts.end(),
                                   [&](const ContextDecl& c) { return c.name == context_name; });
    if (decl == spec.contexts.end())
      throw SpecError("concept '" + spec.name + "' declares no context '" + context_name + "'");
    if (decl->members) {
      support = static_cast<std::uint32_t>(decl->members->size());
    } else {
      support = *decl->size;
      for (const auto& x : spec.exemplars) {
        const auto it = x.intersections.find(context_name);
        cells.push_back(it == x.intersections.end() ? 0 : it->second);
      }
    }
  }
  if (support == 0) throw SpecError("column '" + context_name + "' has empty support");

  const std::uint64_t cell_sum = std::accumulate(cells.begin(), cells.end(), std::uint64_t{0});
  if (!cells.empty() && cell_sum != support)
    throw SpecError("column '" + context_name + "' cells sum to " + std::to_string(cell_sum) +
                    ", support is " + std::to_string(support));

  Concept c;
  c.name = spec.name;
  c.universe_size = support;
  ContextSet unity;
  unity.concept_name = c.name;
  unity.name = kUnityName;
  unity.members.resize(support);
  std::iota(unity.members.begin(), unity.members.end(), 0);
  c.contexts.push_back(std::move(unity));
  std::uint32_t offset = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    ContextSet set;
    set.concept_name = c.name;
    set.name = spec.exemplars[i].name;
    for (std::uint32_t k = 0; k < cells[i]; ++k) set.members.push_back(offset + k);
    offset += cells[i];
    c.contexts.push_back(std::move(set));
    c.exemplars.push_back(spec.exemplars[i].name);
  }
  return c;
}

CompositionSpecFile parse_composition_spec(const std::string& text) {
  const ordered_json doc = parse_document(text);
  if (!doc.is_object()) throw SpecError("composition spec: document is not an object");
  reject_unknown_fields(doc, {"format_version", "factors", "shared", "pairing"},
                        "composition spec");
  check_format_version(doc, "composition spec");

  CompositionSpecFile spec;
  if (!doc.contains("factors") || !doc.at("factors").is_array() || doc.at("factors").size() < 2)
    throw SpecError("composition spec: 'factors' must list at least two concepts");
  for (const auto& f : doc.at("factors")) {
    if (!f.is_string()) throw SpecError("composition spec: factor names must be strings");
    spec.factors.push_back(f.get<std::string>());
  }
  if (std::set<std::string>(spec.factors.begin(), spec.factors.end()).size() !=
      spec.factors.size())
    throw SpecError("composition spec: duplicate factor name");

  if (!doc.contains("shared") || !doc.at("shared").is_object())
    throw SpecError("composition spec: 'shared' must map factor to context name");
  for (const auto& [factor, ctx] : doc.at("shared").items()) {
    if (std::find(spec.factors.begin(), spec.factors.end(), factor) == spec.factors.end())
      throw SpecError("composition spec: shared entry for unknown factor '" + factor + "'");
    if (!ctx.is_string()) throw SpecError("composition spec: shared context names must be strings");
    spec.shared[factor] = ctx.get<std::string>();
  }
  for (const auto& f : spec.factors)
    if (!spec.shared.count(f))
      throw SpecError("composition spec: no shared context for factor '" + f + "'");

  if (!doc.contains("pairing")) throw SpecError("composition spec: missing 'pairing'");
  const auto& pairing = doc.at("pairing");
  if (pairing.is_string()) {
    if (pairing.get<std::string>() != "canonical")
      throw SpecError("composition spec: pairing must be \"canonical\" or an explicit list");
  } else if (pairing.is_array()) {
    std::vector<Tuple> rows;
    for (const auto& row : pairing) {
      if (!row.is_array() || row.size() != spec.factors.size())
        throw SpecError("composition spec: each pairing row needs one id per factor");
      Tuple t;
      for (const auto& id : row) {
        if (!id.is_number_integer() || id.get<std::int64_t>() < 0)
          throw SpecError("composition spec: pairing ids must be nonnegative integers");
        t.push_back(static_cast<std::uint32_t>(id.get<std::int64_t>()));
      }
      rows.push_back(std::move(t));
    }
    spec.explicit_rows = std::move(rows);
  } else {
    throw SpecError("composition spec: pairing must be \"canonical\" or an explicit list");
  }
  return spec;
}

std::string serialize(const CompositionSpecFile& spec) {
  ordered_json doc;
  doc["format_version"] = spec.format_version;
  doc["factors"] = spec.factors;
  doc["shared"] = ordered_json::object();
  for (const auto& f : spec.factors) doc["shared"][f] = spec.shared.at(f);
  if (spec.explicit_rows) {
    doc["pairing"] = ordered_json::array();
    for (const auto& row : *spec.explicit_rows) doc["pairing"].push_back(row);
  } else {
    doc["pairing"] = "canonical";
  }
  return doc.dump(2) + "\n";
}

ResolvedComposition resolve_composition(const CompositionSpecFile& spec,
                                        std::vector<Concept> factors) {
  if (factors.size() != spec.factors.size())
    throw SpecError("composition: expected " + std::to_string(spec.factors.size()) +
                    " factor concepts");
  for (std::size_t f = 0; f < factors.size(); ++f)
    if (factors[f].name != spec.factors[f])
      throw SpecError("composition: factor " + std::to_string(f) + " is '" + factors[f].name +
                      "', spec names '" + spec.factors[f] + "'");

  std::vector<std::string> shared_names;
  for (const auto& f : spec.factors) shared_names.push_back(spec.shared.at(f));

  CompositeSpace space(std::move(factors));
  SharedContextPairing pairing =
      spec.explicit_rows ? explicit_pairing(space, shared_names, *spec.explicit_rows)
                         : canonical_pairing(space, shared_names);
  return ResolvedComposition{std::move(space), std::move(pairing)};
}

}  // namespace scopq
