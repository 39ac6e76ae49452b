#ifndef SCOPQ_REPORT_HPP
#define SCOPQ_REPORT_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scopq/concept.hpp"
#include "scopq/rational.hpp"

namespace scopq {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIoParse = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitImpossibleContext = 3;

struct ReportRow {
  std::string label;
  double value = 0.0;
  std::optional<Rational> exact;
};

// Fixed-point rendering with `digits` fractional digits.
std::string format_value(double value, int digits);

// Resolves a spec argument: the path itself if it exists, otherwise relative
// to SCOP_SPEC_PATH.
std::string resolve_spec_path(const std::string& arg);

struct WeightsOptions {
  std::string state = "ground";
  std::string format = "table";  // "table" or "csv"
  int digits = 2;
};

struct ApplyStep {
  std::size_t slot = 0;
  std::string context;
};

struct CombineOptions {
  std::string mode = "entangled";  // "product" or "entangled"
  std::vector<ApplyStep> applies;
  std::string report = "weights";  // "weights" or "reduced"
};

int run_validate(const std::string& spec_path, std::ostream& out, std::ostream& err);
int run_weights(const std::string& spec_path, const WeightsOptions& options, std::ostream& out,
                std::ostream& err);
int run_collapse(const std::string& spec_path, const std::string& state_name,
                 const std::string& context_name, std::ostream& out, std::ostream& err);
int run_combine(const std::string& composition_path, const CombineOptions& options,
                std::ostream& out, std::ostream& err);
int run_paper(const std::string& out_dir, const std::string& specs_dir, std::ostream& out,
              std::ostream& err);

}  // namespace scopq

#endif
