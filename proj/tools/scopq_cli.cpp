#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "scopq/report.hpp"

namespace {

// "--apply slot:context" steps, in order.
std::vector<scopq::ApplyStep> parse_applies(const std::vector<std::string>& raw) {
  std::vector<scopq::ApplyStep> steps;
  for (const auto& item : raw) {
    const auto colon = item.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == item.size())
      throw CLI::ValidationError("--apply expects slot:context, got '" + item + "'");
    scopq::ApplyStep step;
    step.slot = static_cast<std::size_t>(std::stoul(item.substr(0, colon)));
    step.context = item.substr(colon + 1);
    steps.push_back(std::move(step));
  }
  return steps;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert-space concept models: weights, collapse, and tensor combination"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string state = "ground";
  std::string context;
  std::string format = "table";
  int digits = 2;
  std::string mode = "entangled";
  std::vector<std::string> applies;
  std::string report = "weights";
  std::string out_dir = "paper_out";
  std::string specs_dir;

  auto* validate = app.add_subcommand("validate", "check a concept spec for count consistency");
  validate->add_option("spec", spec_path, "concept spec file")->required();

  auto* weights = app.add_subcommand("weights", "exemplar weight table for a state");
  weights->add_option("spec", spec_path, "concept spec file")->required();
  weights->add_option("--state", state, "context name or 'ground'");
  weights->add_option("--format", format, "table or csv")
      ->check(CLI::IsMember({"table", "csv"}));
  weights->add_option("--digits", digits, "fractional digits")->check(CLI::Range(0, 15));

  auto* collapse = app.add_subcommand("collapse", "collapse a state under a context");
  collapse->add_option("spec", spec_path, "concept spec file")->required();
  collapse->add_option("--state", state, "starting state: context name or 'ground'");
  collapse->add_option("--context", context, "context to apply")->required();

  auto* combine = app.add_subcommand("combine", "build and analyze a composite state");
  combine->add_option("composition", spec_path, "composition spec file")->required();
  combine->add_option("--mode", mode, "product or entangled")
      ->check(CLI::IsMember({"product", "entangled"}));
  combine->add_option("--apply", applies, "collapse steps, each slot:context");
  combine->add_option("--report", report, "weights or reduced")
      ->check(CLI::IsMember({"weights", "reduced"}));

  auto* paper = app.add_subcommand("paper", "write the bundled-model analysis as CSV files");
  paper->add_option("--out", out_dir, "output directory");
  paper->add_option("--specs", specs_dir, "spec directory (default: SCOP_SPEC_PATH or ./specs)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : scopq::kExitIoParse;
  }

  if (validate->parsed()) return scopq::run_validate(spec_path, std::cout, std::cerr);
  if (weights->parsed()) {
    scopq::WeightsOptions options{state, format, digits};
    return scopq::run_weights(spec_path, options, std::cout, std::cerr);
  }
  if (collapse->parsed())
    return scopq::run_collapse(spec_path, state, context, std::cout, std::cerr);
  if (combine->parsed()) {
    scopq::CombineOptions options;
    options.mode = mode;
    options.report = report;
    try {
      options.applies = parse_applies(applies);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return scopq::kExitIoParse;
    }
    return scopq::run_combine(spec_path, options, std::cout, std::cerr);
  }
  if (paper->parsed()) {
    if (specs_dir.empty()) {
      if (const char* base = std::getenv("SCOP_SPEC_PATH"))
        specs_dir = base;
      else
        specs_dir = "specs";
    }
    return scopq::run_paper(out_dir, specs_dir, std::cout, std::cerr);
  }
  return scopq::kExitIoParse;
}
