// Command-line front end: check <scenario.json> [--branch-bound B] [--window W]
//                                               [--emit-trace PATH] [--json PATH]
// Exit codes: 0 all claims NOT OBSTRUCTED, 10 some claim INFEASIBLE,
// 1 validation/admissibility error, 2 internal error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "cobstruct/pipeline.hpp"

namespace {

constexpr int kNotObstructed = 0;
constexpr int kInvalid = 1;
constexpr int kInternal = 2;
constexpr int kInfeasible = 10;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cobstruct::ValidationError(path + ": cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Obstructions to monotone Lagrangian cobordisms from Floer-theoretic exact sequences"};
  app.require_subcommand(1);
  auto* check = app.add_subcommand("check", "Run a scenario and report a verdict per claimed cobordism");
  std::string scenario_path;
  std::optional<long long> branch_bound;
  std::optional<long long> window;
  std::string trace_path;
  std::string json_path;
  check->add_option("scenario", scenario_path, "Scenario JSON file (schema 1)")->required();
  check->add_option("--branch-bound", branch_bound, "Entry bound for enumerated differentials (default 4)")
      ->check(CLI::PositiveNumber);
  check->add_option("--window", window, "Column steps on each side of p = 0 (default 2)")
      ->check(CLI::PositiveNumber);
  check->add_option("--emit-trace", trace_path, "Write the full derivation trace to PATH");
  check->add_option("--json", json_path, "Write the JSON verdict block to PATH");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    auto scenario = cobstruct::parse_scenario(read_file(scenario_path));
    if (branch_bound) scenario.solver.entry_bound = *branch_bound;
    if (window) scenario.solver.window = *window;
    const auto report = cobstruct::run(scenario);
    if (!trace_path.empty()) write_file(trace_path, cobstruct::render_text(report));
    if (!json_path.empty()) write_file(json_path, cobstruct::render_json(report));
    std::cout << cobstruct::render_summary(report);
    return report.any_infeasible() ? kInfeasible : kNotObstructed;
  } catch (const cobstruct::AdmissibilityError& e) {
    std::cerr << "admissibility error: hypothesis '" << e.hypothesis() << "' violated: " << e.detail() << "\n";
    return kInvalid;
  } catch (const cobstruct::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kInvalid;
  } catch (const cobstruct::UnsupportedProblemError& e) {
    std::cerr << "unsupported problem: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
