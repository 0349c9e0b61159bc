// massey-workbench: command-line front end for the verification suites.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "massey/workbench.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of decompositions, quasi-morphisms and the Massey product construction",
               "massey-workbench"};
  app.require_subcommand(1, 1);

  std::string config_path, out_path;
  std::uint64_t seed = 0;
  int radius = 0, jobs = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the plan seed");
    sub->add_option("--radius", radius, "override the exhaustive radius")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out_path, "where to write the JSON report");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  };
  add_common(app.add_subcommand("axioms", "check decomposition axioms (i)-(iv) and measure R-hat"));
  add_common(app.add_subcommand("defect", "sup of the defect of a quasi-morphism, with the thick-part bound"));
  add_common(app.add_subcommand("verify-primitive", "cocycle and primitive identities only"));
  add_common(app.add_subcommand("massey", "full Massey triviality verification"));
  auto* report = app.add_subcommand("report", "render a stored JSON report as a table");
  report->add_option("path", config_path, "report JSON")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : massey::kExitConfig;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  massey::Overrides o;
  // `report` has none of the common options
  auto given = [&](const char* name) {
    const CLI::Option* opt = chosen->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--seed")) o.seed = seed;
  if (given("--radius")) o.radius = radius;
  if (given("--jobs")) o.jobs = jobs;
  if (const char* cap = std::getenv(massey::kEnumerationCapEnv)) {
    try {
      std::size_t used = 0;
      o.enumeration_cap = std::stoull(cap, &used);
      if (used != std::string(cap).size() || *o.enumeration_cap == 0) throw std::invalid_argument(cap);
    } catch (const std::exception&) {
      std::cerr << "config error: " << massey::kEnumerationCapEnv << " must be a positive integer\n";
      return massey::kExitConfig;
    }
  }
  return massey::run_command(chosen->get_name(), config_path, o, out_path, std::cout, std::cerr);
}
