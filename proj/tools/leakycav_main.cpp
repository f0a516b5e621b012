// leakycav CLI: evaluate a scenario file and emit the results as CSV.
//
// Exit codes: 0 success, 1 validation error (bad input or usage),
// 2 numerical error (a computation lost its accuracy guarantees),
// 3 I/O error (unreadable scenario or unwritable output).

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "leakycav/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Motion-induced particle creation in a leaky cavity"};
  app.require_subcommand(1);

  CLI::App* run_cmd =
      app.add_subcommand("run", "Evaluate a scenario file and emit CSV");
  std::string scenario_path;
  std::string engine_override;
  std::string out_override;
  run_cmd->add_option("scenario", scenario_path, "Scenario file path")
      ->required();
  run_cmd
      ->add_option("--engine", engine_override,
                   "Override the scenario's engine: rwa, oracle, or both")
      ->check(CLI::IsMember({"rwa", "oracle", "both"}));
  run_cmd->add_option("--out", out_override,
                      "Override the output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints usage/help text
    return code == 0 ? 0 : 1;     // usage problems are validation errors
  }

  try {
    leakycav::scenario::Scenario scn =
        leakycav::scenario::load_scenario(scenario_path);
    if (!engine_override.empty()) {
      if (engine_override == "rwa") {
        scn.engine = leakycav::scenario::Engine::Rwa;
      } else if (engine_override == "oracle") {
        scn.engine = leakycav::scenario::Engine::Oracle;
      } else {
        scn.engine = leakycav::scenario::Engine::Both;
      }
      scn.validate();  // engine interacts with sweep constraints
    }
    if (!out_override.empty()) scn.output_path = out_override;

    const std::vector<leakycav::scenario::ResultRow> rows =
        leakycav::scenario::run(scn);
    if (scn.output_path.empty() || scn.output_path == "-") {
      const std::string text = leakycav::scenario::emit_csv(rows);
      std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
      leakycav::scenario::emit_csv_file(scn.output_path, rows);
    }
    return 0;
  } catch (const leakycav::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const leakycav::NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const leakycav::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
