// srep: run, describe and self-check pool synchronization experiments.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "srep/scenario.hpp"
#include "srep/selftest.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kOther = 1,
  kParse = 2,
  kParams = 3,
  kInvariant = 4,
  kIo = 5,
};

int exit_code(const srep::Error& e) {
  if (dynamic_cast<const srep::ParseError*>(&e)) return kParse;
  if (dynamic_cast<const srep::IoError*>(&e)) return kIo;
  if (dynamic_cast<const srep::AssertionError*>(&e) || dynamic_cast<const srep::ReconciliationError*>(&e))
    return kInvariant;
  if (dynamic_cast<const srep::ParameterError*>(&e) || dynamic_cast<const srep::StructuralError*>(&e) ||
      dynamic_cast<const srep::GenerationError*>(&e) || dynamic_cast<const srep::CalibrationError*>(&e) ||
      dynamic_cast<const srep::ModelError*>(&e))
    return kParams;
  return kOther;
}

int cmd_run(const std::string& path, const std::optional<std::string>& output_override) {
  auto sc = srep::load_scenario(path);
  if (output_override) sc.output = *output_override;
  if (sc.output.empty()) throw srep::ParameterError("no output path: set [experiment] output or pass --output");

  const auto t0 = std::chrono::steady_clock::now();
  auto res = srep::run_experiment(sc);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::filesystem::path out(sc.output);
  srep::write_text(out, res.summary.str());
  srep::write_text(srep::runs_path(out), res.runs.str());
  for (const auto& m : res.messages) std::cout << m << '\n';
  std::cout << srep::to_string(sc.kind) << ": " << sc.run_count() << " runs in " << secs << " s -> "
            << out.string() << '\n';
  if (res.violations > 0) {
    std::cerr << "error: " << res.violations << " run(s) violated a bound\n";
    return kInvariant;
  }
  return kOk;
}

int cmd_describe(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw srep::IoError("cannot open scenario '" + path + "'");
  auto sc = srep::parse_scenario(in, std::filesystem::path(path).parent_path());
  srep::validate(sc);
  std::cout << srep::describe(sc);
  return kOk;
}

int cmd_selftest() {
  int failed = 0;
  for (const auto& c : srep::run_selftest()) {
    std::cout << (c.ok ? "ok    " : "FAIL  ") << c.name;
    if (!c.ok) std::cout << " (" << c.detail << ")";
    std::cout << '\n';
    failed += !c.ok;
  }
  if (failed) {
    std::cout << failed << " check(s) failed\n";
    return kInvariant;
  }
  std::cout << "all checks passed\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Set-reconciliation pool sync simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::optional<std::string> output;
  auto* run = app.add_subcommand("run", "Execute a scenario and write its CSV files");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("-o,--output", output, "Override the summary CSV path");

  auto* describe = app.add_subcommand("describe", "Print the resolved plan of a scenario");
  describe->add_option("scenario", scenario, "Scenario file")->required();

  app.add_subcommand("selftest", "Run the invariant suite on small graphs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) return cmd_run(scenario, output);
    if (describe->parsed()) return cmd_describe(scenario);
    return cmd_selftest();
  } catch (const srep::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
}
