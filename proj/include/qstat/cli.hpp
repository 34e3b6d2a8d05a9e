#pragma once

// Command-line front end, kept in a header so tests can drive it in-process.
//
//   qstat classify|generalized|lift|norden|all <manifest.json> [--bundle cotangent|tangent]
//         [--samples N] [--seed S] [--tol T] [--out report.json] [--builtin NAME]
//   qstat export --builtin NAME [--out manifest.json]
//
// Exit codes: 0 every check passed, 1 some check failed, 2 bad input.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qstat/catalog.hpp"
#include "qstat/suites.hpp"

namespace qstat {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInput = 2;

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verify quasi-statistical structures, their generalized and lifted geometry"};
  app.set_version_flag("--version", "qstat 1.0");
  std::string command, manifest_path, bundle_name, out_path, builtin_name;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  app.add_option("command", command, "classify | generalized | lift | norden | all | export")
      ->required()
      ->check(CLI::IsMember({"classify", "generalized", "lift", "norden", "all", "export"}));
  app.add_option("manifest", manifest_path, "manifest JSON file");
  app.add_option("--bundle", bundle_name, "cotangent or tangent (default: both)")
      ->check(CLI::IsMember({"cotangent", "tangent"}));
  app.add_option("--samples", samples, "number of sample points")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--tol", tolerance, "tolerance for vanishing checks")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "write the report (or exported manifest) here instead of stdout");
  app.add_option("--builtin", builtin_name, "use a catalog entry instead of a manifest file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForVersion& e) {
    out << "qstat 1.0\n";
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "qstat: " << e.what() << "\n";
    return kExitInput;
  }

  auto emit = [&](const std::string& text) -> bool {
    if (out_path.empty()) {
      out << text << "\n";
      return true;
    }
    std::ofstream f(out_path);
    if (!f) {
      err << "qstat: cannot write " << out_path << "\n";
      return false;
    }
    f << text << "\n";
    return true;
  };

  Manifest m;
  try {
    if (!builtin_name.empty() && !manifest_path.empty()) {
      err << "qstat: give either a manifest or --builtin, not both\n";
      return kExitInput;
    }
    if (!builtin_name.empty()) {
      m.spec = builtin(builtin_name).spec;
    } else if (!manifest_path.empty()) {
      m = load_manifest(manifest_path);
    } else {
      err << "qstat: a manifest path or --builtin NAME is required\n";
      return kExitInput;
    }
    if (samples) m.options.samples = *samples;
    if (seed) m.options.seed = *seed;
    if (tolerance) m.options.tolerance = *tolerance;
    if (samples || seed) validate(m.spec, sample_points(m.spec.domain, m.options.samples, m.options.seed));
  } catch (const ManifestError& e) {
    err << "qstat: " << e.what() << "\n";
    return kExitInput;
  } catch (const DegenerateMetric& e) {
    err << "qstat: degenerate metric: " << e.what() << "\n";
    return kExitInput;
  } catch (const SymmetryViolation& e) {
    err << "qstat: symmetry violation: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "qstat: " << e.what() << "\n";
    return kExitInput;
  }

  if (command == "export") return emit(export_manifest(m.spec, m.options).dump(2)) ? kExitPass : kExitInput;

  std::optional<Bundle> bundle;
  if (!bundle_name.empty()) bundle = bundle_from_string(bundle_name);
  VerificationReport report;
  try {
    report = run(command_from_string(command), m.spec, m.options, bundle);
  } catch (const std::exception& e) {
    // e.g. an expression leaving its domain at a lifted sample point
    err << "qstat: evaluation failed: " << e.what() << "\n";
    return kExitInput;
  }
  if (!emit(report.to_json().dump(2))) return kExitInput;
  std::size_t failed = 0;
  for (const auto& c : report.checks)
    if (!c.pass) {
      ++failed;
      err << "FAIL " << c.id << "  residual " << c.max_residual << " > " << c.tolerance << "\n";
    }
  err << report.spec_label << ": " << report.checks.size() - failed << "/" << report.checks.size() << " checks passed\n";
  return failed == 0 ? kExitPass : kExitFail;
}

}  // namespace qstat
