#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cayley/error.hpp"
#include "cli.hpp"

namespace {

using cayley::cli::CommandResult;
using cayley::cli::UsageError;
using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": malformed JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cayley planes and Cayley submanifolds: numerical checks"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  std::string out;
  std::string csv;
  int phases = 16;
  app.add_option("--seed", seed, "Seed for randomized runs")->capture_default_str();
  app.add_option("--out", out, "Write the JSON report here instead of stdout");
  app.add_option("--phases", phases, "Number of calibration phases alpha = 2 pi m / phases")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze-plane", "Kahler angles, canonical form and calibration values of a plane");
  std::string plane_path;
  double plane_tol = 1e-9;
  analyze->add_option("plane", plane_path, "Plane JSON: {\"frame\": [[8 numbers] x 4]}")->required();
  analyze->add_option("--tol", plane_tol, "Cayley tolerance on the self-duality residual")->capture_default_str();

  auto* scan = app.add_subcommand("scan", "Statistics over Haar-random planes");
  cayley::cli::ScanOptions scan_opts;
  scan->add_option("-n,--count", scan_opts.n, "Number of planes")->capture_default_str();
  scan->add_option("--tol", scan_opts.cayley_tol, "Self-duality residual counted as near-Cayley")->capture_default_str();
  scan->add_option("--bins", scan_opts.bins, "Histogram bins")->capture_default_str();
  scan->add_option("--csv", csv, "Write per-sample rows to this CSV file");

  auto* comass = app.add_subcommand("comass", "Comass of a Cayley calibration by projected gradient ascent");
  cayley::cli::ComassRun comass_opts;
  comass->add_option("--alpha", comass_opts.alpha, "Phase of the calibration")->capture_default_str();
  comass->add_option("--samples", comass_opts.samples, "Random starts")->capture_default_str();
  comass->add_option("--steps", comass_opts.steps, "Ascent steps per start")->capture_default_str();

  auto* verify = app.add_subcommand("verify-patch", "Run every applicable check on a patch");
  std::string spec_path;
  cayley::cli::VerifyOptions verify_opts;
  std::string ambient;
  int grid = 0;
  double step = 0.0;
  double verify_tol = 0.0;
  verify->add_option("spec", spec_path, "Patch spec JSON: {name, params, grid, ambient}")->required();
  verify->add_option("--ambient", ambient, "flat | fubini-study (overrides the patch spec)")
      ->check(CLI::IsMember({"flat", "fubini-study"}));
  verify->add_option("--grid", grid, "Sample points per axis (overrides the patch spec)")->check(CLI::Range(1, 64));
  verify->add_option("--step", step, "Difference step h (overrides the patch spec)")->check(CLI::Range(1e-8, 0.5));
  verify->add_option("--tol", verify_tol, "Cayley tolerance on difference planes (overrides the patch spec)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--h-metric", verify_opts.chart_steps.h_metric, "Step for metric derivatives")
      ->capture_default_str();
  verify->add_option("--h-curv", verify_opts.chart_steps.h_curv, "Step for the Ricci form")->capture_default_str();
  verify->add_option("--refinements", verify_opts.refinements, "Step halvings in the Theorem III study")
      ->capture_default_str()
      ->check(CLI::Range(1, 4));
  verify->add_option("--csv", csv, "Write per-point rows to this CSV file");

  auto* suite = app.add_subcommand("invariant-suite", "Quick run of the library's invariants");
  cayley::cli::SuiteOptions suite_opts;
  suite->add_option("--h-metric", suite_opts.chart_steps.h_metric, "Step for metric derivatives")
      ->capture_default_str();
  suite->add_option("--h-curv", suite_opts.chart_steps.h_curv, "Step for the Ricci form")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CommandResult result;
    if (*analyze) {
      cayley::cli::AnalyzeOptions opts;
      opts.phases = phases;
      opts.cayley_tol = plane_tol;
      result = cayley::cli::analyze_plane(read_json(plane_path), opts);
    } else if (*scan) {
      scan_opts.seed = seed;
      scan_opts.phases = phases;
      scan_opts.csv = !csv.empty();
      result = cayley::cli::scan(scan_opts);
    } else if (*comass) {
      comass_opts.seed = seed;
      result = cayley::cli::comass(comass_opts);
    } else if (*verify) {
      if (!ambient.empty()) verify_opts.ambient = ambient;
      if (grid > 0) verify_opts.points = grid;
      if (step > 0.0) verify_opts.step = step;
      if (verify_tol > 0.0) verify_opts.cayley_tol = verify_tol;
      verify_opts.phases = phases;
      verify_opts.csv = !csv.empty();
      result = cayley::cli::verify_patch(cayley::cli::parse_patch_spec(read_json(spec_path)), verify_opts);
    } else if (*suite) {
      suite_opts.seed = seed;
      result = cayley::cli::invariant_suite(suite_opts);
    }
    write_text(out, result.report.dump(2) + "\n");
    if (!csv.empty()) write_text(csv, result.csv);
    return result.passed() ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cayley::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
