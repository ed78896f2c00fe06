#pragma once

// Commands behind the `cayley` executable. Each returns a JSON report plus
// the list of failed checks; main() maps that to the exit code.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cayley/ambient.hpp"
#include "cayley/builtin_patches.hpp"
#include "cayley/patches.hpp"

namespace cayley::cli {

// Malformed input or arguments (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommandResult {
  nlohmann::json report;
  std::vector<std::string> failures;
  std::string csv;  // per-point or per-sample rows, when requested

  bool passed() const { return failures.empty(); }
};

inline constexpr double kGramRepairTol = 1e-6;
inline constexpr double kCalibrationSlack = 1e-9;

struct AnalyzeOptions {
  int phases = 16;
  double cayley_tol = 1e-9;
};

// {"frame": [[8 numbers], [8], [8], [8]]}; frames within kGramRepairTol of
// orthonormal are re-orthonormalized.
OrientedPlane4 parse_plane(const nlohmann::json& input);
CommandResult analyze_plane(const nlohmann::json& input, const AnalyzeOptions& options = {});

struct ScanOptions {
  long long n = 1000;
  std::uint64_t seed = 0;
  int phases = 16;
  double cayley_tol = 0.05;  // self-duality residual counted as near-Cayley
  int bins = 16;
  bool csv = false;
};

CommandResult scan(const ScanOptions& options);

struct ComassRun {
  double alpha = 0.0;
  int samples = 64;
  int steps = 500;
  std::uint64_t seed = 0;
};

CommandResult comass(const ComassRun& options);

struct PatchSpec {
  std::string name;
  PatchParams params;
  PatchGrid grid;
  std::string ambient;
  PatchTolerances tolerances;
};

struct VerifyOptions {
  std::optional<std::string> ambient;
  std::optional<int> points;
  std::optional<double> step;
  std::optional<double> cayley_tol;
  int phases = 16;
  ChartSteps chart_steps;
  int refinements = 2;
  bool csv = false;
};

// Collects every problem before throwing UsageError, one per line.
PatchSpec parse_patch_spec(const nlohmann::json& input);
CommandResult verify_patch(const PatchSpec& spec, const VerifyOptions& options = {});

struct SuiteOptions {
  std::uint64_t seed = 0;
  ChartSteps chart_steps;
};

CommandResult invariant_suite(const SuiteOptions& options);

// Residual bound used by verify_patch for O(h^2) identities: 10 h^2.
double residual_bound(double h);
// Roundoff level of the Theorem III residual at step h (a third difference
// quotient of F): 10 eps / h^3. Orders are only read off above it.
double order_floor(double h);
inline constexpr double kMinOrder = 1.8;

}  // namespace cayley::cli
