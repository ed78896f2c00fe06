#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "cayley/error.hpp"
#include "cayley/hermitian.hpp"
#include "cayley/parallel.hpp"
#include "cayley/planes.hpp"
#include "cayley/random.hpp"

namespace cayley::cli {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

json vector_json(const Vector8& v) {
  json out = json::array();
  for (int i = 0; i < 8; ++i) out.push_back(v[i]);
  return out;
}

json frame_json(const Frame4& f) {
  json out = json::array();
  for (int c = 0; c < 4; ++c) out.push_back(vector_json(f.col(c)));
  return out;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<double> phase_grid(int phases) {
  if (phases < 1) throw UsageError("--phases must be at least 1");
  std::vector<double> out;
  for (int m = 0; m < phases; ++m) out.push_back(2.0 * kPi * m / phases);
  return out;
}

std::vector<long long> histogram(const std::vector<double>& values, double lo, double hi, int bins) {
  std::vector<long long> counts(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    int b = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
    b = std::clamp(b, 0, bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  return counts;
}

json status(bool applicable, bool ok) { return applicable ? json(ok ? "pass" : "fail") : json("skipped"); }

std::string csv_number(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

double residual_bound(double h) { return 10.0 * h * h; }

double order_floor(double h) { return 10.0 * std::numeric_limits<double>::epsilon() / (h * h * h); }

// ---------------------------------------------------------------- planes

namespace {

Frame4 parse_frame(const json& input) {
  if (!input.is_object() || !input.contains("frame")) throw UsageError("plane input needs a \"frame\" field");
  const json& f = input.at("frame");
  if (!f.is_array() || f.size() != 4) throw UsageError("\"frame\" must be an array of 4 vectors");
  Frame4 frame;
  for (int c = 0; c < 4; ++c) {
    const json& v = f[static_cast<std::size_t>(c)];
    if (!v.is_array() || v.size() != 8) {
      throw UsageError("frame vector " + std::to_string(c + 1) + " must have 8 entries");
    }
    for (int r = 0; r < 8; ++r) {
      const json& x = v[static_cast<std::size_t>(r)];
      if (!x.is_number()) {
        throw UsageError("frame vector " + std::to_string(c + 1) + " entry " + std::to_string(r + 1) +
                         " is not a number");
      }
      frame(r, c) = x.get<double>();
    }
  }
  if (!frame.allFinite()) throw UsageError("frame has non-finite entries");
  return frame;
}

OrientedPlane4 repaired(const Frame4& frame) {
  const double dev = gram_deviation(frame);
  if (dev > kGramRepairTol) {
    std::ostringstream msg;
    msg << "non_orthonormal: Gram deviation " << dev << " exceeds repair tolerance " << kGramRepairTol;
    throw UsageError(msg.str());
  }
  return dev > kOrthonormalTol ? OrientedPlane4::orthonormalized(frame) : OrientedPlane4::from_frame(frame);
}

}  // namespace

OrientedPlane4 parse_plane(const json& input) { return repaired(parse_frame(input)); }

CommandResult analyze_plane(const json& input, const AnalyzeOptions& options) {
  const std::vector<double> phases = phase_grid(options.phases);
  const Frame4 frame = parse_frame(input);
  const double dev = gram_deviation(frame);
  const OrientedPlane4 plane = repaired(frame);
  const AngleReport angles = canonical_form(plane, options.cayley_tol);
  const CayleyCheck check = is_cayley(plane, options.cayley_tol);

  CommandResult result;
  json& r = result.report;
  r["command"] = "analyze-plane";
  r["input"] = {{"gram_deviation", dev}, {"repaired", dev > kOrthonormalTol}};
  r["theta1"] = angles.theta1;
  r["theta2"] = angles.theta2;
  r["lambda"] = optional_number(angles.lambda);
  r["classification"] = std::string(to_string(angles.classification));
  r["cayley"] = {{"is_cayley", check.is_cayley},
                 {"tolerance", options.cayley_tol},
                 {"self_duality_residual", check.self_duality_residual},
                 {"b_residual", check.b_residual}};
  r["canonical_basis"] = angles.unitary_basis ? frame_json(*angles.unitary_basis) : json(nullptr);
  r["degenerate"] = {{"factor", {angles.degenerate_factor[0], angles.degenerate_factor[1]}},
                     {"tie", angles.degenerate_tie}};
  try {
    const OmegaXi oxi = omega_xi(plane);
    r["omega_xi"] = {{"phase", oxi.phase}, {"value", oxi.value}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::partially_complex) throw;
    r["omega_xi"] = nullptr;
  }
  const CalibrationPairing pairing = calibration_pairing(plane);
  json values = json::array();
  double max_value = -std::numeric_limits<double>::infinity();
  for (double a : phases) {
    const double v = pairing.at(a);
    values.push_back(v);
    max_value = std::max(max_value, v);
  }
  r["calibration"] = {{"phases", phases}, {"values", values}, {"max", max_value}};
  const bool ok = max_value <= 1.0 + kCalibrationSlack;
  r["checks"] = {{"calibration_inequality", status(true, ok)}};
  if (!ok) result.failures.push_back("calibration_inequality");
  r["pass"] = result.passed();
  r["failures"] = result.failures;
  return result;
}

// ------------------------------------------------------------------ scan

CommandResult scan(const ScanOptions& options) {
  if (options.n < 1) throw UsageError("scan needs n >= 1");
  if (options.bins < 1) throw UsageError("scan needs at least one histogram bin");
  const std::vector<double> phases = phase_grid(options.phases);
  const auto n = static_cast<std::size_t>(options.n);

  struct Sample {
    double theta1, theta2, residual, max_phi, lambda;
    bool near_cayley;
  };
  std::vector<Sample> samples(n);
  parallel_for(n, [&](std::size_t i) {
    Rng rng(derive_seed(options.seed, i));
    const OrientedPlane4 plane = OrientedPlane4::orthonormalized(haar_frame(rng));
    const CayleyCheck check = is_cayley(plane, options.cayley_tol);
    const AngleReport angles = kahler_angles(plane, options.cayley_tol);
    const CalibrationPairing pairing = calibration_pairing(plane);
    double best = -std::numeric_limits<double>::infinity();
    for (double a : phases) best = std::max(best, pairing.at(a));
    samples[i] = {angles.theta1, angles.theta2, check.self_duality_residual, best, check.lambda, check.is_cayley};
  });

  std::vector<double> t1, t2, lambdas;
  double max_phi = -std::numeric_limits<double>::infinity();
  std::size_t argmax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t1.push_back(samples[i].theta1);
    t2.push_back(samples[i].theta2);
    if (samples[i].near_cayley) lambdas.push_back(samples[i].lambda);
    if (samples[i].max_phi > max_phi) {
      max_phi = samples[i].max_phi;
      argmax = i;
    }
  }

  CommandResult result;
  json& r = result.report;
  r["command"] = "scan";
  r["n"] = options.n;
  r["seed"] = options.seed;
  r["phases"] = options.phases;
  r["cayley_tol"] = options.cayley_tol;
  r["theta1_histogram"] = {{"range", {0.0, kPi / 2}}, {"counts", histogram(t1, 0.0, kPi / 2, options.bins)}};
  r["theta2_histogram"] = {{"range", {0.0, kPi}}, {"counts", histogram(t2, 0.0, kPi, options.bins)}};
  r["near_cayley"] = {{"count", lambdas.size()},
                      {"fraction", static_cast<double>(lambdas.size()) / static_cast<double>(n)},
                      {"lambda_histogram", {{"range", {0.0, 1.0}}, {"counts", histogram(lambdas, 0.0, 1.0, 10)}}}};
  r["max_calibration"] = {{"value", max_phi}, {"sample", argmax}};
  const bool ok = max_phi <= 1.0 + kCalibrationSlack;
  r["checks"] = {{"calibration_inequality", status(true, ok)}};
  if (!ok) result.failures.push_back("calibration_inequality");
  r["pass"] = result.passed();
  r["failures"] = result.failures;

  if (options.csv) {
    std::ostringstream csv;
    csv << "sample,theta1,theta2,self_duality_residual,max_calibration\n";
    for (std::size_t i = 0; i < n; ++i) {
      csv << i << ',' << csv_number(samples[i].theta1) << ',' << csv_number(samples[i].theta2) << ','
          << csv_number(samples[i].residual) << ',' << csv_number(samples[i].max_phi) << '\n';
    }
    result.csv = csv.str();
  }
  return result;
}

// ---------------------------------------------------------------- comass

CommandResult comass(const ComassRun& options) {
  if (options.samples < 1) throw UsageError("comass needs at least one sample");
  if (options.steps < 0) throw UsageError("comass needs a non-negative step count");
  const KForm form = cayley_calibration(options.alpha).form();
  std::vector<AscentResult> runs(static_cast<std::size_t>(options.samples));
  parallel_for(runs.size(), [&](std::size_t i) {
    Rng rng(derive_seed(options.seed, i));
    runs[i] = ascend(form, haar_frame(rng), options.steps);
  });
  double best = -std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  int converged = 0;
  for (const auto& run : runs) {
    best = std::max(best, run.value);
    worst = std::min(worst, run.value);
    if (run.value >= 1.0 - 1e-6) ++converged;
  }
  CommandResult result;
  json& r = result.report;
  r["command"] = "comass";
  r["alpha"] = options.alpha;
  r["samples"] = options.samples;
  r["steps"] = options.steps;
  r["seed"] = options.seed;
  r["comass"] = best;
  r["worst_run"] = worst;
  r["converged_runs"] = converged;
  const bool bounded = best <= 1.0 + kCalibrationSlack;
  const bool attained = best >= 1.0 - 1e-6;
  r["checks"] = {{"calibration_inequality", status(true, bounded)}, {"comass_attained", status(true, attained)}};
  if (!bounded) result.failures.push_back("calibration_inequality");
  if (!attained) result.failures.push_back("comass_attained");
  r["pass"] = result.passed();
  r["failures"] = result.failures;
  return result;
}

// --------------------------------------------------------------- patches

PatchSpec parse_patch_spec(const json& input) {
  std::vector<std::string> problems;
  PatchSpec spec;
  if (!input.is_object()) throw UsageError("patch spec must be a JSON object");
  static const std::set<std::string> keys{"name", "params", "grid", "ambient", "tolerances"};
  for (const auto& [key, value] : input.items()) {
    if (!keys.count(key)) problems.push_back("unknown field \"" + key + "\"");
  }
  if (!input.contains("name") || !input["name"].is_string()) {
    problems.push_back("\"name\" must be a string");
  } else {
    spec.name = input["name"].get<std::string>();
    const auto& names = builtin_patch_names();
    if (std::find(names.begin(), names.end(), spec.name) == names.end()) {
      problems.push_back("unknown patch \"" + spec.name + "\"");
    }
  }
  if (input.contains("params")) {
    const json& p = input["params"];
    if (!p.is_object()) {
      problems.push_back("\"params\" must be an object");
    } else {
      for (const auto& [key, value] : p.items()) {
        if (value.is_number()) {
          spec.params[key] = {value.get<double>()};
        } else if (value.is_array() && std::all_of(value.begin(), value.end(), [](const json& x) {
                     return x.is_number();
                   })) {
          spec.params[key] = value.get<std::vector<double>>();
        } else {
          problems.push_back("params." + key + " must be a number or an array of numbers");
        }
      }
    }
  }
  if (input.contains("grid")) {
    const json& g = input["grid"];
    if (!g.is_object()) {
      problems.push_back("\"grid\" must be an object");
    } else {
      for (const auto& [key, value] : g.items()) {
        if (key == "points") {
          if (!value.is_number_integer() || value.get<long long>() < 1 || value.get<long long>() > 64) {
            problems.push_back("grid.points must be an integer in [1, 64]");
          } else {
            spec.grid.points = value.get<int>();
          }
        } else if (key == "h") {
          if (!value.is_number() || !(value.get<double>() > 0.0) || value.get<double>() > 0.5) {
            problems.push_back("grid.h must be a number in (0, 0.5]");
          } else {
            spec.grid.h = value.get<double>();
          }
        } else {
          problems.push_back("unknown field grid." + key);
        }
      }
    }
  }
  if (input.contains("ambient")) {
    if (!input["ambient"].is_string() ||
        (input["ambient"] != "flat" && input["ambient"] != "fubini-study")) {
      problems.push_back("\"ambient\" must be \"flat\" or \"fubini-study\"");
    } else {
      spec.ambient = input["ambient"].get<std::string>();
    }
  }
  if (input.contains("tolerances")) {
    const json& t = input["tolerances"];
    if (!t.is_object()) {
      problems.push_back("\"tolerances\" must be an object");
    } else {
      for (const auto& [key, value] : t.items()) {
        if (!value.is_number() || !(value.get<double>() > 0.0)) {
          problems.push_back("tolerances." + key + " must be a positive number");
        } else if (key == "cayley") {
          spec.tolerances.cayley = value.get<double>();
        } else if (key == "complex_guard") {
          spec.tolerances.complex_guard = value.get<double>();
        } else {
          problems.push_back("unknown field tolerances." + key);
        }
      }
    }
  }
  if (spec.ambient.empty() && !spec.name.empty()) spec.ambient = default_ambient(spec.name);
  if (!problems.empty()) {
    std::string msg = "invalid patch spec:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw UsageError(msg);
  }
  return spec;
}

namespace {

struct PatchCheck {
  std::string name;
  json body;
  bool applicable = true;
  bool ok = true;
};

void record(CommandResult& result, json& checks, PatchCheck check) {
  check.body["status"] = status(check.applicable, check.ok);
  if (check.applicable && !check.ok) result.failures.push_back(check.name);
  checks[check.name] = std::move(check.body);
}

}  // namespace

CommandResult verify_patch(const PatchSpec& spec_in, const VerifyOptions& options) {
  PatchSpec spec = spec_in;
  if (options.ambient) spec.ambient = *options.ambient;
  if (options.points) spec.grid.points = *options.points;
  if (options.step) spec.grid.h = *options.step;
  if (options.cayley_tol) spec.tolerances.cayley = *options.cayley_tol;
  if (spec.grid.points < 1) throw UsageError("--grid must be at least 1");
  if (!(spec.grid.h > 0.0)) throw UsageError("--step must be positive");
  const std::vector<double> phases = phase_grid(options.phases);
  (void)phases;

  std::shared_ptr<const KahlerChart> chart;
  Patch patch = [&] {
    try {
      chart = chart_by_name(spec.ambient, options.chart_steps);
      Patch p = builtin_patch(spec.name, spec.params, chart, spec.grid);
      return Patch(p.name(), [p](const Param4& t) { return p(t); }, p.box(), chart, spec.grid, spec.tolerances);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }();
  const bool flat = spec.ambient == "flat";
  const double h = spec.grid.h;
  const std::vector<Param4> points = patch.sample_points();
  const std::size_t n = points.size();

  struct PointData {
    PointGeometry geometry;
    double mean_curvature = 0.0;
    std::optional<HSymmetryResidual> hsym;
    std::optional<GammaForm> gamma;
    double gauge_gap = 0.0;
  };
  std::vector<PointData> data(n);
  try {
    parallel_for(n, [&](std::size_t k) {
      PointData& d = data[k];
      d.geometry = point_geometry(patch, points[k], true);
      d.mean_curvature = std::sqrt(std::max(0.0, d.geometry.g(d.geometry.mean_curvature, d.geometry.mean_curvature)));
      if (!d.geometry.cayley.is_cayley) return;
      d.hsym = verify_h_symmetry(patch, points[k]);
      if (!d.geometry.totally_real_cayley(patch.tolerances())) return;
      d.gamma = gamma_form(patch, points[k]);
      const GammaForm turned = gamma_form(patch, points[k], 0.7);
      d.gauge_gap = (d.gamma->variant_b - turned.variant_b).cwiseAbs().maxCoeff();
    });
  } catch (const Error& e) {
    if (e.code() == ErrorCode::boundary_stencil || e.code() == ErrorCode::outside_chart ||
        e.code() == ErrorCode::rank_deficient) {
      throw UsageError(std::string("patch cannot be sampled: ") + e.what());
    }
    throw;
  }

  CommandResult result;
  json& r = result.report;
  r["command"] = "verify-patch";
  json params = json::object();
  for (const auto& [key, v] : spec.params) params[key] = v;
  r["patch"] = {{"name", spec.name},
                {"params", params},
                {"ambient", spec.ambient},
                {"grid", {{"points", spec.grid.points}, {"h", h}}},
                {"tolerances", {{"cayley", spec.tolerances.cayley}, {"complex_guard", spec.tolerances.complex_guard}}},
                {"chart_steps", {{"h_metric", options.chart_steps.h_metric}, {"h_curv", options.chart_steps.h_curv}}}};
  r["sample_points"] = n;
  json checks = json::object();

  int cayley_points = 0;
  int totally_real = 0;
  double max_h = 0.0;
  double min_lambda = 1.0;
  double max_lambda = 0.0;
  for (const auto& d : data) {
    max_h = std::max(max_h, d.mean_curvature);
    if (d.geometry.cayley.is_cayley) {
      ++cayley_points;
      min_lambda = std::min(min_lambda, d.geometry.cayley.lambda);
      max_lambda = std::max(max_lambda, d.geometry.cayley.lambda);
    }
    if (d.gamma) ++totally_real;
  }
  const bool pointwise_cayley = cayley_points == static_cast<int>(n);
  r["summary"] = {{"cayley_points", cayley_points},
                  {"totally_real_cayley_points", totally_real},
                  {"pointwise_cayley", pointwise_cayley},
                  {"min_lambda", cayley_points ? json(min_lambda) : json(nullptr)},
                  {"max_lambda", cayley_points ? json(max_lambda) : json(nullptr)},
                  {"max_mean_curvature", max_h}};

  {
    PatchCheck c{"h_symmetry", json::object()};
    double sym = 0.0, trace = 0.0, coclosed = 0.0, asym = 0.0;
    for (const auto& d : data) {
      if (!d.hsym) continue;
      sym = std::max(sym, d.hsym->symmetry);
      trace = std::max(trace, d.hsym->trace);
      coclosed = std::max(coclosed, d.hsym->coclosed);
      asym = std::max(asym, d.hsym->h_asymmetry);
    }
    const double bound = residual_bound(h);
    c.applicable = cayley_points > 0;
    c.ok = sym <= bound && trace <= bound && coclosed <= bound && asym <= 1e-6;
    c.body = {{"points", cayley_points},     {"max_symmetry", sym}, {"max_trace", trace},
              {"max_coclosed", coclosed},     {"max_h_asymmetry", asym}, {"bound", bound},
              {"h_asymmetry_bound", 1e-6}};
    record(result, checks, c);
  }
  {
    PatchCheck c{"gamma", json::object()};
    double gap = 0.0, gauge = 0.0, size = 0.0;
    for (const auto& d : data) {
      if (!d.gamma) continue;
      gap = std::max(gap, (d.gamma->variant_a - d.gamma->variant_b).cwiseAbs().maxCoeff());
      gauge = std::max(gauge, d.gauge_gap);
      size = std::max(size, d.gamma->variant_a.cwiseAbs().maxCoeff());
    }
    c.applicable = totally_real > 0;
    c.ok = gap <= residual_bound(h) && gauge <= 1e-6;
    c.body = {{"points", totally_real}, {"max_variant_gap", gap}, {"max_gauge_change", gauge},
              {"max_abs_gamma", size},  {"bound", residual_bound(h)}, {"gauge_bound", 1e-6}};
    record(result, checks, c);
  }
  {
    PatchCheck c{"theorem_iii", json::object()};
    c.applicable = totally_real > 0;
    if (c.applicable) {
      const TheoremIIIReport t3 = [&] {
        try {
          return verify_theorem_iii(patch, options.refinements);
        } catch (const Error& e) {
          throw UsageError(std::string("theorem III stencil: ") + e.what());
        }
      }();
      json levels = json::array();
      for (const auto& lv : t3.levels) {
        levels.push_back({{"h", lv.h},
                          {"max_residual", lv.max_residual},
                          {"max_rho", lv.max_rho},
                          {"evaluated", lv.evaluated},
                          {"masked", lv.masked}});
      }
      json orders = json::array();
      bool orders_ok = true;
      for (std::size_t l = 0; l < t3.orders.size(); ++l) {
        const bool informative = t3.levels[l + 1].max_residual > order_floor(t3.levels[l + 1].h);
        orders.push_back(informative ? json(t3.orders[l]) : json(nullptr));
        if (flat && informative) orders_ok = orders_ok && t3.orders[l] >= kMinOrder;
      }
      const double bound = flat ? 1e-4 : 1e-3;
      c.ok = orders_ok && t3.final_residual() <= bound && t3.levels.back().evaluated > 0;
      c.body = {{"levels", levels},
                {"orders", orders},
                {"final_residual", t3.final_residual()},
                {"bound", bound},
                {"min_order", kMinOrder},
                {"order_floor", order_floor(t3.levels.back().h)},
                {"orders_checked", flat}};
    }
    record(result, checks, c);
  }
  {
    PatchCheck c{"theorem_i", json::object()};
    c.applicable = flat && pointwise_cayley;
    if (c.applicable) {
      const TheoremIReport t1 = verify_theorem_i(patch, options.phases);
      c.ok = t1.consistent;
      c.body = {{"branch", t1.calibrated ? "calibrated" : "not_calibrated"},
                {"minimal", t1.minimal},
                {"max_mean_curvature", t1.max_mean_curvature},
                {"minimal_tolerance", t1.tolerance},
                {"calibrated_all_phases", t1.calibrated_all_phases},
                {"best_alpha", t1.best_alpha},
                {"best_min_calibration", t1.best_min_calibration},
                {"phases", t1.phases},
                {"min_calibration", t1.min_calibration},
                {"phase_constant", optional_number(t1.phase_constant)},
                {"phase_variation", t1.phase_variation},
                {"totally_real_points", t1.totally_real_points}};
    } else {
      c.body = {{"reason", flat ? "patch is not pointwise Cayley" : "needs the flat ambient"}};
    }
    record(result, checks, c);
  }
  {
    PatchCheck c{"theorem_ii", json::object()};
    c.applicable = spec.ambient == "fubini-study";
    if (c.applicable) {
      const TheoremIIReport t2 = verify_theorem_ii(patch);
      c.ok = t2.branch != TheoremIIBranch::violation;
      c.body = {{"branch", std::string(to_string(t2.branch))},
                {"minimal", t2.minimal},
                {"pointwise_cayley", t2.pointwise_cayley},
                {"max_mean_curvature", t2.max_mean_curvature},
                {"minimal_tolerance", t2.tolerance},
                {"min_lambda", t2.min_lambda},
                {"max_lambda", t2.max_lambda}};
    } else {
      c.body = {{"reason", "needs a Kahler-Einstein ambient with s != 0"}};
    }
    record(result, checks, c);
  }
  {
    PatchCheck c{"l2_invariant", json::object()};
    c.applicable = patch.box().closed() && pointwise_cayley;
    if (c.applicable) {
      const L2Invariant l2 = l2_lambda_invariant(patch);
      const double gap = std::abs(l2.lambda_squared - l2.half_omega_squared);
      c.ok = gap <= 1e-6;
      c.body = {{"lambda_squared", l2.lambda_squared},
                {"half_omega_squared", l2.half_omega_squared},
                {"volume", l2.volume},
                {"gap", gap},
                {"bound", 1e-6}};
    } else {
      c.body = {{"reason", patch.box().closed() ? "patch is not pointwise Cayley" : "patch is not closed"}};
    }
    record(result, checks, c);
  }
  {
    PatchCheck c{"lambda_field", json::object()};
    const LambdaFieldCheck lf = check_lambda_field(patch);
    c.ok = lf.min_density >= -1e-9 && lf.max_density <= 1.0 + 1e-9 && lf.max_mismatch <= 1e-6;
    c.body = {{"min_density", lf.min_density},
              {"max_density", lf.max_density},
              {"max_mismatch", lf.max_mismatch},
              {"mismatch_bound", 1e-6}};
    record(result, checks, c);
  }
  r["checks"] = checks;
  r["pass"] = result.passed();
  r["failures"] = result.failures;

  if (options.csv) {
    std::ostringstream csv;
    csv << "t1,t2,t3,t4,is_cayley,lambda,theta1,theta2,mean_curvature,gamma_a1,gamma_a2,gamma_a3,gamma_a4,"
           "gamma_b1,gamma_b2,gamma_b3,gamma_b4\n";
    for (std::size_t k = 0; k < n; ++k) {
      const auto& d = data[k];
      for (int i = 0; i < 4; ++i) csv << csv_number(points[k][i]) << ',';
      csv << (d.geometry.cayley.is_cayley ? 1 : 0) << ',' << csv_number(d.geometry.cayley.lambda) << ','
          << csv_number(d.geometry.angles.theta1) << ',' << csv_number(d.geometry.angles.theta2) << ','
          << csv_number(d.mean_curvature);
      for (int i = 0; i < 4; ++i) csv << ',' << (d.gamma ? csv_number(d.gamma->variant_a[i]) : "");
      for (int i = 0; i < 4; ++i) csv << ',' << (d.gamma ? csv_number(d.gamma->variant_b[i]) : "");
      csv << '\n';
    }
    result.csv = csv.str();
  }
  return result;
}

// ---------------------------------------------------------------- suite

namespace {

json suite_round_trip(std::uint64_t seed, int n, bool& ok) {
  double angle_err = 0.0, blade_err = 0.0;
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> u01;
    const double t1 = 1e-3 + (kPi / 2 - 1e-3) * u01(rng);
    const double t2 = t1 + (kPi - 2 * t1) * u01(rng);
    const Eigen::Matrix4cd u = haar_unitary(rng);
    Frame4 frame;
    for (int c = 0; c < 4; ++c) frame.col(c) = to_real(u.col(c));
    const OrientedPlane4 plane = plane_from_angles(frame, t1, t2);
    const AngleReport rep = canonical_form(plane);
    angle_err = std::max({angle_err, std::abs(rep.theta1 - t1), std::abs(rep.theta2 - t2)});
    const OrientedPlane4 rebuilt = plane_from_angles(*rep.unitary_basis, rep.theta1, rep.theta2);
    const KForm diff = plane.blade().coordinates() - rebuilt.blade().coordinates();
    blade_err = std::max(blade_err, diff.max_abs());
  }
  ok = angle_err <= 1e-9 && blade_err <= 1e-9;
  return {{"samples", n}, {"max_angle_error", angle_err}, {"max_blade_error", blade_err}, {"bound", 1e-9}};
}

json suite_calibration(std::uint64_t seed, int n, int phases, bool& ok) {
  double worst = -1.0, formula = 0.0;
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const OrientedPlane4 plane = OrientedPlane4::orthonormalized(haar_frame(rng));
    const CalibrationPairing pairing = calibration_pairing(plane);
    const AngleReport angles = kahler_angles(plane);
    const OmegaXi oxi = omega_xi(plane);
    for (int m = 0; m < phases; ++m) {
      const double a = 2.0 * kPi * m / phases;
      worst = std::max(worst, pairing.at(a));
      formula = std::max(formula, std::abs(pairing.at(a) - calibration_value_closed_form(angles, oxi.phase, a)));
    }
  }
  ok = worst <= 1.0 + kCalibrationSlack && formula <= 1e-10;
  return {{"samples", n},
          {"phases", phases},
          {"max_calibration", worst},
          {"max_formula_gap", formula},
          {"formula_bound", 1e-10}};
}

json suite_characterizations(std::uint64_t seed, int n, bool& ok) {
  int disagreements = 0;
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    OrientedPlane4 plane;
    if (i % 2 == 0) {
      plane = OrientedPlane4::orthonormalized(haar_frame(rng));
    } else {
      std::uniform_real_distribution<double> u01;
      const double t = 1e-3 + (kPi / 2 - 2e-3) * u01(rng);
      const Eigen::Matrix4cd u = haar_unitary(rng);
      Frame4 frame;
      for (int c = 0; c < 4; ++c) frame.col(c) = to_real(u.col(c));
      plane = plane_from_angles(frame, t, t);
    }
    const AngleReport angles = kahler_angles(plane);
    const CayleyCheck check = is_cayley(plane, 1e-10);
    const bool by_angles = std::abs(angles.theta1 - angles.theta2) <= 1e-8;
    const bool by_duality = check.self_duality_residual <= 1e-10;
    const bool by_b = check.b_residual <= 1e-9;
    if (by_angles != by_duality || by_duality != by_b) ++disagreements;
  }
  ok = disagreements == 0;
  return {{"samples", n}, {"disagreements", disagreements}};
}

}  // namespace

CommandResult invariant_suite(const SuiteOptions& options) {
  CommandResult result;
  json& r = result.report;
  r["command"] = "invariant-suite";
  r["seed"] = options.seed;
  json checks = json::object();
  auto add = [&](const std::string& name, json body, bool ok) {
    body["status"] = ok ? "pass" : "fail";
    if (!ok) result.failures.push_back(name);
    checks[name] = std::move(body);
  };
  bool ok = false;
  json body = suite_round_trip(derive_seed(options.seed, 1), 1000, ok);
  add("canonical_round_trip", body, ok);
  body = suite_calibration(derive_seed(options.seed, 2), 10000, 16, ok);
  add("calibration", body, ok);
  body = suite_characterizations(derive_seed(options.seed, 3), 1000, ok);
  add("cayley_characterizations", body, ok);

  {
    ComassRun run;
    run.samples = 20;
    run.seed = derive_seed(options.seed, 4);
    const CommandResult c = comass(run);
    add("comass",
        {{"comass", c.report["comass"]}, {"converged_runs", c.report["converged_runs"]}, {"runs", run.samples}},
        c.passed());
  }
  {
    const KahlerChart fs = fubini_study_chart(1.0, 2.0, options.chart_steps);
    const EinsteinReport e1 = einstein_report(fs, 20, derive_seed(options.seed, 5));
    const EinsteinReport e2 = einstein_report(fs, 20, derive_seed(options.seed, 6));
    const bool e_ok = e1.max_deviation <= 1e-5 && e2.max_deviation <= 1e-5 && std::abs(e1.s - e2.s) <= 1e-6;
    add("einstein", {{"s", e1.s}, {"max_deviation", std::max(e1.max_deviation, e2.max_deviation)}, {"bound", 1e-5}},
        e_ok);
  }
  {
    struct Quick {
      const char* name;
      PatchParams params;
    };
    const std::vector<Quick> quick{{"product-torus", {{"warp", {0.3}}}},
                                   {"lagrangian-graph", {}},
                                   {"complex-graph", {}},
                                   {"fs-real-slice", {}},
                                   {"fs-complex-slice", {}},
                                   {"complex-torus", {}}};
    json patches = json::object();
    bool all = true;
    for (const auto& q : quick) {
      PatchSpec spec;
      spec.name = q.name;
      spec.params = q.params;
      spec.ambient = default_ambient(q.name);
      spec.grid = {3, 2e-2};
      VerifyOptions vo;
      vo.chart_steps = options.chart_steps;
      const CommandResult c = verify_patch(spec, vo);
      patches[q.name] = {{"pass", c.passed()}, {"failures", c.failures}};
      all = all && c.passed();
    }
    add("patches", {{"grid_points", 3}, {"h", 2e-2}, {"results", patches}}, all);
  }
  r["checks"] = checks;
  r["pass"] = result.passed();
  r["failures"] = result.failures;
  return result;
}

}  // namespace cayley::cli
