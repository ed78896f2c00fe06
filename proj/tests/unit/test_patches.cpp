#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "cayley/builtin_patches.hpp"
#include "cayley/error.hpp"
#include "cayley/hermitian.hpp"
#include "cayley/patches.hpp"
#include "generators.hpp"

using namespace cayley;
using namespace cayley::testing;

namespace {

const Matrix8& J() { return standard_structure().complex_structure(); }

std::shared_ptr<const KahlerChart> flat() { return chart_by_name("flat"); }

PatchGrid grid(int points, double h) { return PatchGrid{points, h}; }

const Param4 kInterior(0.11, -0.17, 0.23, 0.05);
const Param4 kTorusPoint(0.4, 1.3, 2.9, 5.1);

template <class F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& err) {
    return err.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::invalid_argument;
}

Patch product_torus(std::vector<double> radii, double warp, PatchGrid g) {
  return builtin_patch("product-torus", {{"radii", radii}, {"warp", {warp}}}, flat(), g);
}

// A plane patch with Kahler angles (pi/6, pi/3): not Cayley.
Patch non_cayley_patch() {
  Rng rng(5);
  const Frame4 a = plane_with_angles(rng, kPi / 6.0, kPi / 3.0).frame();
  return Patch("tilted", [a](const Param4& t) { return Vector8(a * t); }, ParameterBox{}, flat(), grid(3, 1e-2));
}

}  // namespace

TEST(PatchGeometry, AffinePlaneIsConstant) {
  Rng rng(1);
  Frame4 a;
  for (int k = 0; k < 4; ++k) a.col(k) = random_vector(rng);
  const Patch p("affine", [a](const Param4& t) { return Vector8(a * t); }, ParameterBox{}, flat());
  const OrientedPlane4 expected = OrientedPlane4::orthonormalized(a);
  for (const Param4& t : {Param4(0.2, 0.3, 0.4, 0.5), Param4(0.7, 0.1, 0.9, 0.6)}) {
    const OrientedPlane4 q = tangent_plane_at(p, t);
    EXPECT_LE((q.projector() - expected.projector()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_GT((q.frame().transpose() * expected.frame()).determinant(), 0.0);
    const SecondFundamentalForm s = second_fundamental_form(p, t);
    EXPECT_LE(s.mean_curvature_norm, 1e-8);
  }
}

TEST(PatchGeometry, ComplexGraphHasComplexTangentPlanes) {
  const Patch p = builtin_patch("complex-graph", {}, flat(), grid(3, 1e-2));
  for (const Param4& t : p.sample_points()) {
    const CayleyCheck c = is_cayley(tangent_plane_at(p, t), 1e-6);
    EXPECT_TRUE(c.is_cayley);
    EXPECT_NEAR(c.lambda, 1.0, 1e-6);
  }
}

TEST(PatchGeometry, ProductTorusIsLagrangian) {
  const Patch p = product_torus({1.0, 2.0, 0.5, 1.5}, 0.0, grid(3, 1e-2));
  for (const Param4& t : p.sample_points()) {
    const PointGeometry g = point_geometry(p, t, false);
    // Oracle: omega(d phi_j, d phi_k) from the exact tangent i r_k e^{i phi_k}.
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(g.omega(g.tangent.col(j), g.tangent.col(k)), 0.0, 1e-12);
    }
    EXPECT_TRUE(g.cayley.is_cayley);
    EXPECT_LE(g.cayley.lambda, 1e-8);
  }
}

TEST(PatchGeometry, RankDeficiency) {
  const Patch p("degenerate", [](const Param4& t) { Vector8 v = Vector8::Zero(); v.head<3>() = t.head<3>(); return v; },
                ParameterBox{}, flat());
  EXPECT_EQ(error_of([&] { tangent_plane_at(p, Param4::Constant(0.5)); }), ErrorCode::rank_deficient);
}

TEST(PatchGeometry, BoundaryStencil) {
  const Patch p = builtin_patch("complex-graph", {}, flat(), grid(3, 1e-2));
  EXPECT_EQ(error_of([&] { second_fundamental_form(p, Param4(0.499, 0.0, 0.0, 0.0)); }), ErrorCode::boundary_stencil);
  EXPECT_NO_THROW(second_fundamental_form(p, Param4(0.45, 0.0, 0.0, 0.0)));
}

TEST(PatchGeometry, SamplePoints) {
  const Patch p = builtin_patch("complex-graph", {}, flat(), grid(3, 1e-2));
  const auto pts = p.sample_points();
  ASSERT_EQ(pts.size(), 81u);
  EXPECT_NEAR(pts.front()[0], -0.25, 1e-15);
  EXPECT_NEAR(pts.back()[3], 0.25, 1e-15);
  const Patch t = product_torus({1.0}, 0.0, grid(4, 1e-2));
  EXPECT_NEAR(t.sample_points()[1][3], kPi / 2.0, 1e-15);
  EXPECT_NEAR(t.cell_volume(), std::pow(kPi / 2.0, 4), 1e-12);
}

TEST(SecondFundamentalForm, UnitTorusMeanCurvature) {
  const Patch p = product_torus({1.0}, 0.0, grid(3, 1e-2));
  const SecondFundamentalForm s = second_fundamental_form(p, kTorusPoint);
  EXPECT_NEAR(s.mean_curvature_norm, 2.0, 1e-4);
}

TEST(SecondFundamentalForm, TorusRadii) {
  const std::vector<double> r{1.0, 2.0, 0.5, 1.5};
  const Patch p = product_torus(r, 0.0, grid(3, 5e-3));
  double oracle = 0.0;
  for (double x : r) oracle += 1.0 / (x * x);
  EXPECT_NEAR(second_fundamental_form(p, kTorusPoint).mean_curvature_norm, std::sqrt(oracle), 1e-4);
}

TEST(SecondFundamentalForm, IsSymmetricAndNormal) {
  for (const char* name : {"complex-graph", "lagrangian-graph"}) {
    const Patch p = builtin_patch(name, {}, flat(), grid(3, 1e-2));
    const PointGeometry g = point_geometry(p, kInterior);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        EXPECT_LE((g.h[i][j] - g.h[j][i]).norm(), 1e-6);
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(g.g(g.h[i][j], g.tangent.col(k)), 0.0, 1e-10);
      }
    }
  }
}

TEST(SecondFundamentalForm, TraceIdentityOnComplexGraph) {
  const Patch p = builtin_patch("complex-graph", {}, flat(), grid(3, 1e-2));
  const PointGeometry g = point_geometry(p, kInterior);
  const Frame4 e = g.orthonormal_tangent();
  const Matrix4 coords = g.tangent.colPivHouseholderQr().solve(e);
  for (int a = 0; a < 4; ++a) {
    const Vector8 x = g.tangent.col(a);
    Vector8 hxe[4];
    double rhs = 0.0;
    for (int i = 0; i < 4; ++i) {
      hxe[i] = Vector8::Zero();
      for (int k = 0; k < 4; ++k) hxe[i] += coords(k, i) * g.h[a][k];
      rhs += g.g(hxe[i], J() * e.col(i));
    }
    EXPECT_NEAR(g.omega(x, g.mean_curvature), rhs, 1e-5);
  }
}

TEST(HSymmetry, AffineCayleyPlane) {
  const Patch p = builtin_patch("affine", {{"lambda", {0.5}}, {"phase", {0.3}}}, flat(), grid(3, 1e-2));
  const HSymmetryResidual r = verify_h_symmetry(p, Param4(0.1, 0.0, -0.1, 0.2));
  EXPECT_LE(r.symmetry, 1e-9);
  EXPECT_LE(r.trace, 1e-9);
  EXPECT_LE(r.coclosed, 1e-9);
}

TEST(HSymmetry, LagrangianTorusConverges) {
  for (auto [h, bound] : {std::pair{1e-2, 1e-4}, std::pair{5e-3, 2.5e-5}}) {
    const Patch p = product_torus({1.0}, 0.3, grid(3, h));
    for (const Param4& t : p.sample_points()) {
      const HSymmetryResidual r = verify_h_symmetry(p, t);
      EXPECT_LE(r.symmetry, bound) << h;
      EXPECT_LE(r.trace, bound) << h;
      EXPECT_LE(r.coclosed, bound) << h;
      EXPECT_LE(r.h_asymmetry, 1e-6);
    }
  }
}

TEST(HSymmetry, ComplexGraph) {
  for (auto [h, bound] : {std::pair{1e-2, 1e-4}, std::pair{5e-3, 2.5e-5}}) {
    const Patch p = builtin_patch("complex-graph", {}, flat(), grid(3, h));
    for (const Param4& t : p.sample_points()) {
      const HSymmetryResidual r = verify_h_symmetry(p, t);
      EXPECT_LE(r.symmetry, bound) << h;
      EXPECT_LE(r.trace, bound) << h;
      EXPECT_LE(r.coclosed, bound) << h;
    }
  }
}

TEST(HSymmetry, RejectsNonCayleyPoint) {
  EXPECT_EQ(error_of([] { verify_h_symmetry(non_cayley_patch(), Param4::Constant(0.5)); }), ErrorCode::non_cayley);
}

TEST(Gamma, MinimalPatchHasZeroGamma) {
  const Patch p = builtin_patch("affine", {{"lambda", {0.0}}}, flat(), grid(3, 1e-2));
  const GammaForm g = gamma_form(p, Param4(0.1, 0.2, -0.1, 0.0));
  EXPECT_EQ(g.variant_a.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE(g.variant_b.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Gamma, AffineCayleyPlaneIsFlat) {
  const Patch p = builtin_patch("affine", {{"lambda", {0.6}}}, flat(), grid(3, 1e-2));
  const GammaForm g = gamma_form(p, Param4(0.1, 0.2, -0.1, 0.0));
  EXPECT_NEAR(g.lambda, 0.6, 1e-9);
  EXPECT_LE(g.variant_a.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LE(g.variant_b.cwiseAbs().maxCoeff(), 1e-9);
}

// gamma = i_H omega / (lambda^2 - 1) = omega(., H) / (1 - lambda^2). On the
// torus H = -sum (1/r_k) e^{i phi_k} and d phi_k = i r_k e^{i phi_k}, so
// omega(d phi_k, H) = 1 for every radius.
TEST(Gamma, ProductTorusClosedForm) {
  const Patch p = product_torus({1.0, 2.0, 0.5, 1.5}, 0.0, grid(3, 5e-3));
  const GammaForm g = gamma_form(p, kTorusPoint);
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(g.variant_a[k], 1.0, 1e-4);
    EXPECT_NEAR(g.variant_b[k], 1.0, 1e-4);
  }
}

TEST(Gamma, VariantsAgreeOnLagrangianGraph) {
  const Patch p = builtin_patch("lagrangian-graph", {}, flat(), grid(3, 1e-2));
  for (const Param4& t : p.sample_points()) {
    const GammaForm g = gamma_form(p, t);
    EXPECT_LE((g.variant_a - g.variant_b).cwiseAbs().maxCoeff(), 1e-4);
  }
}

TEST(Gamma, VariantGapIsSecondOrder) {
  const Patch p = product_torus({1.0}, 0.3, grid(3, 2e-2));
  const GammaForm g1 = gamma_form(p, kTorusPoint);
  const GammaForm g2 = gamma_form(p.with_step(1e-2), kTorusPoint);
  const double r1 = (g1.variant_a - g1.variant_b).cwiseAbs().maxCoeff();
  const double r2 = (g2.variant_a - g2.variant_b).cwiseAbs().maxCoeff();
  EXPECT_GT(std::log2(r1 / r2), 1.8);
}

TEST(Gamma, GaugeIndependence) {
  for (const Patch& p : {product_torus({1.0}, 0.3, grid(3, 1e-2)),
                         builtin_patch("lagrangian-graph", {}, flat(), grid(3, 1e-2)),
                         builtin_patch("hamiltonian-torus", {}, flat(), grid(3, 1e-2))}) {
    const Param4 t = p.sample_points()[17];
    const GammaForm base = gamma_form(p, t);
    for (double s : {0.4, 1.3, -2.0}) {
      EXPECT_LE((gamma_form(p, t, s).variant_b - base.variant_b).cwiseAbs().maxCoeff(), 1e-6) << p.name() << " " << s;
    }
  }
}

TEST(Gamma, MatchesMeanCurvatureHelper) {
  const Patch p = builtin_patch("lagrangian-graph", {}, flat(), grid(3, 1e-2));
  const GammaForm g = gamma_form(p, kInterior);
  EXPECT_LE((gamma_from_mean_curvature(point_geometry(p, kInterior)) - g.variant_a).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Gamma, ComplexPointsAreGuarded) {
  const Patch p = builtin_patch("complex-graph", {}, flat(), grid(3, 1e-2));
  EXPECT_EQ(error_of([&] { gamma_form(p, kInterior); }), ErrorCode::near_complex);
  const PointReport r = point_report(p, kInterior);
  EXPECT_FALSE(r.gamma.has_value());
  EXPECT_EQ(error_of([] { gamma_form(non_cayley_patch(), Param4::Constant(0.5)); }), ErrorCode::non_cayley);
}

TEST(TheoremIII, UniformTorus) {
  const Patch p = product_torus({1.0}, 0.0, grid(3, 1e-2));
  for (const Param4& t : p.sample_points()) EXPECT_LE(theorem_iii_residual(p, t), 1e-4);
}

TEST(TheoremIII, LagrangianGraphIsSecondOrder) {
  const Patch p = builtin_patch("lagrangian-graph", {}, flat(), grid(3, 2e-2));
  const TheoremIIIReport r = verify_theorem_iii(p, 2);
  ASSERT_EQ(r.levels.size(), 3u);
  ASSERT_EQ(r.orders.size(), 2u);
  EXPECT_GE(r.min_order(), 1.8);
  EXPECT_LE(r.final_residual(), 1e-4);
  EXPECT_EQ(r.levels.back().masked, 0);
  EXPECT_LE(r.levels.back().max_rho, 1e-6);
}

TEST(TheoremIII, FubiniStudyRealSlice) {
  const Patch p = builtin_patch("fs-real-slice", {}, nullptr, grid(3, 1e-2));
  const TheoremIIIReport r = verify_theorem_iii(p, 0);
  EXPECT_LE(r.final_residual(), 1e-3);
  // rho|N = s omega|N vanishes on the Lagrangian slice; checked through the
  // chart's Kahler form independently of the rho pipeline.
  for (const Param4& t : p.sample_points()) {
    const PointGeometry g = point_geometry(p, t, false);
    EXPECT_LE((g.tangent.transpose() * p.chart().kahler_form_at(g.position) * g.tangent).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_LE(r.levels.back().max_rho, 1e-3);
}

TEST(TheoremIII, ComplexPointsAreMasked) {
  const Patch p = builtin_patch("complex-graph", {}, flat(), grid(2, 1e-2));
  const TheoremIIIReport r = verify_theorem_iii(p, 0);
  EXPECT_EQ(r.levels.front().evaluated, 0);
  EXPECT_EQ(r.levels.front().masked, 16);
}

TEST(TheoremI, ComplexGraphIsCalibratedForAllPhases) {
  const Patch p = builtin_patch("complex-graph", {}, flat(), grid(3, 1e-2));
  const TheoremIReport r = verify_theorem_i(p, 16);
  EXPECT_TRUE(r.minimal);
  EXPECT_TRUE(r.calibrated_all_phases);
  EXPECT_TRUE(r.consistent);
  for (double v : r.min_calibration) EXPECT_GE(v, 1.0 - 1e-6);
  EXPECT_LE(r.max_mean_curvature, minimal_tolerance(1e-2));
}

TEST(TheoremI, SpecialLagrangianPlane) {
  const Patch p = builtin_patch("affine", {{"lambda", {0.0}}}, flat(), grid(3, 1e-2));
  const TheoremIReport r = verify_theorem_i(p, 16);
  EXPECT_TRUE(r.minimal);
  EXPECT_TRUE(r.calibrated);
  EXPECT_NEAR(r.best_alpha, 0.0, 1e-12);
  ASSERT_TRUE(r.phase_constant.has_value());
  EXPECT_NEAR(*r.phase_constant, 0.0, 1e-9);
  EXPECT_LE(r.phase_variation, 1e-6);
}

TEST(TheoremI, RotatedSpecialLagrangianPhase) {
  const Patch p = builtin_patch("affine", {{"lambda", {0.0}}, {"phase", {1.0}}}, flat(), grid(2, 1e-2));
  const TheoremIReport r = verify_theorem_i(p, 16);
  ASSERT_TRUE(r.phase_constant.has_value());
  EXPECT_LE(r.phase_variation, 1e-9);
  for (const Param4& t : p.sample_points()) {
    EXPECT_NEAR(calibration_value(tangent_plane_at(p, t), *r.phase_constant), 1.0, 1e-9);
  }
}

TEST(TheoremI, NonMinimalTorus) {
  const Patch p = product_torus({1.0}, 0.3, grid(3, 1e-2));
  const TheoremIReport r = verify_theorem_i(p, 16);
  EXPECT_FALSE(r.minimal);
  EXPECT_FALSE(r.calibrated);
  EXPECT_LE(r.best_min_calibration, 0.9);
  EXPECT_GT(r.phase_variation, 0.1);
  EXPECT_TRUE(r.consistent);
}

TEST(TheoremII, ComplexSlice) {
  const Patch p = builtin_patch("fs-complex-slice", {}, nullptr, grid(3, 1e-2));
  const TheoremIIReport r = verify_theorem_ii(p);
  EXPECT_EQ(r.branch, TheoremIIBranch::complex);
  EXPECT_GE(r.min_lambda, 1.0 - 1e-4);
}

TEST(TheoremII, RealSlice) {
  const Patch p = builtin_patch("fs-real-slice", {}, nullptr, grid(3, 1e-2));
  const TheoremIIReport r = verify_theorem_ii(p);
  EXPECT_EQ(r.branch, TheoremIIBranch::lagrangian);
  EXPECT_LE(r.max_lambda, 1e-4);
  EXPECT_LE(r.max_mean_curvature, r.tolerance);
}

TEST(TheoremII, NonMinimalLagrangianFailsPrecondition) {
  const Patch p = builtin_patch("product-torus", {{"radii", {0.3}}}, chart_by_name("fubini-study"), grid(2, 1e-2));
  const TheoremIIReport r = verify_theorem_ii(p);
  EXPECT_TRUE(r.pointwise_cayley);
  EXPECT_FALSE(r.minimal);
  EXPECT_EQ(r.branch, TheoremIIBranch::precondition_failed);
}

TEST(L2Invariant, LagrangianTorus) {
  const L2Invariant r = l2_lambda_invariant(product_torus({1.0}, 0.0, grid(4, 1e-2)));
  EXPECT_LE(std::abs(r.lambda_squared), 1e-8);
  EXPECT_LE(std::abs(r.half_omega_squared), 1e-8);
  // Difference tangents of a circle are shortened by sin(h)/h.
  EXPECT_NEAR(r.volume, std::pow(2.0 * kPi * std::sin(1e-2) / 1e-2, 4), 1e-8);
}

TEST(L2Invariant, ComplexTorus) {
  const L2Invariant r = l2_lambda_invariant(builtin_patch("complex-torus", {}, flat(), grid(3, 1e-2)));
  EXPECT_NEAR(r.volume, 1.0, 1e-12);
  EXPECT_NEAR(r.lambda_squared, 1.0, 1e-6);
  EXPECT_NEAR(r.half_omega_squared, 1.0, 1e-6);
}

TEST(L2Invariant, HamiltonianTorus) {
  const L2Invariant r = l2_lambda_invariant(builtin_patch("hamiltonian-torus", {}, flat(), grid(4, 1e-2)));
  EXPECT_LE(std::abs(r.lambda_squared - r.half_omega_squared), 1e-4);
  EXPECT_LE(std::abs(r.lambda_squared), 1e-4);
}

TEST(L2Invariant, Errors) {
  EXPECT_EQ(error_of([] { l2_lambda_invariant(builtin_patch("complex-graph", {}, flat(), grid(2, 1e-2))); }),
            ErrorCode::non_periodic);
  const Patch tilted_torus("tilted-torus",
                           [](const Param4& t) {
                             Rng rng(5);
                             static const Frame4 a = plane_with_angles(rng, kPi / 6.0, kPi / 3.0).frame();
                             return Vector8(a * t);
                           },
                           ParameterBox{Param4::Zero(), Param4::Ones(), {true, true, true, true}}, flat(), grid(2, 1e-2));
  EXPECT_EQ(error_of([&] { l2_lambda_invariant(tilted_torus); }), ErrorCode::non_cayley);
}

TEST(LambdaField, DensityMatchesLambdaSquared) {
  for (const Patch& p : {product_torus({1.0}, 0.3, grid(3, 1e-2)),
                         builtin_patch("complex-graph", {}, flat(), grid(3, 1e-2)),
                         builtin_patch("affine", {{"lambda", {0.4}}}, flat(), grid(3, 1e-2)),
                         builtin_patch("fs-complex-slice", {}, nullptr, grid(3, 1e-2))}) {
    const LambdaFieldCheck c = check_lambda_field(p);
    EXPECT_GE(c.min_density, -1e-9) << p.name();
    EXPECT_LE(c.max_density, 1.0 + 1e-9) << p.name();
    EXPECT_LE(c.max_mismatch, 1e-6) << p.name();
  }
}

TEST(BuiltinPatches, Parameters) {
  EXPECT_EQ(builtin_patch_names().size(), 8u);
  EXPECT_EQ(default_ambient("fs-real-slice"), "fubini-study");
  EXPECT_EQ(default_ambient("product-torus"), "flat");
  EXPECT_EQ(error_of([] { builtin_patch("nope"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(error_of([] { builtin_patch("product-torus", {{"bogus", {1.0}}}); }), ErrorCode::invalid_argument);
  EXPECT_EQ(error_of([] { builtin_patch("product-torus", {{"warp", {1.0}}}); }), ErrorCode::invalid_argument);
  EXPECT_EQ(error_of([] { builtin_patch("affine", {{"lambda", {2.0}}}); }), ErrorCode::invalid_argument);
  EXPECT_EQ(error_of([] { chart_by_name("hyperbolic"); }), ErrorCode::invalid_argument);
  EXPECT_EQ(error_of([] { builtin_patch("complex-graph", {}, nullptr, PatchGrid{3, 0.0}); }), ErrorCode::step_underflow);
}
