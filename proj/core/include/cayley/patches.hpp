#pragma once

// Parametrized 4-dimensional submanifold patches in a Kahler chart, and the
// finite-difference machinery that checks the Cayley identities on them.
//
// A patch is a map F from a parameter box in R^4 into chart coordinates.
// Reports are computed at the sample points of a regular grid over the box;
// every derivative is a central difference of F with the grid step h, so all
// residuals are O(h^2).
//
// Tangent planes are analysed in "standard" coordinates: the ambient metric
// G at the point is J-invariant, and v -> G^{1/2} v is a complex-linear
// isometry onto flat Hermitian R^8.

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cayley/ambient.hpp"
#include "cayley/multilinear.hpp"
#include "cayley/planes.hpp"

namespace cayley {

using Param4 = Eigen::Vector4d;
using PatchMap = std::function<Vector8(const Param4&)>;

struct ParameterBox {
  Param4 lower = Param4::Zero();
  Param4 upper = Param4::Ones();
  std::array<bool, 4> periodic{false, false, false, false};

  bool closed() const { return periodic[0] && periodic[1] && periodic[2] && periodic[3]; }
};

struct PatchGrid {
  int points = 9;    // sample points per axis
  double h = 1e-2;   // difference step
};

struct PatchTolerances {
  double cayley = 1e-3;         // self-duality residual allowed on difference planes
  double complex_guard = 1e-4;  // gamma is masked where lambda > 1 - complex_guard
};

class Patch {
 public:
  Patch(std::string name, PatchMap map, ParameterBox box, std::shared_ptr<const KahlerChart> chart,
        PatchGrid grid = {}, PatchTolerances tolerances = {});

  const std::string& name() const { return name_; }
  const ParameterBox& box() const { return box_; }
  const PatchGrid& grid() const { return grid_; }
  const KahlerChart& chart() const { return *chart_; }
  std::shared_ptr<const KahlerChart> chart_ptr() const { return chart_; }
  const PatchTolerances& tolerances() const { return tolerances_; }

  Patch with_grid(PatchGrid grid) const;
  Patch with_step(double h) const { return with_grid({grid_.points, h}); }

  Vector8 operator()(const Param4& t) const { return map_(t); }

  // Periodic axes: lower + i L / n. Other axes: lower + (i + 1) L / (n + 1).
  std::vector<Param4> sample_points() const;
  // Quadrature weight of a sample point (periodic rectangle rule).
  double cell_volume() const;

  // Throws Error{boundary_stencil} if t +- reach leaves a non-periodic box.
  void require_stencil(const Param4& t, double reach) const;

 private:
  std::string name_;
  PatchMap map_;
  ParameterBox box_;
  std::shared_ptr<const KahlerChart> chart_;
  PatchGrid grid_;
  PatchTolerances tolerances_;
};

using NormalField = std::array<std::array<Vector8, 4>, 4>;

struct PointGeometry {
  Param4 t = Param4::Zero();
  Vector8 position = Vector8::Zero();
  Frame4 tangent = Frame4::Zero();              // dF/dt_i
  Matrix4 induced_metric = Matrix4::Identity();  // g(dF_i, dF_j)
  Matrix8 metric = Matrix8::Identity();
  Matrix8 to_standard = Matrix8::Identity();    // G^{1/2}
  Matrix8 from_standard = Matrix8::Identity();  // G^{-1/2}
  OrientedPlane4 plane;                         // tangent plane, standard coordinates
  CayleyCheck cayley;
  AngleReport angles;

  // Filled when curvature is requested.
  bool has_curvature = false;
  Christoffel christoffel{};
  NormalField covariant_hessian{};  // nabla_{d_i} d_j F
  NormalField h{};                  // second fundamental form h(d_i, d_j)
  Vector8 mean_curvature = Vector8::Zero();

  double g(const Vector8& u, const Vector8& v) const { return u.dot(metric * v); }
  double omega(const Vector8& u, const Vector8& v) const;
  // Orthonormal tangent frame in ambient coordinates (orientation of dF).
  Frame4 orthonormal_tangent() const { return from_standard * plane.frame(); }
  bool totally_real_cayley(const PatchTolerances& tol) const;
};

PointGeometry point_geometry(const Patch& patch, const Param4& t, bool with_curvature = true);

// Gram-Schmidt of dF/dt_1..4 in the ambient metric, in standard coordinates.
// Throws Error{rank_deficient}.
OrientedPlane4 tangent_plane_at(const Patch& patch, const Param4& t);

struct SecondFundamentalForm {
  NormalField h{};
  Vector8 mean_curvature = Vector8::Zero();
  double mean_curvature_norm = 0.0;  // in the ambient metric
};

SecondFundamentalForm second_fundamental_form(const Patch& patch, const Param4& t);

struct HSymmetryResidual {
  double symmetry = 0.0;  // |g(h(X,Y),JZ) - g(h(X,Z),JY) - (D_X omega)(Z,Y)|
  double trace = 0.0;     // |omega(X,H) - sum_i g(h(X,e_i), J e_i)|
  double coclosed = 0.0;  // |d*(omega|N)|
  double h_asymmetry = 0.0;  // max |h(X,Y) - h(Y,X)|
};

// Throws Error{non_cayley} when the tangent plane is not Cayley.
HSymmetryResidual verify_h_symmetry(const Patch& patch, const Param4& t, int random_triples = 16);

struct GammaForm {
  Eigen::Vector4d variant_a = Eigen::Vector4d::Zero();  // omega(X, H) / (1 - lambda^2)
  Eigen::Vector4d variant_b = Eigen::Vector4d::Zero();  // sum_k g(nabla_X u_k, J u_k)
  double lambda = 0.0;
};

// Components on d/dt_1..4. gauge_angle rotates the seed Cayley frame
// (e1, e3) -> (cos s e1 + sin s e3, -sin s e1 + cos s e3) before the unitary
// frame is built. Throws Error{non_cayley} or Error{near_complex}.
GammaForm gamma_form(const Patch& patch, const Param4& t, double gauge_angle = 0.0);
Eigen::Vector4d gamma_from_mean_curvature(const PointGeometry& geometry);

struct PointReport {
  PointGeometry geometry;
  std::optional<GammaForm> gamma;
};

PointReport point_report(const Patch& patch, const Param4& t);

struct TheoremIIILevel {
  double h = 0.0;
  double max_residual = 0.0;  // max |d gamma - rho|N| over unmasked points
  double max_rho = 0.0;       // max |rho|N|, for reference
  int evaluated = 0;
  int masked = 0;
};

struct TheoremIIIReport {
  std::vector<TheoremIIILevel> levels;
  std::vector<double> orders;  // log2(r_l / r_{l+1})
  double final_residual() const { return levels.empty() ? 0.0 : levels.back().max_residual; }
  double min_order() const;
};

// dgamma (variant A) against the pullback of rho at every sample point, at
// h, h/2, ..., h/2^refinements.
TheoremIIIReport verify_theorem_iii(const Patch& patch, int refinements = 2);

// Residual |dgamma - rho|N| at one point (max over i < j).
double theorem_iii_residual(const Patch& patch, const Param4& t, double* rho_size = nullptr);

// Mean-curvature bound that counts as minimal at step h: 5 h^2 C with C = 1.
double minimal_tolerance(double h);

struct TheoremIReport {
  double max_mean_curvature = 0.0;
  double tolerance = 0.0;
  bool minimal = false;
  std::vector<double> phases;
  std::vector<double> min_calibration;  // per phase, min over points of Phi_alpha
  double best_alpha = 0.0;
  double best_min_calibration = 0.0;    // max over candidate phases of the min over points
  bool calibrated = false;              // best_min_calibration >= 1 - 1e-6
  bool calibrated_all_phases = false;
  int totally_real_points = 0;
  std::optional<double> phase_constant;  // circular mean of alpha_xi
  double phase_variation = 0.0;          // max |alpha_xi - mean|
  bool consistent = false;               // minimal <=> calibrated
};

TheoremIReport verify_theorem_i(const Patch& patch, int phases = 16);

enum class TheoremIIBranch { complex, lagrangian, violation, precondition_failed };
std::string_view to_string(TheoremIIBranch b);

struct TheoremIIReport {
  double max_mean_curvature = 0.0;
  double tolerance = 0.0;
  bool minimal = false;
  bool pointwise_cayley = false;
  double min_lambda = 1.0;
  double max_lambda = 0.0;
  TheoremIIBranch branch = TheoremIIBranch::precondition_failed;
};

TheoremIIReport verify_theorem_ii(const Patch& patch);

struct L2Invariant {
  double lambda_squared = 0.0;     // integral of lambda^2 dvol
  double half_omega_squared = 0.0;  // (1/2) integral of omega^2
  double volume = 0.0;
};

// Throws Error{non_periodic} unless every axis is periodic, Error{non_cayley}
// if some sample point is not Cayley.
L2Invariant l2_lambda_invariant(const Patch& patch);

struct LambdaFieldCheck {
  double min_density = 0.0;  // omega^2|N / (2 vol)
  double max_density = 0.0;
  double max_mismatch = 0.0;  // |density - lambda^2| at Cayley points
};

LambdaFieldCheck check_lambda_field(const Patch& patch);

}  // namespace cayley
