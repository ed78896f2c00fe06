#include "cayley/patches.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cayley/error.hpp"
#include "cayley/hermitian.hpp"
#include "cayley/parallel.hpp"
#include "cayley/random.hpp"

namespace cayley {

namespace {

const Matrix8& J() { return standard_structure().complex_structure(); }


struct Derivatives {
  Vector8 f0;
  Frame4 d1;
  NormalField d2{};
};

Param4 shifted(const Param4& t, int i, double s) {
  Param4 out = t;
  out[i] += s;
  return out;
}

Frame4 first_derivatives(const Patch& patch, const Param4& t, double h) {
  Frame4 d1;
  for (int i = 0; i < 4; ++i) d1.col(i) = (patch(shifted(t, i, h)) - patch(shifted(t, i, -h))) / (2.0 * h);
  return d1;
}

Derivatives derivatives(const Patch& patch, const Param4& t, double h) {
  Derivatives d;
  d.f0 = patch(t);
  std::array<Vector8, 4> plus;
  std::array<Vector8, 4> minus;
  for (int i = 0; i < 4; ++i) {
    plus[i] = patch(shifted(t, i, h));
    minus[i] = patch(shifted(t, i, -h));
    d.d1.col(i) = (plus[i] - minus[i]) / (2.0 * h);
    d.d2[i][i] = (plus[i] - 2.0 * d.f0 + minus[i]) / (h * h);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const Param4 ti = shifted(t, i, h);
      const Param4 tim = shifted(t, i, -h);
      const Vector8 v = (patch(shifted(ti, j, h)) - patch(shifted(ti, j, -h)) - patch(shifted(tim, j, h)) +
                         patch(shifted(tim, j, -h))) /
                        (4.0 * h * h);
      d.d2[i][j] = v;
      d.d2[j][i] = v;
    }
  }
  return d;
}

void fill_metric(PointGeometry& g, const KahlerChart& chart) {
  g.metric = chart.metric_at(g.position);
  const Eigen::SelfAdjointEigenSolver<Matrix8> eig(g.metric);
  const Vector8 ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 0.0)) throw Error(ErrorCode::outside_chart, "ambient metric is not positive definite");
  const Vector8 root = ev.cwiseSqrt();
  g.to_standard = eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
  g.from_standard = eig.eigenvectors() * root.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
}

PointGeometry first_order_geometry(const Patch& patch, const Param4& t, const Vector8& f0, const Frame4& d1) {
  PointGeometry g;
  g.t = t;
  g.position = f0;
  g.tangent = d1;
  fill_metric(g, patch.chart());
  g.induced_metric = d1.transpose() * g.metric * d1;
  g.plane = OrientedPlane4::orthonormalized(g.to_standard * d1);
  g.cayley = is_cayley(g.plane, patch.tolerances().cayley);
  g.angles = kahler_angles(g.plane, patch.tolerances().cayley);
  return g;
}

// Tangential projection in the ambient metric.
Vector8 tangential(const PointGeometry& g, const Vector8& v) {
  const Eigen::Vector4d coeffs = g.induced_metric.ldlt().solve(g.tangent.transpose() * (g.metric * v));
  return g.tangent * coeffs;
}

// Coordinates of the orthonormal tangent frame on d/dt_1..4.
Matrix4 orthonormal_coordinates(const PointGeometry& g) {
  const Frame4 s = g.to_standard * g.tangent;
  return (s.transpose() * s).ldlt().solve(s.transpose() * g.plane.frame());
}

Eigen::Vector4d unit4(const Eigen::Vector4d& v) { return v / v.norm(); }

Vector8 project_out(Vector8 v, std::initializer_list<Vector8> against) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& w : against) v -= w.dot(v) * w;
  }
  return v;
}

// Cayley frame (e1, j e1, e3, j e3) of a plane in standard coordinates,
// seeded by the projections of the columns 0 and 2 of `seed`. On the
// Lagrangian branch j is undefined and the frame is the Gram-Schmidt of all
// four projected seeds.
Frame4 aligned_cayley_frame(const OrientedPlane4& plane, bool lagrangian, const Frame4& seed) {
  const Matrix8 p = plane.projector();
  Frame4 e;
  const Vector8 e1 = (p * seed.col(0)).normalized();
  if (!lagrangian) {
    const Vector8 e2 = project_out(p * (J() * e1), {e1}).normalized();
    const Vector8 e3 = project_out(p * seed.col(2), {e1, e2}).normalized();
    const Vector8 e4 = project_out(p * (J() * e3), {e1, e2, e3}).normalized();
    e << e1, e2, e3, e4;
  } else {
    const Vector8 e2 = project_out(p * seed.col(1), {e1}).normalized();
    const Vector8 e3 = project_out(p * seed.col(2), {e1, e2}).normalized();
    const Vector8 e4 = project_out(p * seed.col(3), {e1, e2, e3}).normalized();
    e << e1, e2, e3, e4;
  }
  if ((plane.frame().transpose() * e).determinant() < 0.0) {
    throw Error(ErrorCode::non_cayley, "aligned Cayley frame is negatively oriented");
  }
  return e;
}

Frame4 gauge_rotated(const Frame4& e, double s) {
  const double c = std::cos(s);
  const double sn = std::sin(s);
  Frame4 out;
  out.col(0) = c * e.col(0) + sn * e.col(2);
  out.col(1) = c * e.col(1) + sn * e.col(3);
  out.col(2) = -sn * e.col(0) + c * e.col(2);
  out.col(3) = -sn * e.col(1) + c * e.col(3);
  return out;
}

// Difference planes of a Lagrangian patch carry a spurious lambda of the
// size of the difference error; below the Cayley tolerance the frame is
// built on the Lagrangian branch, with lambda taken as 0.
bool lagrangian_branch(const PointGeometry& g, const PatchTolerances& tol) { return g.cayley.lambda <= tol.cayley; }

void require_gamma_point(const PointGeometry& g, const PatchTolerances& tol) {
  if (!g.cayley.is_cayley) {
    throw Error(ErrorCode::non_cayley,
                "self-duality residual " + std::to_string(g.cayley.self_duality_residual) + " at patch point");
  }
  if (g.cayley.lambda > 1.0 - tol.complex_guard) {
    throw Error(ErrorCode::near_complex, "lambda = " + std::to_string(g.cayley.lambda) + " at patch point");
  }
}

// Projects a parameter-coordinate covector onto an orthonormal frame given by
// its coordinates and returns the largest component.
double frame_max(const Matrix4& coords, const Eigen::Vector4d& covector) {
  return (coords.transpose() * covector).cwiseAbs().maxCoeff();
}

std::vector<double> sample_axis(const ParameterBox& box, int axis, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double len = box.upper[axis] - box.lower[axis];
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = box.periodic[static_cast<std::size_t>(axis)]
                                           ? box.lower[axis] + i * len / n
                                           : box.lower[axis] + (i + 1) * len / (n + 1);
  }
  return out;
}

}  // namespace

Patch::Patch(std::string name, PatchMap map, ParameterBox box, std::shared_ptr<const KahlerChart> chart,
             PatchGrid grid, PatchTolerances tolerances)
    : name_(std::move(name)),
      map_(std::move(map)),
      box_(box),
      chart_(std::move(chart)),
      grid_(grid),
      tolerances_(tolerances) {
  if (!chart_) throw Error(ErrorCode::invalid_argument, "patch needs a chart");
  if (grid_.points < 1) throw Error(ErrorCode::invalid_argument, "patch grid needs at least one point per axis");
  if (!(grid_.h > 0.0)) throw Error(ErrorCode::step_underflow, "patch step must be positive");
  for (int i = 0; i < 4; ++i) {
    if (!(box_.upper[i] > box_.lower[i])) throw Error(ErrorCode::invalid_argument, "empty parameter box");
  }
}

Patch Patch::with_grid(PatchGrid grid) const { return Patch(name_, map_, box_, chart_, grid, tolerances_); }

std::vector<Param4> Patch::sample_points() const {
  std::array<std::vector<double>, 4> axes;
  for (int a = 0; a < 4; ++a) axes[static_cast<std::size_t>(a)] = sample_axis(box_, a, grid_.points);
  std::vector<Param4> out;
  const int n = grid_.points;
  out.reserve(static_cast<std::size_t>(n) * n * n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          out.emplace_back(axes[0][static_cast<std::size_t>(i)], axes[1][static_cast<std::size_t>(j)],
                           axes[2][static_cast<std::size_t>(k)], axes[3][static_cast<std::size_t>(l)]);
        }
      }
    }
  }
  return out;
}

double Patch::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < 4; ++a) {
    const int cells = box_.periodic[static_cast<std::size_t>(a)] ? grid_.points : grid_.points + 1;
    v *= (box_.upper[a] - box_.lower[a]) / cells;
  }
  return v;
}

void Patch::require_stencil(const Param4& t, double reach) const {
  for (int a = 0; a < 4; ++a) {
    if (box_.periodic[static_cast<std::size_t>(a)]) continue;
    const double slack = 1e-12 * (box_.upper[a] - box_.lower[a]);
    if (t[a] - reach < box_.lower[a] - slack || t[a] + reach > box_.upper[a] + slack) {
      throw Error(ErrorCode::boundary_stencil, "difference stencil leaves the parameter box on axis " +
                                                   std::to_string(a + 1));
    }
  }
}

double PointGeometry::omega(const Vector8& u, const Vector8& v) const { return (J() * u).dot(metric * v); }

bool PointGeometry::totally_real_cayley(const PatchTolerances& tol) const {
  return cayley.is_cayley && cayley.lambda <= 1.0 - tol.complex_guard;
}

PointGeometry point_geometry(const Patch& patch, const Param4& t, bool with_curvature) {
  const double h = patch.grid().h;
  patch.require_stencil(t, h);
  if (!with_curvature) return first_order_geometry(patch, t, patch(t), first_derivatives(patch, t, h));

  const Derivatives d = derivatives(patch, t, h);
  PointGeometry g = first_order_geometry(patch, t, d.f0, d.d1);
  g.has_curvature = true;
  g.christoffel = patch.chart().christoffel_at(g.position);
  const Matrix4 ginv = g.induced_metric.inverse();
  g.mean_curvature.setZero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      g.covariant_hessian[i][j] = d.d2[i][j] + contract(g.christoffel, d.d1.col(i), d.d1.col(j));
      g.h[i][j] = g.covariant_hessian[i][j] - tangential(g, g.covariant_hessian[i][j]);
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) g.mean_curvature += ginv(i, j) * g.h[i][j];
  }
  return g;
}

OrientedPlane4 tangent_plane_at(const Patch& patch, const Param4& t) {
  return point_geometry(patch, t, false).plane;
}

SecondFundamentalForm second_fundamental_form(const Patch& patch, const Param4& t) {
  const PointGeometry g = point_geometry(patch, t, true);
  SecondFundamentalForm out;
  out.h = g.h;
  out.mean_curvature = g.mean_curvature;
  out.mean_curvature_norm = std::sqrt(std::max(0.0, g.g(g.mean_curvature, g.mean_curvature)));
  return out;
}

HSymmetryResidual verify_h_symmetry(const Patch& patch, const Param4& t, int random_triples) {
  const double h = patch.grid().h;
  patch.require_stencil(t, 2.0 * h);
  const PointGeometry g = point_geometry(patch, t, true);
  if (!g.cayley.is_cayley) {
    throw Error(ErrorCode::non_cayley,
                "self-duality residual " + std::to_string(g.cayley.self_duality_residual) + " at patch point");
  }
  const Matrix4 ginv = g.induced_metric.inverse();

  // Tangential connection: D_a d_c = sum_m conn[a](m, c) d_m.
  std::array<Matrix4, 4> conn;
  for (int a = 0; a < 4; ++a) {
    for (int c = 0; c < 4; ++c) {
      const Eigen::Vector4d lowered = g.tangent.transpose() * (g.metric * g.covariant_hessian[a][c]);
      conn[a].col(c) = ginv * lowered;
    }
  }
  Matrix4 omega_n;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) omega_n(a, b) = g.omega(g.tangent.col(a), g.tangent.col(b));
  }

  // d_a of the pulled-back omega, and the nested second derivatives for the
  // symmetry check, from first-order data at t +- h e_a.
  std::array<Matrix4, 4> d_omega;
  HSymmetryResidual out;
  std::array<Frame4, 4> dd;  // dd[a].col(c) = d_a (d_c F)
  for (int a = 0; a < 4; ++a) {
    const Param4 tp = shifted(t, a, h);
    const Param4 tm = shifted(t, a, -h);
    const Frame4 dp = first_derivatives(patch, tp, h);
    const Frame4 dm = first_derivatives(patch, tm, h);
    const Matrix8 wp = patch.chart().kahler_form_at(patch(tp));
    const Matrix8 wm = patch.chart().kahler_form_at(patch(tm));
    d_omega[a] = (dp.transpose() * wp * dp - dm.transpose() * wm * dm) / (2.0 * h);
    dd[a] = (dp - dm) / (2.0 * h);
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Vector8 nab = dd[a].col(b) + contract(g.christoffel, g.tangent.col(a), g.tangent.col(b));
      const Vector8 nba = dd[b].col(a) + contract(g.christoffel, g.tangent.col(b), g.tangent.col(a));
      const Vector8 diff = (nab - tangential(g, nab)) - (nba - tangential(g, nba));
      out.h_asymmetry = std::max(out.h_asymmetry, std::sqrt(std::max(0.0, g.g(diff, diff))));
    }
  }

  // (D_a omega)(d_c, d_b)
  std::array<Matrix4, 4> d_nabla_omega;
  for (int a = 0; a < 4; ++a) {
    d_nabla_omega[a] = d_omega[a] - conn[a].transpose() * omega_n - omega_n * conn[a];
  }

  // R[a](b, c) = g(h_ab, J d_c) - g(h_ac, J d_b) - (D_a omega)(d_c, d_b)
  std::array<Matrix4, 4> r;
  for (int a = 0; a < 4; ++a) {
    Matrix4 hj;
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) hj(b, c) = g.g(g.h[a][b], J() * g.tangent.col(c));
    }
    r[a] = hj - hj.transpose() - d_nabla_omega[a].transpose();
  }
  auto trilinear = [&](const Eigen::Vector4d& x, const Eigen::Vector4d& y, const Eigen::Vector4d& z) {
    double v = 0.0;
    for (int a = 0; a < 4; ++a) v += x[a] * y.dot(r[a] * z);
    return v;
  };

  const Matrix4 on = orthonormal_coordinates(g);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        out.symmetry = std::max(out.symmetry, std::abs(trilinear(on.col(a), on.col(b), on.col(c))));
      }
    }
  }
  Rng rng(derive_seed(0x5eed, static_cast<std::uint64_t>(random_triples)));
  std::normal_distribution<double> normal;
  auto random_unit = [&] {
    Eigen::Vector4d w;
    for (int k = 0; k < 4; ++k) w[k] = normal(rng);
    return on * unit4(w);
  };
  for (int k = 0; k < random_triples; ++k) {
    const Eigen::Vector4d x = random_unit();
    const Eigen::Vector4d y = random_unit();
    const Eigen::Vector4d z = random_unit();
    out.symmetry = std::max(out.symmetry, std::abs(trilinear(x, y, z)));
  }

  // omega(d_a, H) - sum g^{bc} g(h_ab, J d_c)
  Eigen::Vector4d trace_residual;
  Eigen::Vector4d coclosed;
  for (int a = 0; a < 4; ++a) {
    double sum = 0.0;
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) sum += ginv(b, c) * g.g(g.h[a][b], J() * g.tangent.col(c));
    }
    trace_residual[a] = g.omega(g.tangent.col(a), g.mean_curvature) - sum;
  }
  for (int b = 0; b < 4; ++b) {
    double sum = 0.0;
    for (int a = 0; a < 4; ++a) {
      for (int c = 0; c < 4; ++c) sum += ginv(a, c) * d_nabla_omega[a](c, b);
    }
    coclosed[b] = -sum;
  }
  out.trace = frame_max(on, trace_residual);
  out.coclosed = frame_max(on, coclosed);
  return out;
}

Eigen::Vector4d gamma_from_mean_curvature(const PointGeometry& g) {
  const double l = g.cayley.lambda;
  Eigen::Vector4d out;
  for (int i = 0; i < 4; ++i) out[i] = g.omega(g.tangent.col(i), g.mean_curvature) / (1.0 - l * l);
  return out;
}

GammaForm gamma_form(const Patch& patch, const Param4& t, double gauge_angle) {
  const double h = patch.grid().h;
  patch.require_stencil(t, 2.0 * h);
  const PointGeometry g = point_geometry(patch, t, true);
  require_gamma_point(g, patch.tolerances());

  GammaForm out;
  out.lambda = g.cayley.lambda;
  out.variant_a = gamma_from_mean_curvature(g);

  const bool lagrangian = lagrangian_branch(g, patch.tolerances());
  const Frame4 seed_std = gauge_rotated(aligned_cayley_frame(g.plane, lagrangian, g.plane.frame()), gauge_angle);
  const Frame4 seed_ambient = g.from_standard * seed_std;
  const Frame4 u0 = g.from_standard * unitary_from_cayley(seed_std, lagrangian ? 0.0 : g.cayley.lambda);

  auto unitary_at = [&](const Param4& tn) {
    const PointGeometry n = point_geometry(patch, tn, false);
    require_gamma_point(n, patch.tolerances());
    const Frame4 e = aligned_cayley_frame(n.plane, lagrangian, n.to_standard * seed_ambient);
    return Frame4(n.from_standard * unitary_from_cayley(e, lagrangian ? 0.0 : n.cayley.lambda));
  };
  for (int i = 0; i < 4; ++i) {
    const Frame4 du = (unitary_at(shifted(t, i, h)) - unitary_at(shifted(t, i, -h))) / (2.0 * h);
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      const Vector8 nabla = du.col(k) + contract(g.christoffel, g.tangent.col(i), u0.col(k));
      sum += g.g(nabla, J() * u0.col(k));
    }
    out.variant_b[i] = sum;
  }
  return out;
}

PointReport point_report(const Patch& patch, const Param4& t) {
  PointReport r;
  r.geometry = point_geometry(patch, t, true);
  if (r.geometry.totally_real_cayley(patch.tolerances())) r.gamma = gamma_form(patch, t);
  return r;
}

double theorem_iii_residual(const Patch& patch, const Param4& t, double* rho_size) {
  const double h = patch.grid().h;
  patch.require_stencil(t, 2.0 * h);
  const PointGeometry center = point_geometry(patch, t, false);
  require_gamma_point(center, patch.tolerances());
  std::array<Eigen::Vector4d, 4> plus;
  std::array<Eigen::Vector4d, 4> minus;
  for (int i = 0; i < 4; ++i) {
    const PointGeometry p = point_geometry(patch, shifted(t, i, h), true);
    const PointGeometry m = point_geometry(patch, shifted(t, i, -h), true);
    require_gamma_point(p, patch.tolerances());
    require_gamma_point(m, patch.tolerances());
    plus[i] = gamma_from_mean_curvature(p);
    minus[i] = gamma_from_mean_curvature(m);
  }
  const Matrix8 rho = patch.chart().ricci_form_at(center.position);
  const Matrix4 rho_n = center.tangent.transpose() * rho * center.tangent;
  double worst = 0.0;
  double rho_max = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double dgamma = (plus[i][j] - minus[i][j] - plus[j][i] + minus[j][i]) / (2.0 * h);
      worst = std::max(worst, std::abs(dgamma - rho_n(i, j)));
      rho_max = std::max(rho_max, std::abs(rho_n(i, j)));
    }
  }
  if (rho_size) *rho_size = rho_max;
  return worst;
}

double TheoremIIIReport::min_order() const {
  double m = std::numeric_limits<double>::infinity();
  for (double o : orders) m = std::min(m, o);
  return m;
}

TheoremIIIReport verify_theorem_iii(const Patch& patch, int refinements) {
  if (refinements < 0) throw Error(ErrorCode::invalid_argument, "negative refinement count");
  TheoremIIIReport report;
  for (int level = 0; level <= refinements; ++level) {
    const Patch p = patch.with_step(patch.grid().h / std::pow(2.0, level));
    const std::vector<Param4> points = p.sample_points();
    std::vector<double> residual(points.size(), -1.0);
    std::vector<double> rho(points.size(), 0.0);
    parallel_for(points.size(), [&](std::size_t k) {
      try {
        residual[k] = theorem_iii_residual(p, points[k], &rho[k]);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::non_cayley && e.code() != ErrorCode::near_complex) throw;
      }
    });
    TheoremIIILevel lv;
    lv.h = p.grid().h;
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (residual[k] < 0.0) {
        ++lv.masked;
        continue;
      }
      ++lv.evaluated;
      lv.max_residual = std::max(lv.max_residual, residual[k]);
      lv.max_rho = std::max(lv.max_rho, rho[k]);
    }
    report.levels.push_back(lv);
  }
  for (std::size_t l = 0; l + 1 < report.levels.size(); ++l) {
    report.orders.push_back(std::log2(report.levels[l].max_residual / report.levels[l + 1].max_residual));
  }
  return report;
}

double minimal_tolerance(double h) {
  constexpr double kC = 1.0;
  return 5.0 * h * h * kC;
}

namespace {

struct Sampled {
  std::vector<PointGeometry> geometry;
  double max_mean_curvature = 0.0;
};

Sampled sample_geometry(const Patch& patch) {
  const std::vector<Param4> points = patch.sample_points();
  Sampled s;
  s.geometry.resize(points.size());
  parallel_for(points.size(), [&](std::size_t k) { s.geometry[k] = point_geometry(patch, points[k], true); });
  for (const auto& g : s.geometry) {
    s.max_mean_curvature = std::max(s.max_mean_curvature, std::sqrt(std::max(0.0, g.g(g.mean_curvature, g.mean_curvature))));
  }
  return s;
}

}  // namespace

TheoremIReport verify_theorem_i(const Patch& patch, int phases) {
  if (phases < 1) throw Error(ErrorCode::invalid_argument, "need at least one phase");
  const Sampled s = sample_geometry(patch);
  TheoremIReport r;
  r.max_mean_curvature = s.max_mean_curvature;
  r.tolerance = minimal_tolerance(patch.grid().h);
  r.minimal = r.max_mean_curvature <= r.tolerance;

  auto min_over_points = [&](double alpha) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& g : s.geometry) m = std::min(m, calibration_value(g.plane, alpha));
    return m;
  };
  r.best_min_calibration = -std::numeric_limits<double>::infinity();
  r.calibrated_all_phases = true;
  for (int m = 0; m < phases; ++m) {
    const double alpha = 2.0 * std::numbers::pi * m / phases;
    r.phases.push_back(alpha);
    const double v = min_over_points(alpha);
    r.min_calibration.push_back(v);
    if (v > r.best_min_calibration) {
      r.best_min_calibration = v;
      r.best_alpha = alpha;
    }
    r.calibrated_all_phases = r.calibrated_all_phases && v >= 1.0 - 1e-6;
  }

  std::vector<double> alpha_xi;
  for (const auto& g : s.geometry) {
    if (g.angles.classification == PlaneClass::complex || g.angles.classification == PlaneClass::partially_complex) {
      continue;
    }
    try {
      alpha_xi.push_back(omega_xi(g.plane).phase);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::partially_complex) throw;
    }
  }
  r.totally_real_points = static_cast<int>(alpha_xi.size());
  if (!alpha_xi.empty()) {
    double c = 0.0;
    double sn = 0.0;
    for (double a : alpha_xi) {
      c += std::cos(a);
      sn += std::sin(a);
    }
    const double mean = std::atan2(sn, c);
    r.phase_constant = mean;
    for (double a : alpha_xi) r.phase_variation = std::max(r.phase_variation, std::abs(wrap_angle(a - mean)));
    const double v = min_over_points(mean);
    if (v > r.best_min_calibration) {
      r.best_min_calibration = v;
      r.best_alpha = wrap_angle(mean);
    }
  }
  r.calibrated = r.best_min_calibration >= 1.0 - 1e-6;
  r.consistent = r.minimal == r.calibrated;
  return r;
}

std::string_view to_string(TheoremIIBranch b) {
  switch (b) {
    case TheoremIIBranch::complex:
      return "complex";
    case TheoremIIBranch::lagrangian:
      return "lagrangian";
    case TheoremIIBranch::violation:
      return "violation";
    case TheoremIIBranch::precondition_failed:
      return "precondition_failed";
  }
  return "unknown";
}

TheoremIIReport verify_theorem_ii(const Patch& patch) {
  const Sampled s = sample_geometry(patch);
  TheoremIIReport r;
  r.max_mean_curvature = s.max_mean_curvature;
  r.tolerance = minimal_tolerance(patch.grid().h);
  r.minimal = r.max_mean_curvature <= r.tolerance;
  r.pointwise_cayley = true;
  for (const auto& g : s.geometry) {
    r.pointwise_cayley = r.pointwise_cayley && g.cayley.is_cayley;
    r.min_lambda = std::min(r.min_lambda, g.cayley.lambda);
    r.max_lambda = std::max(r.max_lambda, g.cayley.lambda);
  }
  const double guard = patch.tolerances().complex_guard;
  if (!r.minimal || !r.pointwise_cayley) {
    r.branch = TheoremIIBranch::precondition_failed;
  } else if (r.min_lambda >= 1.0 - guard) {
    r.branch = TheoremIIBranch::complex;
  } else if (r.max_lambda <= guard) {
    r.branch = TheoremIIBranch::lagrangian;
  } else {
    r.branch = TheoremIIBranch::violation;
  }
  return r;
}

L2Invariant l2_lambda_invariant(const Patch& patch) {
  if (!patch.box().closed()) throw Error(ErrorCode::non_periodic, "the invariant needs a patch periodic in every parameter");
  const std::vector<Param4> points = patch.sample_points();
  std::vector<PointGeometry> geo(points.size());
  parallel_for(points.size(), [&](std::size_t k) { geo[k] = point_geometry(patch, points[k], false); });
  const double cell = patch.cell_volume();
  L2Invariant out;
  for (const auto& g : geo) {
    if (!g.cayley.is_cayley) throw Error(ErrorCode::non_cayley, "patch is not Cayley at every sample point");
    const double dvol = std::sqrt(g.induced_metric.determinant()) * cell;
    Matrix4 w;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) w(a, b) = g.omega(g.tangent.col(a), g.tangent.col(b));
    }
    out.lambda_squared += g.cayley.lambda * g.cayley.lambda * dvol;
    out.half_omega_squared += pfaffian(w) * cell;
    out.volume += dvol;
  }
  return out;
}

LambdaFieldCheck check_lambda_field(const Patch& patch) {
  const std::vector<Param4> points = patch.sample_points();
  std::vector<PointGeometry> geo(points.size());
  parallel_for(points.size(), [&](std::size_t k) { geo[k] = point_geometry(patch, points[k], false); });
  LambdaFieldCheck out;
  out.min_density = std::numeric_limits<double>::infinity();
  out.max_density = -std::numeric_limits<double>::infinity();
  const Matrix8 w = standard_structure().kahler_matrix();
  for (const auto& g : geo) {
    const double density = pfaffian(restrict_2form(w, g.plane));
    out.min_density = std::min(out.min_density, density);
    out.max_density = std::max(out.max_density, density);
    if (g.cayley.is_cayley) {
      out.max_mismatch = std::max(out.max_mismatch, std::abs(density - g.cayley.lambda * g.cayley.lambda));
    }
  }
  return out;
}

}  // namespace cayley
