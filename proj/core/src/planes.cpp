#include "cayley/planes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cayley/error.hpp"
#include "cayley/hermitian.hpp"

namespace cayley {

std::string_view to_string(PlaneClass c) {
  switch (c) {
    case PlaneClass::complex: return "complex";
    case PlaneClass::lagrangian: return "lagrangian";
    case PlaneClass::cayley_totally_real: return "cayley_totally_real";
    case PlaneClass::totally_real_non_cayley: return "totally_real_non_cayley";
    case PlaneClass::partially_complex: return "partially_complex";
  }
  return "unknown";
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

namespace {

const Matrix8& J() { return standard_structure().complex_structure(); }

Matrix4 restricted_omega(const OrientedPlane4& plane) {
  return restrict_2form(standard_structure().kahler_matrix(), plane);
}

struct Spectrum {
  double cos1 = 0.0;  // sigma_1 >= 0
  double cos2 = 0.0;  // sign(Pf) sigma_2
  double sin1 = 1.0;
  double sin2 = 1.0;
  double sigma_gap = 0.0;
};

Spectrum spectrum(const OrientedPlane4& plane, const Matrix4& a) {
  const Eigen::JacobiSVD<Matrix4> svd_a(a);
  const auto s = svd_a.singularValues();
  const Frame4& f = plane.frame();
  const Frame4 jf = J() * f;
  const Frame4 normal = jf - f * (f.transpose() * jf);
  const Eigen::JacobiSVD<Frame4> svd_n(normal);
  const auto n = svd_n.singularValues();

  Spectrum out;
  const double sigma1 = 0.5 * (s[0] + s[1]);
  const double sigma2 = 0.5 * (s[2] + s[3]);
  out.cos1 = sigma1;
  out.cos2 = pfaffian(a) < 0.0 ? -sigma2 : sigma2;
  out.sin1 = 0.5 * (n[2] + n[3]);
  out.sin2 = 0.5 * (n[0] + n[1]);
  out.sigma_gap = sigma1 - sigma2;
  return out;
}

Matrix4 b_from_omega(const Matrix4& a) { return a.transpose(); }

CayleyCheck cayley_check(const Matrix4& a, const Spectrum& sp, double tol) {
  CayleyCheck out;
  out.self_duality_residual = (hodge_star_plane(a) - a).norm();
  out.is_cayley = out.self_duality_residual <= tol;
  const Matrix4 b = b_from_omega(a);
  const Matrix4 b2 = b * b;
  const double mu2 = std::clamp(-b2.trace() / 4.0, 0.0, 1.0);
  out.b_residual = (b2 + mu2 * Matrix4::Identity()).norm();
  out.lambda = std::clamp(0.5 * (sp.cos1 + sp.cos2), 0.0, 1.0);
  return out;
}

AngleReport report_from(const Spectrum& sp, const CayleyCheck& check) {
  AngleReport r;
  r.theta1 = std::atan2(sp.sin1, sp.cos1);
  r.theta2 = std::atan2(sp.sin2, sp.cos2);
  r.degenerate_tie = sp.sigma_gap < 1e-12;
  const bool flat1 = sp.sin1 < kDegenerateSine;
  const bool flat2 = sp.sin2 < kDegenerateSine;
  if (check.is_cayley) r.lambda = check.lambda;
  if (flat1 && flat2) {
    r.classification = PlaneClass::complex;
  } else if (flat1 || flat2) {
    r.classification = PlaneClass::partially_complex;
  } else if (check.is_cayley) {
    r.classification = sp.cos1 <= kCayleyTol ? PlaneClass::lagrangian : PlaneClass::cayley_totally_real;
  } else {
    r.classification = PlaneClass::totally_real_non_cayley;
  }
  return r;
}

Eigen::Vector4d unit(const Eigen::Vector4d& v) { return v / v.norm(); }

Eigen::Vector4d orthogonalize(Eigen::Vector4d v, std::initializer_list<Eigen::Vector4d> against) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& w : against) v -= w.dot(v) * w;
  }
  return v;
}

// A vector of norm 1 orthogonal to every vector in `span` (R^8).
Vector8 complement_vector(const std::vector<Vector8>& span) {
  Vector8 best = Vector8::Zero();
  double best_norm = -1.0;
  for (int k = 0; k < 8; ++k) {
    Vector8 v = Vector8::Unit(k);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& w : span) v -= w.dot(v) * w;
    }
    const double n = v.norm();
    if (n > best_norm) {
      best_norm = n;
      best = v / n;
    }
  }
  return best;
}

}  // namespace

Matrix4 b_operator(const OrientedPlane4& plane) {
  const Frame4& f = plane.frame();
  return f.transpose() * J() * f;
}

AngleReport kahler_angles(const OrientedPlane4& plane, double cayley_tol) {
  const Matrix4 a = restricted_omega(plane);
  const Spectrum sp = spectrum(plane, a);
  return report_from(sp, cayley_check(a, sp, cayley_tol));
}

CayleyCheck is_cayley(const OrientedPlane4& plane, double tol) {
  const Matrix4 a = restricted_omega(plane);
  return cayley_check(a, spectrum(plane, a), tol);
}

AngleReport canonical_form(const OrientedPlane4& plane, double cayley_tol) {
  const Matrix4 a = restricted_omega(plane);
  const Spectrum sp = spectrum(plane, a);
  AngleReport report = report_from(sp, cayley_check(a, sp, cayley_tol));

  // Oriented orthonormal frame E of the plane (in plane coordinates) with
  // A = a e^12 + b e^34.
  Matrix4 e = Matrix4::Identity();
  double a12 = 0.0;
  double b34 = 0.0;
  if (sp.cos1 > 1e-14) {
    const Eigen::SelfAdjointEigenSolver<Matrix4> eig(a.transpose() * a);
    const Matrix4 vecs = eig.eigenvectors();
    const Eigen::Vector4d e1 = vecs.col(3);
    const Eigen::Vector4d e2 = unit(orthogonalize(a.transpose() * e1, {e1}));
    // Complement of span(e1, e2): best two of the remaining eigenvectors.
    Eigen::Vector4d e3 = orthogonalize(vecs.col(0), {e1, e2});
    if (e3.norm() < 0.5) e3 = orthogonalize(vecs.col(1), {e1, e2});
    e3 = unit(e3);
    Eigen::Vector4d e4 = orthogonalize(a.transpose() * e3, {e1, e2, e3});
    if (e4.norm() < 1e-12) {
      for (int k = 0; k < 4; ++k) {
        e4 = orthogonalize(Eigen::Vector4d::Unit(k), {e1, e2, e3});
        if (e4.norm() > 0.5) break;
      }
    }
    e4 = unit(e4);
    e << e1, e2, e3, e4;
    if (e.determinant() < 0) e.col(3) *= -1.0;
    a12 = e.col(0).dot(a * e.col(1));
    b34 = e.col(2).dot(a * e.col(3));
  }
  const Frame4 f = plane.frame() * e;

  Frame4 u;
  u.col(0) = f.col(0);
  u.col(2) = f.col(2);
  const Vector8 r2 = f.col(1) - a12 * (J() * f.col(0));
  const Vector8 r4 = f.col(3) - b34 * (J() * f.col(2));
  report.degenerate_factor = {r2.norm() < kDegenerateSine, r4.norm() < kDegenerateSine};
  if (!report.degenerate_factor[0]) u.col(1) = r2 / r2.norm();
  if (!report.degenerate_factor[1]) u.col(3) = r4 / r4.norm();

  std::vector<Vector8> span{u.col(0), J() * u.col(0), u.col(2), J() * u.col(2)};
  if (!report.degenerate_factor[0]) {
    span.push_back(u.col(1));
    span.push_back(J() * u.col(1));
  }
  if (!report.degenerate_factor[1]) {
    span.push_back(u.col(3));
    span.push_back(J() * u.col(3));
  }
  for (int k : {1, 3}) {
    if (!report.degenerate_factor[k / 2]) continue;
    u.col(k) = complement_vector(span);
    span.push_back(u.col(k));
    span.push_back(J() * u.col(k));
  }
  report.unitary_basis = u;
  return report;
}

OrientedPlane4 plane_from_angles(const Frame4& u, double theta1, double theta2) {
  Frame4 f;
  f.col(0) = u.col(0);
  f.col(1) = std::cos(theta1) * (J() * u.col(0)) + std::sin(theta1) * u.col(1);
  f.col(2) = u.col(2);
  f.col(3) = std::cos(theta2) * (J() * u.col(2)) + std::sin(theta2) * u.col(3);
  return OrientedPlane4::from_frame(f, 1e-9);
}

Frame4 cayley_basis(const OrientedPlane4& plane, double tol) {
  const CayleyCheck check = is_cayley(plane, tol);
  if (!check.is_cayley) {
    throw Error(ErrorCode::non_cayley,
                "self-duality residual " + std::to_string(check.self_duality_residual) + " exceeds tolerance");
  }
  if (check.lambda <= tol) return plane.frame();
  const Matrix4 j = b_operator(plane) / check.lambda;
  Eigen::Vector4d e1 = Eigen::Vector4d::Unit(0);
  Eigen::Vector4d e2 = unit(orthogonalize(j * e1, {e1}));
  Eigen::Vector4d e3 = Eigen::Vector4d::Unit(2);
  e3 = orthogonalize(e3, {e1, e2});
  if (e3.norm() < 0.5) e3 = orthogonalize(Eigen::Vector4d::Unit(3), {e1, e2});
  e3 = unit(e3);
  Eigen::Vector4d e4 = unit(orthogonalize(j * e3, {e1, e2, e3}));
  Matrix4 e;
  e << e1, e2, e3, e4;
  if (e.determinant() < 0) {
    // j is compatible with the orientation on every Cayley plane; a negative
    // frame means the input was not self-dual after all.
    throw Error(ErrorCode::non_cayley, "j-frame is negatively oriented");
  }
  return plane.frame() * e;
}

Frame4 unitary_from_cayley(const Frame4& e, double lambda) {
  if (lambda >= 1.0 - kNearComplex) {
    throw Error(ErrorCode::near_complex, "lambda = " + std::to_string(lambda) + " too close to 1");
  }
  const double s = std::sqrt(1.0 - lambda * lambda);
  Frame4 u;
  u.col(0) = e.col(0);
  u.col(1) = (e.col(1) - lambda * (J() * e.col(0))) / s;
  u.col(2) = e.col(2);
  u.col(3) = (e.col(3) - lambda * (J() * e.col(2))) / s;
  return u;
}

OmegaXi omega_xi(const OrientedPlane4& plane) {
  const AngleReport report = canonical_form(plane);
  if (std::sin(report.theta1) < kDegenerateSine || std::sin(report.theta2) < kDegenerateSine) {
    throw Error(ErrorCode::partially_complex, "Omega_xi needs a totally real plane");
  }
  OmegaXi out;
  out.phase = wrap_angle(-std::arg(holomorphic_volume_value(*report.unitary_basis)));
  const std::complex<double> on_plane =
      std::polar(1.0, out.phase) * holomorphic_volume_value(plane.frame());
  out.value = on_plane.real();
  return out;
}

CalibrationPairing calibration_pairing(const OrientedPlane4& plane) {
  static const ComplexForm omega0 = holomorphic_volume(0.0);
  static const KForm half_omega2 = kahler_power(2) * 0.5;
  const KForm coords = plane.blade().coordinates();
  return {omega0.re.pair(coords), omega0.im.pair(coords), half_omega2.pair(coords)};
}

double CalibrationPairing::at(double alpha) const {
  return std::cos(alpha) * re - std::sin(alpha) * im + half_omega2;
}

double calibration_value(const OrientedPlane4& plane, double alpha) { return calibration_pairing(plane).at(alpha); }

double calibration_value_closed_form(const AngleReport& angles, double alpha_xi, double alpha) {
  return std::cos(alpha - alpha_xi) * std::sin(angles.theta1) * std::sin(angles.theta2) +
         std::cos(angles.theta1) * std::cos(angles.theta2);
}

}  // namespace cayley
