#pragma once

// Oriented 4-planes in Hermitian R^8: the operator B = pi o J|_plane, Kahler
// angles, the canonical unitary form, Cayley detection and bases, the
// adapted (4,0)-form Omega_xi, and Cayley calibration values.

#include <array>
#include <optional>
#include <string_view>

#include "cayley/multilinear.hpp"

namespace cayley {

inline constexpr double kDegenerateSine = 1e-8;
inline constexpr double kNearComplex = 1e-8;
inline constexpr double kCayleyTol = 1e-9;

enum class PlaneClass {
  complex,
  lagrangian,
  cayley_totally_real,
  totally_real_non_cayley,
  partially_complex,
};

std::string_view to_string(PlaneClass c);

struct AngleReport {
  double theta1 = 0.0;
  double theta2 = 0.0;
  std::optional<double> lambda;
  PlaneClass classification = PlaneClass::totally_real_non_cayley;
  // u_1..u_4 of the canonical form, when requested.
  std::optional<Frame4> unitary_basis;
  // u_2 (resp. u_4) was chosen arbitrarily because sin(theta_1) (resp.
  // sin(theta_2)) vanished.
  std::array<bool, 2> degenerate_factor{false, false};
  // The two singular values of omega|xi coincide; the canonical frame is one
  // of many.
  bool degenerate_tie = false;

  bool degenerate_complex_factor() const { return degenerate_factor[0] || degenerate_factor[1]; }
};

// B(i, j) = g(J f_j, f_i) in the plane's frame.
Matrix4 b_operator(const OrientedPlane4& plane);

// Angles only: cos(theta1) = s1, cos(theta2) = sign(Pf) s2 from the singular
// values s1 >= s2 of omega|xi; sines come from the normal part of J xi so the
// angles stay accurate near 0 and pi/2.
AngleReport kahler_angles(const OrientedPlane4& plane, double cayley_tol = kCayleyTol);

// Angles plus a unitary basis u with
//   xi = u1 ^ (cos t1 J u1 + sin t1 u2) ^ u3 ^ (cos t2 J u3 + sin t2 u4).
AngleReport canonical_form(const OrientedPlane4& plane, double cayley_tol = kCayleyTol);

// Builds the plane of the canonical form from a unitary basis.
OrientedPlane4 plane_from_angles(const Frame4& unitary, double theta1, double theta2);

struct CayleyCheck {
  bool is_cayley = false;
  double lambda = 0.0;                 // meaningful when is_cayley
  double self_duality_residual = 0.0;  // ||*A - A||_F, A = omega|xi
  double b_residual = 0.0;             // min over mu of ||B^2 + mu^2 I||_F
};

CayleyCheck is_cayley(const OrientedPlane4& plane, double tol = kCayleyTol);

// Positive orthonormal frame (e1, j e1, e3, j e3) with j = B / lambda, so that
// omega|xi = lambda (e^12 + e^34). Returns the input frame when lambda = 0.
// Throws Error{non_cayley}.
Frame4 cayley_basis(const OrientedPlane4& plane, double tol = kCayleyTol);

// u1 = e1, u3 = e3, u2 = (e2 - lambda J e1)/sqrt(1 - lambda^2), likewise u4.
// Throws Error{near_complex} for lambda >= 1 - 1e-8.
Frame4 unitary_from_cayley(const Frame4& cayley_frame, double lambda);

struct OmegaXi {
  double phase = 0.0;  // alpha_xi with Omega_{alpha_xi}(u1, u2, u3, u4) = 1
  double value = 0.0;  // Omega_xi(xi) = sin t1 sin t2
};

// Throws Error{partially_complex} if some sin(theta_i) < 1e-8.
OmegaXi omega_xi(const OrientedPlane4& plane);

// Phi_alpha(xi) by exterior evaluation.
double calibration_value(const OrientedPlane4& plane, double alpha);

// Phi_alpha(xi) = cos(alpha) re - sin(alpha) im + half_omega2, from one
// Plucker evaluation.
struct CalibrationPairing {
  double re = 0.0;           // Re Omega_0(xi)
  double im = 0.0;           // Im Omega_0(xi)
  double half_omega2 = 0.0;  // omega^2(xi) / 2

  double at(double alpha) const;
};

CalibrationPairing calibration_pairing(const OrientedPlane4& plane);

// cos(alpha - alpha_xi) sin t1 sin t2 + cos t1 cos t2.
double calibration_value_closed_form(const AngleReport& angles, double alpha_xi, double alpha);

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace cayley
