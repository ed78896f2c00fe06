#pragma once

// The flat Hermitian structure on R^8 = C^4 in coordinates
// (x1, y1, ..., x4, y4), with J x_k = y_k, g the identity and the Kahler
// form omega(X, Y) = g(JX, Y) = sum_k dx_k ^ dy_k.

#include <complex>
#include <cstdint>

#include "cayley/multilinear.hpp"

namespace cayley {

Matrix8 standard_complex_structure();

class HermitianStructure {
 public:
  HermitianStructure();

  const Matrix8& complex_structure() const { return j_; }
  const KForm& kahler_form() const { return omega_; }
  const Matrix8& kahler_matrix() const { return omega_matrix_; }

  Vector8 apply_j(const Vector8& v) const { return j_ * v; }
  double metric(const Vector8& u, const Vector8& v) const { return u.dot(v); }
  double omega(const Vector8& u, const Vector8& v) const { return (j_ * u).dot(v); }

 private:
  Matrix8 j_;
  KForm omega_;
  Matrix8 omega_matrix_;
};

const HermitianStructure& standard_structure();

// omega^k as a 2k-form.
KForm kahler_power(int k);

// A complex-valued form stored as (Re, Im).
struct ComplexForm {
  KForm re;
  KForm im;

  int degree() const { return re.degree(); }
  ComplexForm conj() const { return {re, im * -1.0}; }
  ComplexForm rotate(double alpha) const;  // e^{i alpha} * this
};

ComplexForm wedge(const ComplexForm& a, const ComplexForm& b);

// Omega_alpha = e^{i alpha} dz1 ^ dz2 ^ dz3 ^ dz4.
ComplexForm holomorphic_volume(double alpha = 0.0);

// Omega_0(v1, v2, v3, v4) = det_C [z(v1) z(v2) z(v3) z(v4)].
std::complex<double> holomorphic_volume_value(const Frame4& vectors);

class CayleyCalibration {
 public:
  explicit CayleyCalibration(double alpha);

  double alpha() const { return alpha_; }
  // Re(e^{i alpha} Omega_0) + omega^2 / 2
  const KForm& form() const { return phi_; }
  double operator()(const Frame4& frame) const { return phi_.evaluate(frame); }

 private:
  double alpha_;
  KForm phi_;
};

CayleyCalibration cayley_calibration(double alpha);

struct ComassOptions {
  int n_samples = 64;
  int refine_steps = 500;
  std::uint64_t seed = 0;
};

struct AscentResult {
  double value = 0.0;
  Frame4 frame = Frame4::Zero();
  int steps = 0;
  double gradient_norm = 0.0;
};

// Euclidean gradient of frame -> form(frame) for a 4-form.
Frame4 form_gradient(const KForm& form, const Frame4& frame);

// Projected gradient ascent of a 4-form on the oriented Grassmannian, with
// Armijo backtracking and the polar retraction.
AscentResult ascend(const KForm& form, const Frame4& start, int max_steps);

// Lower bound on the comass: best value over Haar-random starts, each refined
// by ascend(). Deterministic for a given seed.
double comass(const KForm& form, const ComassOptions& options = {});

}  // namespace cayley
