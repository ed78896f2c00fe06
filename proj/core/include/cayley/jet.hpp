#pragma once

// Second-order forward-mode automatic differentiation in 8 real variables.
// Kahler potentials are written against Jet2 so that the metric (a second
// derivative of the potential) is exact.

#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace cayley {

struct Jet2 {
  using Gradient = Eigen::Matrix<double, 8, 1>;
  using Hessian = Eigen::Matrix<double, 8, 8>;

  double value = 0.0;
  Gradient gradient = Gradient::Zero();
  Hessian hessian = Hessian::Zero();

  Jet2() = default;
  Jet2(double v) : value(v) {}  // NOLINT: constants promote implicitly

  static Jet2 variable(int i, double v) {
    Jet2 out(v);
    out.gradient[i] = 1.0;
    return out;
  }
};

using JetPoint = std::array<Jet2, 8>;

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value + b.value;
  r.gradient = a.gradient + b.gradient;
  r.hessian = a.hessian + b.hessian;
  return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value - b.value;
  r.gradient = a.gradient - b.gradient;
  r.hessian = a.hessian - b.hessian;
  return r;
}

inline Jet2 operator-(const Jet2& a) { return Jet2(0.0) - a; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value * b.value;
  r.gradient = a.value * b.gradient + b.value * a.gradient;
  r.hessian = a.value * b.hessian + b.value * a.hessian + a.gradient * b.gradient.transpose() +
              b.gradient * a.gradient.transpose();
  return r;
}

// Applies a scalar function given its first two derivatives at a.value.
inline Jet2 chain(const Jet2& a, double f, double df, double d2f) {
  Jet2 r;
  r.value = f;
  r.gradient = df * a.gradient;
  r.hessian = df * a.hessian + d2f * a.gradient * a.gradient.transpose();
  return r;
}

inline Jet2 reciprocal(const Jet2& a) {
  const double v = a.value;
  return chain(a, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

inline Jet2 log(const Jet2& a) {
  const double v = a.value;
  return chain(a, std::log(v), 1.0 / v, -1.0 / (v * v));
}

inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value);
  return chain(a, e, e, e);
}

inline Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.value);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.value));
}

}  // namespace cayley
