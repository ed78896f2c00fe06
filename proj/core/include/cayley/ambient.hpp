#pragma once

// Kahler geometry on a coordinate chart of C^4 defined by a Kahler potential.
//
// Conventions: holomorphic coordinates z_k = x_k + i y_k, J the standard
// constant complex structure, omega = i dd^c-type form i d d-bar K, so that the
// potential |z|^2 / 2 gives the Euclidean metric and omega = sum dx ^ dy.
// The Ricci form is rho = -i d d-bar log det(g_{j k-bar}); with this sign the
// Fubini-Study chart has rho = s omega with s > 0.

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include "cayley/jet.hpp"
#include "cayley/multilinear.hpp"

namespace cayley {

using Potential = std::function<Jet2(const JetPoint&)>;

struct ChartSteps {
  double h_metric = 1e-4;  // step for derivatives of the metric
  double h_curv = 1e-3;    // step for the Hessian of log det g
};

// Christoffel symbols: gamma[k](i, j) = Gamma^k_{ij}.
using Christoffel = std::array<Matrix8, 8>;

class KahlerChart {
 public:
  KahlerChart(std::string name, Potential potential, double radius = std::numeric_limits<double>::infinity(),
              ChartSteps steps = {});

  const std::string& name() const { return name_; }
  double radius() const { return radius_; }
  const ChartSteps& steps() const { return steps_; }
  KahlerChart with_steps(ChartSteps steps) const;

  bool contains(const Vector8& p) const { return p.norm() < radius_; }

  double potential(const Vector8& p) const;
  Matrix8 metric_at(const Vector8& p) const;
  // W(a, b) = omega(e_a, e_b) = g(J e_a, e_b)
  Matrix8 kahler_form_at(const Vector8& p) const;
  Christoffel christoffel_at(const Vector8& p) const;
  Matrix8 ricci_form_at(const Vector8& p) const;

 private:
  void require_inside(const Vector8& p, double margin) const;

  std::string name_;
  Potential potential_;
  double radius_;
  ChartSteps steps_;
};

// Hermitian part of a real Hessian: (H + J^T H J) / 2. Applied to the Hessian
// of a potential this is the Kahler metric.
Matrix8 hermitian_metric_from_hessian(const Matrix8& hessian);
// i d d-bar f as an antisymmetric matrix, from the real Hessian of f.
Matrix8 kahler_form_from_hessian(const Matrix8& hessian);

// Gamma(X, u)^k = sum Gamma^k_{ij} X^i u^j
Vector8 contract(const Christoffel& gamma, const Vector8& x, const Vector8& u);

KahlerChart flat_chart(ChartSteps steps = {});
// Potential (c / 2) log(1 + |z|^2) on |z| < radius; metric_at(0) = c I.
KahlerChart fubini_study_chart(double c = 1.0, double radius = 2.0, ChartSteps steps = {});

// nabla_X u = du + Gamma(X, u), where du is the ordinary derivative of u
// along X.
Vector8 covariant_derivative(const KahlerChart& chart, const Vector8& p, const Vector8& x, const Vector8& u,
                             const Vector8& du);
// Same with du from central differences of the field along X at step h.
Vector8 covariant_derivative(const KahlerChart& chart, const Vector8& p, const Vector8& x,
                             const std::function<Vector8(const Vector8&)>& field, double h);

struct EinsteinReport {
  double s = 0.0;              // rho(x1, y1) / omega(x1, y1) at the origin
  double max_deviation = 0.0;  // max ||rho - s omega||_F / ||omega||_F
  int points = 0;
};

// Samples points uniformly in the ball of radius sample_radius.
EinsteinReport einstein_report(const KahlerChart& chart, int n_points, std::uint64_t seed,
                               double sample_radius = 1.5);

// Antisymmetrized central-difference exterior derivative of omega at p:
// max |d omega (e_i, e_j, e_k)|.
double kahler_closedness_residual(const KahlerChart& chart, const Vector8& p, double h);

}  // namespace cayley
