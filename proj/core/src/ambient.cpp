#include "cayley/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cayley/error.hpp"
#include "cayley/hermitian.hpp"
#include "cayley/random.hpp"

namespace cayley {

namespace {

const Matrix8& J() { return standard_structure().complex_structure(); }

void check_step(double h, double floor, const char* what) {
  if (!(h >= floor) || !(h <= 0.5)) {
    throw Error(ErrorCode::step_underflow, std::string(what) + " = " + std::to_string(h) + " outside [" +
                                               std::to_string(floor) + ", 0.5]");
  }
}

}  // namespace

KahlerChart::KahlerChart(std::string name, Potential potential, double radius, ChartSteps steps)
    : name_(std::move(name)), potential_(std::move(potential)), radius_(radius), steps_(steps) {
  check_step(steps_.h_metric, 1e-8, "h_metric");
  check_step(steps_.h_curv, 1e-6, "h_curv");
}

KahlerChart KahlerChart::with_steps(ChartSteps steps) const { return KahlerChart(name_, potential_, radius_, steps); }

void KahlerChart::require_inside(const Vector8& p, double margin) const {
  if (!p.allFinite() || p.norm() + margin >= radius_) {
    throw Error(ErrorCode::outside_chart, "point with |z| = " + std::to_string(p.norm()) + " outside chart '" +
                                              name_ + "' of radius " + std::to_string(radius_));
  }
}

double KahlerChart::potential(const Vector8& p) const {
  require_inside(p, 0.0);
  JetPoint z;
  for (int i = 0; i < 8; ++i) z[i] = Jet2(p[i]);
  return potential_(z).value;
}

Matrix8 KahlerChart::metric_at(const Vector8& p) const {
  require_inside(p, 0.0);
  JetPoint z;
  for (int i = 0; i < 8; ++i) z[i] = Jet2::variable(i, p[i]);
  return hermitian_metric_from_hessian(potential_(z).hessian);
}

Matrix8 KahlerChart::kahler_form_at(const Vector8& p) const { return J().transpose() * metric_at(p); }

Christoffel KahlerChart::christoffel_at(const Vector8& p) const {
  const double h = steps_.h_metric;
  require_inside(p, h);
  std::array<Matrix8, 8> dg;
  for (int l = 0; l < 8; ++l) {
    const Vector8 step = h * Vector8::Unit(l);
    dg[l] = (metric_at(p + step) - metric_at(p - step)) / (2.0 * h);
  }
  const Matrix8 ginv = metric_at(p).inverse();
  Christoffel gamma;
  // lowered[l](i, j) = (d_i g_jl + d_j g_il - d_l g_ij) / 2
  std::array<Matrix8, 8> lowered;
  for (int l = 0; l < 8; ++l) {
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) lowered[l](i, j) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
    }
  }
  for (int k = 0; k < 8; ++k) {
    gamma[k].setZero();
    for (int l = 0; l < 8; ++l) gamma[k] += ginv(k, l) * lowered[l];
  }
  return gamma;
}

Matrix8 KahlerChart::ricci_form_at(const Vector8& p) const {
  const double h = steps_.h_curv;
  require_inside(p, 2.0 * h);
  auto f = [&](const Vector8& q) { return 0.5 * std::log(metric_at(q).determinant()); };
  const double f0 = f(p);
  Matrix8 hess;
  for (int i = 0; i < 8; ++i) {
    const Vector8 ei = h * Vector8::Unit(i);
    hess(i, i) = (f(p + ei) - 2.0 * f0 + f(p - ei)) / (h * h);
    for (int j = i + 1; j < 8; ++j) {
      const Vector8 ej = h * Vector8::Unit(j);
      const double v = (f(p + ei + ej) - f(p + ei - ej) - f(p - ei + ej) + f(p - ei - ej)) / (4.0 * h * h);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return -kahler_form_from_hessian(hess);
}

Matrix8 hermitian_metric_from_hessian(const Matrix8& hessian) {
  return 0.5 * (hessian + J().transpose() * hessian * J());
}

Matrix8 kahler_form_from_hessian(const Matrix8& hessian) {
  return J().transpose() * hermitian_metric_from_hessian(hessian);
}

Vector8 contract(const Christoffel& gamma, const Vector8& x, const Vector8& u) {
  Vector8 out;
  for (int k = 0; k < 8; ++k) out[k] = x.dot(gamma[k] * u);
  return out;
}

KahlerChart flat_chart(ChartSteps steps) {
  return KahlerChart(
      "flat",
      [](const JetPoint& z) {
        Jet2 sum(0.0);
        for (const auto& c : z) sum = sum + c * c;
        return sum * Jet2(0.5);
      },
      std::numeric_limits<double>::infinity(), steps);
}

KahlerChart fubini_study_chart(double c, double radius, ChartSteps steps) {
  if (!(c > 0.0)) throw Error(ErrorCode::invalid_argument, "Fubini-Study scale must be positive");
  return KahlerChart(
      "fubini-study",
      [c](const JetPoint& z) {
        Jet2 sum(1.0);
        for (const auto& x : z) sum = sum + x * x;
        return Jet2(0.5 * c) * log(sum);
      },
      radius, steps);
}

Vector8 covariant_derivative(const KahlerChart& chart, const Vector8& p, const Vector8& x, const Vector8& u,
                             const Vector8& du) {
  return du + contract(chart.christoffel_at(p), x, u);
}

Vector8 covariant_derivative(const KahlerChart& chart, const Vector8& p, const Vector8& x,
                             const std::function<Vector8(const Vector8&)>& field, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::step_underflow, "non-positive difference step");
  const Vector8 du = (field(p + h * x) - field(p - h * x)) / (2.0 * h);
  return covariant_derivative(chart, p, x, field(p), du);
}

EinsteinReport einstein_report(const KahlerChart& chart, int n_points, std::uint64_t seed, double sample_radius) {
  if (n_points < 1) throw Error(ErrorCode::invalid_argument, "einstein_report needs at least one point");
  EinsteinReport report;
  const Vector8 origin = Vector8::Zero();
  report.s = chart.ricci_form_at(origin)(0, 1) / chart.kahler_form_at(origin)(0, 1);
  report.points = n_points;
  for (int i = 0; i < n_points; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    Vector8 p;
    for (int k = 0; k < 8; ++k) p[k] = normal(rng);
    p *= sample_radius * std::pow(uniform(rng), 1.0 / 8.0) / p.norm();
    const Matrix8 omega = chart.kahler_form_at(p);
    const Matrix8 rho = chart.ricci_form_at(p);
    report.max_deviation = std::max(report.max_deviation, (rho - report.s * omega).norm() / omega.norm());
  }
  return report;
}

double kahler_closedness_residual(const KahlerChart& chart, const Vector8& p, double h) {
  std::array<Matrix8, 8> dw;
  for (int l = 0; l < 8; ++l) {
    const Vector8 step = h * Vector8::Unit(l);
    dw[l] = (chart.kahler_form_at(p + step) - chart.kahler_form_at(p - step)) / (2.0 * h);
  }
  double worst = 0.0;
  for (int i = 0; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) {
      for (int k = j + 1; k < 8; ++k) {
        worst = std::max(worst, std::abs(dw[i](j, k) + dw[j](k, i) + dw[k](i, j)));
      }
    }
  }
  return worst;
}

}  // namespace cayley
