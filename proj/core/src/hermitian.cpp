#include "cayley/hermitian.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "cayley/error.hpp"
#include "cayley/parallel.hpp"
#include "cayley/random.hpp"

namespace cayley {

Matrix8 standard_complex_structure() {
  Matrix8 j = Matrix8::Zero();
  for (int k = 0; k < 4; ++k) {
    j(2 * k + 1, 2 * k) = 1.0;
    j(2 * k, 2 * k + 1) = -1.0;
  }
  return j;
}

HermitianStructure::HermitianStructure()
    : j_(standard_complex_structure()), omega_(2), omega_matrix_(Matrix8::Zero()) {
  // omega(e_a, e_b) = g(J e_a, e_b)
  omega_matrix_ = j_.transpose();
  omega_ = KForm::from_matrix(omega_matrix_);
}

const HermitianStructure& standard_structure() {
  static const HermitianStructure structure;
  return structure;
}

KForm kahler_power(int k) {
  KForm out = KForm::basis({});
  for (int i = 0; i < k; ++i) out = wedge(out, standard_structure().kahler_form());
  return out;
}

ComplexForm ComplexForm::rotate(double alpha) const {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  return {re * c - im * s, re * s + im * c};
}

ComplexForm wedge(const ComplexForm& a, const ComplexForm& b) {
  return {wedge(a.re, b.re) - wedge(a.im, b.im), wedge(a.re, b.im) + wedge(a.im, b.re)};
}

ComplexForm holomorphic_volume(double alpha) {
  ComplexForm out{KForm::basis({}), KForm(0)};
  for (int k = 0; k < 4; ++k) {
    const ComplexForm dz{KForm::basis({2 * k}), KForm::basis({2 * k + 1})};
    out = wedge(out, dz);
  }
  return out.rotate(alpha);
}

std::complex<double> holomorphic_volume_value(const Frame4& vectors) {
  Eigen::Matrix4cd z;
  for (int j = 0; j < 4; ++j) z.col(j) = to_complex(vectors.col(j));
  return z.determinant();
}

CayleyCalibration::CayleyCalibration(double alpha)
    : alpha_(alpha), phi_(holomorphic_volume(alpha).re + kahler_power(2) * 0.5) {}

CayleyCalibration cayley_calibration(double alpha) { return CayleyCalibration(alpha); }

namespace {

struct Term {
  std::array<int, 4> rows;
  double coefficient;
};

std::vector<Term> compile(const KForm& form) {
  if (form.degree() != 4) throw Error(ErrorCode::invalid_argument, "expected a 4-form");
  std::vector<Term> terms;
  for (const auto& [index, c] : form.terms()) {
    const auto rows = indices_of(index);
    terms.push_back({{rows[0], rows[1], rows[2], rows[3]}, c});
  }
  return terms;
}

double det3(const Eigen::Matrix3d& m) { return m.determinant(); }

Matrix4 cofactors(const Matrix4& m) {
  Matrix4 c;
  for (int r = 0; r < 4; ++r) {
    for (int col = 0; col < 4; ++col) {
      Eigen::Matrix3d minor;
      for (int i = 0, mi = 0; i < 4; ++i) {
        if (i == r) continue;
        for (int j = 0, mj = 0; j < 4; ++j) {
          if (j == col) continue;
          minor(mi, mj++) = m(i, j);
        }
        ++mi;
      }
      c(r, col) = ((r + col) % 2 == 0 ? 1.0 : -1.0) * det3(minor);
    }
  }
  return c;
}

Frame4 gradient(const std::vector<Term>& terms, const Frame4& frame, double& value) {
  Frame4 g = Frame4::Zero();
  value = 0.0;
  for (const Term& t : terms) {
    Matrix4 m;
    for (int a = 0; a < 4; ++a) m.row(a) = frame.row(t.rows[a]);
    const Matrix4 cof = cofactors(m);
    value += t.coefficient * m.row(0).dot(cof.row(0));
    for (int a = 0; a < 4; ++a) g.row(t.rows[a]) += t.coefficient * cof.row(a);
  }
  return g;
}

double value_of(const std::vector<Term>& terms, const Frame4& frame) {
  double value = 0.0;
  for (const Term& t : terms) {
    Matrix4 m;
    for (int a = 0; a < 4; ++a) m.row(a) = frame.row(t.rows[a]);
    value += t.coefficient * m.determinant();
  }
  return value;
}

Frame4 polar(const Frame4& a) {
  Eigen::JacobiSVD<Frame4> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU().leftCols<4>() * svd.matrixV().transpose();
}

AscentResult ascend_compiled(const std::vector<Term>& terms, const Frame4& start, int max_steps) {
  AscentResult result;
  result.frame = polar(start);
  double value = 0.0;
  Frame4 g = gradient(terms, result.frame, value);
  double step = 0.25;
  int it = 0;
  for (; it < max_steps; ++it) {
    const Frame4 riem = g - result.frame * (result.frame.transpose() * g);
    const double gnorm2 = riem.squaredNorm();
    result.gradient_norm = std::sqrt(gnorm2);
    if (result.gradient_norm < 1e-13) break;
    step = std::min(step * 2.0, 4.0);
    bool accepted = false;
    while (step > 1e-12) {
      const Frame4 trial = polar(result.frame + step * riem);
      const double trial_value = value_of(terms, trial);
      if (trial_value >= value + 0.5 * step * gnorm2) {
        result.frame = trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    g = gradient(terms, result.frame, value);
  }
  result.value = value;
  result.steps = it;
  return result;
}

}  // namespace

Frame4 form_gradient(const KForm& form, const Frame4& frame) {
  double value = 0.0;
  return gradient(compile(form), frame, value);
}

AscentResult ascend(const KForm& form, const Frame4& start, int max_steps) {
  return ascend_compiled(compile(form), start, max_steps);
}

double comass(const KForm& form, const ComassOptions& options) {
  if (options.n_samples < 1) throw Error(ErrorCode::invalid_argument, "comass needs at least one sample");
  const auto terms = compile(form);
  if (terms.empty()) return 0.0;
  std::vector<double> best(static_cast<std::size_t>(options.n_samples));
  parallel_for(best.size(), [&](std::size_t i) {
    Rng rng(derive_seed(options.seed, i));
    best[i] = ascend_compiled(terms, haar_frame(rng), options.refine_steps).value;
  });
  return *std::max_element(best.begin(), best.end());
}

}  // namespace cayley
