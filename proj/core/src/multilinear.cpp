#include "cayley/multilinear.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cayley/error.hpp"

namespace cayley {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::degree_overflow: return "degree_overflow";
    case ErrorCode::non_orthonormal: return "non_orthonormal";
    case ErrorCode::rank_deficient: return "rank_deficient";
    case ErrorCode::near_complex: return "near_complex";
    case ErrorCode::partially_complex: return "partially_complex";
    case ErrorCode::non_cayley: return "non_cayley";
    case ErrorCode::outside_chart: return "outside_chart";
    case ErrorCode::step_underflow: return "step_underflow";
    case ErrorCode::boundary_stencil: return "boundary_stencil";
    case ErrorCode::non_periodic: return "non_periodic";
    case ErrorCode::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

namespace {

void check_degree(int degree) {
  if (degree < 0 || degree > 8) {
    throw Error(ErrorCode::degree_overflow, "degree " + std::to_string(degree) + " outside 0..8");
  }
}

// Sign of the shuffle that sorts the concatenation (a, b) of two disjoint
// increasing index sets.
double shuffle_sign(MultiIndex a, MultiIndex b) {
  int inversions = 0;
  for (int i = 0; i < 8; ++i) {
    if (a & (1u << i)) inversions += std::popcount(static_cast<unsigned>(b & ((1u << i) - 1)));
  }
  return (inversions % 2 == 0) ? 1.0 : -1.0;
}

double minor_det(const Eigen::Ref<const Eigen::MatrixXd>& vectors, MultiIndex index) {
  const auto rows = indices_of(index);
  const int k = static_cast<int>(rows.size());
  if (k == 0) return 1.0;
  if (k == 1) return vectors(rows[0], 0);
  if (k == 2) {
    return vectors(rows[0], 0) * vectors(rows[1], 1) - vectors(rows[1], 0) * vectors(rows[0], 1);
  }
  if (k == 4) {
    Matrix4 m;
    for (int r = 0; r < 4; ++r) m.row(r) = vectors.row(rows[r]);
    return m.determinant();
  }
  Eigen::MatrixXd m(k, k);
  for (int r = 0; r < k; ++r) m.row(r) = vectors.row(rows[r]);
  return m.determinant();
}

}  // namespace

int degree_of(MultiIndex index) { return std::popcount(static_cast<unsigned>(index)); }

std::vector<int> indices_of(MultiIndex index) {
  std::vector<int> out;
  for (int i = 0; i < 8; ++i) {
    if (index & (1u << i)) out.push_back(i);
  }
  return out;
}

const std::vector<MultiIndex>& multi_indices(int degree) {
  check_degree(degree);
  static const auto table = [] {
    std::array<std::vector<MultiIndex>, 9> t;
    for (unsigned m = 0; m < 256; ++m) t[std::popcount(m)].push_back(static_cast<MultiIndex>(m));
    // Lexicographic order of the sorted index tuples.
    for (auto& v : t) {
      std::sort(v.begin(), v.end(), [](MultiIndex x, MultiIndex y) { return indices_of(x) < indices_of(y); });
    }
    return t;
  }();
  return table[degree];
}

KForm::KForm(int degree) : degree_(degree) { check_degree(degree); }

KForm KForm::basis(std::initializer_list<int> indices) {
  KForm out(static_cast<int>(indices.size()));
  MultiIndex mask = 0;
  double sign = 1.0;
  for (int i : indices) {
    if (i < 0 || i > 7) throw Error(ErrorCode::invalid_argument, "basis index outside 0..7");
    const auto bit = static_cast<MultiIndex>(1u << i);
    if (mask & bit) return KForm(static_cast<int>(indices.size()));  // repeated factor
    sign *= shuffle_sign(mask, bit);
    mask |= bit;
  }
  out.coeffs_[mask] = sign;
  return out;
}

KForm KForm::from_terms(int degree, std::span<const std::pair<MultiIndex, double>> terms) {
  KForm out(degree);
  for (const auto& [index, value] : terms) {
    if (degree_of(index) != degree) throw Error(ErrorCode::invalid_argument, "term degree mismatch");
    out.coeffs_[index] += value;
  }
  return out;
}

KForm KForm::covector(const Vector8& v) {
  KForm out(1);
  for (int i = 0; i < 8; ++i) out.coeffs_[1u << i] = v[i];
  return out;
}

std::vector<std::pair<MultiIndex, double>> KForm::terms(double drop_below) const {
  std::vector<std::pair<MultiIndex, double>> out;
  for (MultiIndex index : multi_indices(degree_)) {
    const double c = coeffs_[index];
    if (c != 0.0 && std::abs(c) > drop_below) out.emplace_back(index, c);
  }
  return out;
}

double KForm::evaluate(std::span<const Vector8> vectors) const {
  if (static_cast<int>(vectors.size()) != degree_) {
    throw Error(ErrorCode::invalid_argument, "form of degree " + std::to_string(degree_) +
                                                 " evaluated on " + std::to_string(vectors.size()) + " vectors");
  }
  Eigen::MatrixXd v(8, degree_);
  for (int j = 0; j < degree_; ++j) v.col(j) = vectors[j];
  double sum = 0.0;
  for (MultiIndex index : multi_indices(degree_)) {
    const double c = coeffs_[index];
    if (c != 0.0) sum += c * minor_det(v, index);
  }
  return sum;
}

double KForm::evaluate(const Frame4& frame) const {
  if (degree_ != 4) throw Error(ErrorCode::invalid_argument, "frame evaluation needs a 4-form");
  return pair(Blade4(frame).coordinates());
}

KForm KForm::interior(const Vector8& v) const {
  if (degree_ == 0) return KForm(0);
  KForm out(degree_ - 1);
  for (MultiIndex index : multi_indices(degree_)) {
    const double c = coeffs_[index];
    if (c == 0.0) continue;
    const auto rows = indices_of(index);
    for (std::size_t m = 0; m < rows.size(); ++m) {
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      out.coeffs_[index & ~(1u << rows[m])] += sign * v[rows[m]] * c;
    }
  }
  return out;
}

double KForm::pair(const KForm& kvector) const {
  if (kvector.degree_ != degree_) throw Error(ErrorCode::invalid_argument, "pairing degree mismatch");
  double sum = 0.0;
  for (MultiIndex index : multi_indices(degree_)) sum += coeffs_[index] * kvector.coeffs_[index];
  return sum;
}

Matrix8 KForm::to_matrix() const {
  if (degree_ != 2) throw Error(ErrorCode::invalid_argument, "to_matrix needs a 2-form");
  Matrix8 w = Matrix8::Zero();
  for (int a = 0; a < 8; ++a) {
    for (int b = a + 1; b < 8; ++b) {
      const double c = coeffs_[(1u << a) | (1u << b)];
      w(a, b) = c;
      w(b, a) = -c;
    }
  }
  return w;
}

KForm KForm::from_matrix(const Matrix8& antisymmetric) {
  KForm out(2);
  for (int a = 0; a < 8; ++a) {
    for (int b = a + 1; b < 8; ++b) out.coeffs_[(1u << a) | (1u << b)] = antisymmetric(a, b);
  }
  return out;
}

double KForm::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

KForm KForm::operator+(const KForm& other) const {
  if (other.degree_ != degree_) throw Error(ErrorCode::invalid_argument, "sum of forms of different degree");
  KForm out(degree_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = coeffs_[i] + other.coeffs_[i];
  return out;
}

KForm KForm::operator-(const KForm& other) const { return *this + other * -1.0; }

KForm KForm::operator*(double s) const {
  KForm out(degree_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = coeffs_[i] * s;
  return out;
}

KForm wedge(const KForm& a, const KForm& b) {
  const int degree = a.degree() + b.degree();
  if (degree > 8) {
    throw Error(ErrorCode::degree_overflow,
                "wedge of degrees " + std::to_string(a.degree()) + " and " + std::to_string(b.degree()));
  }
  std::vector<std::pair<MultiIndex, double>> terms;
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      if (ia & ib) continue;
      terms.emplace_back(static_cast<MultiIndex>(ia | ib), shuffle_sign(ia, ib) * ca * cb);
    }
  }
  return KForm::from_terms(degree, terms);
}

Blade4::Blade4(const Vector8& v1, const Vector8& v2, const Vector8& v3, const Vector8& v4) {
  factors_ << v1, v2, v3, v4;
}

KForm Blade4::coordinates() const {
  std::vector<std::pair<MultiIndex, double>> terms;
  terms.reserve(70);
  for (MultiIndex index : multi_indices(4)) terms.emplace_back(index, minor_det(factors_, index));
  return KForm::from_terms(4, terms);
}

double evaluate(const KForm& form, const Blade4& blade) {
  if (form.degree() != 4) throw Error(ErrorCode::invalid_argument, "blade evaluation needs a 4-form");
  return form.pair(blade.coordinates());
}

double gram_deviation(const Frame4& frame) {
  return (frame.transpose() * frame - Matrix4::Identity()).cwiseAbs().maxCoeff();
}

OrientedPlane4 OrientedPlane4::from_frame(const Frame4& frame, double tol) {
  if (!frame.allFinite()) throw Error(ErrorCode::non_orthonormal, "frame has non-finite entries");
  const double dev = gram_deviation(frame);
  if (dev > tol) {
    throw Error(ErrorCode::non_orthonormal, "Gram deviation " + std::to_string(dev) + " exceeds tolerance");
  }
  return OrientedPlane4(frame);
}

OrientedPlane4 OrientedPlane4::orthonormalized(const Frame4& frame) {
  if (!frame.allFinite()) throw Error(ErrorCode::rank_deficient, "frame has non-finite entries");
  Frame4 q = frame;
  const double scale = std::max(1.0, frame.cwiseAbs().maxCoeff());
  for (int j = 0; j < 4; ++j) {
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    }
    const double n = q.col(j).norm();
    if (n < 1e-12 * scale) throw Error(ErrorCode::rank_deficient, "frame vectors are linearly dependent");
    q.col(j) /= n;
  }
  return OrientedPlane4(q);
}

Matrix4 restrict_2form(const Matrix8& form, const OrientedPlane4& plane) {
  Matrix4 a = plane.frame().transpose() * form * plane.frame();
  return 0.5 * (a - a.transpose());
}

Matrix4 restrict_2form(const KForm& form, const OrientedPlane4& plane) {
  return restrict_2form(form.to_matrix(), plane);
}

Matrix4 hodge_star_plane(const Matrix4& a) {
  Matrix4 s = Matrix4::Zero();
  s(2, 3) = a(0, 1);
  s(1, 3) = -a(0, 2);  // *e^{13} = e^{42}
  s(1, 2) = a(0, 3);
  s(0, 1) = a(2, 3);
  s(0, 2) = -a(1, 3);
  s(0, 3) = a(1, 2);
  return s - s.transpose();
}

double pfaffian(const Matrix4& a) { return a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2); }

}  // namespace cayley
