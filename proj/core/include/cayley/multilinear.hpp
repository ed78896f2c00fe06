#pragma once

// Exterior algebra over R^8.
//
// Conventions used everywhere in the library:
//  * e^{i1...ik} denotes e^{i1} ^ ... ^ e^{ik} with the determinant
//    normalization, so e^{12}(e_1, e_2) = 1.
//  * k-forms are stored as coefficients over strictly increasing
//    multi-indices, encoded as 8-bit masks.
//  * The orientation of a 4-plane is the order of its frame.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cayley {

using Vector8 = Eigen::Matrix<double, 8, 1>;
using Matrix8 = Eigen::Matrix<double, 8, 8>;
using Frame4 = Eigen::Matrix<double, 8, 4>;
using Matrix4 = Eigen::Matrix4d;

inline constexpr double kAlgebraicTol = 1e-10;
inline constexpr double kOrthonormalTol = 1e-12;

using MultiIndex = std::uint8_t;

int degree_of(MultiIndex index);
std::vector<int> indices_of(MultiIndex index);
// All multi-indices of the given degree in increasing lexicographic order.
const std::vector<MultiIndex>& multi_indices(int degree);

class KForm {
 public:
  explicit KForm(int degree);

  // e^{i0} ^ e^{i1} ^ ..., indices in any order (0-based).
  static KForm basis(std::initializer_list<int> indices);
  static KForm from_terms(int degree, std::span<const std::pair<MultiIndex, double>> terms);
  static KForm covector(const Vector8& v);

  int degree() const { return degree_; }
  double coefficient(MultiIndex index) const { return coeffs_[index]; }
  std::vector<std::pair<MultiIndex, double>> terms(double drop_below = 0.0) const;

  // Multilinear alternating evaluation on degree() vectors.
  double evaluate(std::span<const Vector8> vectors) const;
  double evaluate(const Frame4& frame) const;

  // (i_v a)(w_2, ..., w_k) = a(v, w_2, ..., w_k)
  KForm interior(const Vector8& v) const;

  // Coefficient-wise pairing, i.e. the evaluation of a form on a k-vector
  // given by its coordinates.
  double pair(const KForm& kvector) const;

  // Dense antisymmetric matrix W(a, b) = form(e_a, e_b); degree 2 only.
  Matrix8 to_matrix() const;
  static KForm from_matrix(const Matrix8& antisymmetric);

  double max_abs() const;

  KForm operator+(const KForm& other) const;
  KForm operator-(const KForm& other) const;
  KForm operator*(double s) const;
  friend KForm operator*(double s, const KForm& f) { return f * s; }

 private:
  int degree_;
  std::array<double, 256> coeffs_{};
};

// Graded wedge; throws Error{degree_overflow} when the degrees sum past 8.
KForm wedge(const KForm& a, const KForm& b);

// A simple 4-vector v1 ^ v2 ^ v3 ^ v4.
class Blade4 {
 public:
  explicit Blade4(const Frame4& factors) : factors_(factors) {}
  Blade4(const Vector8& v1, const Vector8& v2, const Vector8& v3, const Vector8& v4);

  const Frame4& factors() const { return factors_; }
  // Plucker coordinates: the 70 4x4 minors, stored as a degree-4 table.
  KForm coordinates() const;

 private:
  Frame4 factors_;
};

double evaluate(const KForm& form, const Blade4& blade);

// Ordered orthonormal 4-frame; the span with the orientation of the frame.
class OrientedPlane4 {
 public:
  // span(e_1, e_2, e_3, e_4)
  OrientedPlane4() : frame_(Frame4::Identity()) {}

  // Throws Error{non_orthonormal} if the Gram matrix deviates from the
  // identity by more than tol (max entry).
  static OrientedPlane4 from_frame(const Frame4& frame, double tol = kOrthonormalTol);
  // Gram-Schmidt in frame order; keeps span and orientation.
  static OrientedPlane4 orthonormalized(const Frame4& frame);

  const Frame4& frame() const { return frame_; }
  Vector8 vector(int i) const { return frame_.col(i); }
  Blade4 blade() const { return Blade4(frame_); }
  Matrix8 projector() const { return frame_ * frame_.transpose(); }

 private:
  explicit OrientedPlane4(const Frame4& frame) : frame_(frame) {}
  Frame4 frame_;
};

double gram_deviation(const Frame4& frame);

// A(i, j) = form(frame_i, frame_j).
Matrix4 restrict_2form(const KForm& form, const OrientedPlane4& plane);
Matrix4 restrict_2form(const Matrix8& form, const OrientedPlane4& plane);

// Hodge star of the plane's induced metric on 2-forms written in an oriented
// orthonormal frame: *e^{12} = e^{34}, *e^{13} = e^{42}, *e^{14} = e^{23}.
Matrix4 hodge_star_plane(const Matrix4& two_form);

// A12 A34 - A13 A24 + A14 A23.
double pfaffian(const Matrix4& a);

}  // namespace cayley
