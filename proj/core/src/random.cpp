#include "cayley/random.hpp"

#include <complex>

namespace cayley {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Frame4 haar_frame(Rng& rng) {
  std::normal_distribution<double> normal;
  Frame4 g;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 8; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Frame4> qr(g);
  Frame4 q = qr.householderQ() * Frame4::Identity();
  const Eigen::Matrix<double, 8, 4> r = qr.matrixQR();
  for (int j = 0; j < 4; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

Eigen::Matrix4cd haar_unitary(Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::Matrix4cd g;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) g(i, j) = {normal(rng), normal(rng)};
  }
  Eigen::HouseholderQR<Eigen::Matrix4cd> qr(g);
  Eigen::Matrix4cd q = qr.householderQ();
  const Eigen::Matrix4cd r = qr.matrixQR();
  for (int j = 0; j < 4; ++j) {
    const std::complex<double> d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix8 realify(const Eigen::Matrix4cd& m) {
  Matrix8 r;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double a = m(i, j).real();
      const double b = m(i, j).imag();
      r(2 * i, 2 * j) = a;
      r(2 * i, 2 * j + 1) = -b;
      r(2 * i + 1, 2 * j) = b;
      r(2 * i + 1, 2 * j + 1) = a;
    }
  }
  return r;
}

Eigen::Vector4cd to_complex(const Vector8& v) {
  Eigen::Vector4cd z;
  for (int k = 0; k < 4; ++k) z[k] = {v[2 * k], v[2 * k + 1]};
  return z;
}

Vector8 to_real(const Eigen::Vector4cd& z) {
  Vector8 v;
  for (int k = 0; k < 4; ++k) {
    v[2 * k] = z[k].real();
    v[2 * k + 1] = z[k].imag();
  }
  return v;
}

Matrix4 random_rotation(Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix4 g;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Matrix4> qr(g);
  Matrix4 q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

}  // namespace cayley
