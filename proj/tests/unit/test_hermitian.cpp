#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "cayley/hermitian.hpp"
#include "cayley/planes.hpp"
#include "generators.hpp"

using namespace cayley;
using namespace cayley::testing;

TEST(Hermitian, ComplexStructure) {
  const HermitianStructure& s = standard_structure();
  const Matrix8& j = s.complex_structure();
  EXPECT_LE((j * j + Matrix8::Identity()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((j.transpose() * j - Matrix8::Identity()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(s.apply_j(s.apply_j(Vector8::Unit(0))), -Vector8::Unit(0));
  EXPECT_EQ(s.apply_j(Vector8::Unit(0)), Vector8::Unit(1));
  EXPECT_DOUBLE_EQ(s.omega(Vector8::Unit(0), s.apply_j(Vector8::Unit(0))), 1.0);
}

TEST(Hermitian, OmegaIsJInvariant) {
  Rng rng(1);
  const HermitianStructure& s = standard_structure();
  for (int trial = 0; trial < 50; ++trial) {
    const Vector8 x = random_vector(rng);
    const Vector8 y = random_vector(rng);
    EXPECT_NEAR(s.omega(s.apply_j(x), s.apply_j(y)), s.omega(x, y), 1e-12);
    EXPECT_NEAR(s.omega(x, y), -s.omega(y, x), 1e-12);
    const Vector8 xy[2] = {x, y};
    EXPECT_NEAR(s.kahler_form().evaluate(xy), s.omega(x, y), 1e-12);
    EXPECT_NEAR(x.dot(s.kahler_matrix() * y), s.omega(x, y), 1e-12);
  }
}

TEST(Hermitian, VolumeNormalization) {
  // omega^4 / 4! on (x1, y1, ..., x4, y4): 4! orderings of the four dx^dy
  // factors, each contributing 1.
  const KForm w4 = kahler_power(4);
  std::array<Vector8, 8> basis;
  for (int i = 0; i < 8; ++i) basis[static_cast<std::size_t>(i)] = Vector8::Unit(i);
  EXPECT_NEAR(w4.evaluate(basis) / 24.0, 1.0, 1e-13);

  // (i/2)^4 Omega ^ conj(Omega) = (1/16) Re(Omega ^ conj(Omega)).
  for (double alpha : {0.0, 0.7, 2.0}) {
    const ComplexForm om = holomorphic_volume(alpha);
    const ComplexForm top = wedge(om, om.conj());
    EXPECT_LE(top.im.max_abs(), 1e-12);
    EXPECT_LE((top.re * (1.0 / 16.0) - w4 * (1.0 / 24.0)).max_abs(), 1e-12) << alpha;
  }
}

TEST(Hermitian, HolomorphicVolumeIsType40) {
  Rng rng(2);
  const Matrix8 j = standard_complex_structure();
  const ComplexForm om = holomorphic_volume(0.4);
  for (int trial = 0; trial < 20; ++trial) {
    Frame4 f;
    for (int k = 0; k < 4; ++k) f.col(k) = random_vector(rng);
    Frame4 jf = f;
    jf.col(0) = j * f.col(0);
    // Omega(JX, ...) = i Omega(X, ...)
    EXPECT_NEAR(om.re.evaluate(jf), -om.im.evaluate(f), 1e-11);
    EXPECT_NEAR(om.im.evaluate(jf), om.re.evaluate(f), 1e-11);
  }
}

TEST(Hermitian, HolomorphicVolumeValueIsComplexDeterminant) {
  Rng rng(3);
  const ComplexForm om = holomorphic_volume();
  for (int trial = 0; trial < 20; ++trial) {
    Frame4 f;
    for (int k = 0; k < 4; ++k) f.col(k) = random_vector(rng);
    Eigen::Matrix4cd z;
    for (int k = 0; k < 4; ++k) z.col(k) = to_complex(f.col(k));
    const std::complex<double> oracle = z.determinant();
    const std::complex<double> v = holomorphic_volume_value(f);
    EXPECT_NEAR(v.real(), oracle.real(), 1e-11);
    EXPECT_NEAR(v.imag(), oracle.imag(), 1e-11);
    EXPECT_NEAR(om.re.evaluate(f), oracle.real(), 1e-11);
    EXPECT_NEAR(om.im.evaluate(f), oracle.imag(), 1e-11);
  }
}

TEST(Hermitian, CalibrationOnStandardPlanes) {
  EXPECT_NEAR(cayley_calibration(0.0)(real_plane().frame()), 1.0, 1e-14);
  EXPECT_NEAR(cayley_calibration(kPi)(real_plane().frame()), -1.0, 1e-14);
  for (double alpha : {0.0, 0.3, 1.0, kPi / 3.0, 2.5}) {
    EXPECT_NEAR(cayley_calibration(alpha)(complex_plane().frame()), 1.0, 1e-14) << alpha;
  }
}

TEST(Hermitian, CalibrationFormIsReOmegaPlusHalfOmegaSquared) {
  const double alpha = 0.9;
  const KForm expected = holomorphic_volume(alpha).re + kahler_power(2) * 0.5;
  EXPECT_LE((cayley_calibration(alpha).form() - expected).max_abs(), 1e-15);
  EXPECT_DOUBLE_EQ(cayley_calibration(alpha).alpha(), alpha);
}

TEST(Hermitian, FormGradientMatchesDifferences) {
  Rng rng(4);
  const KForm f = cayley_calibration(0.3).form();
  const Frame4 x = haar_frame(rng);
  const Frame4 grad = form_gradient(f, x);
  const double h = 1e-6;
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 4; ++c) {
      Frame4 p = x;
      Frame4 m = x;
      p(r, c) += h;
      m(r, c) -= h;
      EXPECT_NEAR(grad(r, c), (f.evaluate(p) - f.evaluate(m)) / (2.0 * h), 1e-8);
    }
  }
}

TEST(Hermitian, AscentIsMonotoneAndStaysOrthonormal) {
  Rng rng(5);
  const KForm f = cayley_calibration(1.0).form();
  for (int trial = 0; trial < 5; ++trial) {
    const Frame4 start = haar_frame(rng);
    const AscentResult r = ascend(f, start, 200);
    EXPECT_GE(r.value, f.evaluate(start) - 1e-14);
    EXPECT_LE(gram_deviation(r.frame), 1e-10);
    EXPECT_NEAR(f.evaluate(r.frame), r.value, 1e-12);
  }
}

TEST(Hermitian, ComassOfHalfOmegaSquared) {
  ComassOptions opt;
  opt.n_samples = 16;
  opt.refine_steps = 500;
  opt.seed = 7;
  EXPECT_NEAR(comass(kahler_power(2) * 0.5, opt), 1.0, 1e-6);
}

TEST(Hermitian, ComassOfCayleyCalibrations) {
  ComassOptions opt;
  opt.n_samples = 16;
  opt.refine_steps = 500;
  opt.seed = 11;
  for (double alpha : {0.0, kPi / 3.0, 1.0}) {
    const double c = comass(cayley_calibration(alpha).form(), opt);
    EXPECT_NEAR(c, 1.0, 1e-6) << alpha;
    EXPECT_LE(c, 1.0 + 1e-9);
  }
}

TEST(Hermitian, ComassOfZeroForm) { EXPECT_EQ(comass(KForm(4)), 0.0); }

TEST(Hermitian, ComassIsDeterministic) {
  ComassOptions opt;
  opt.n_samples = 4;
  opt.refine_steps = 50;
  opt.seed = 3;
  const KForm f = cayley_calibration(0.2).form();
  EXPECT_EQ(comass(f, opt), comass(f, opt));
}
