#include <gtest/gtest.h>

#include <cmath>

#include "cayley/error.hpp"
#include "cayley/hermitian.hpp"
#include "cayley/multilinear.hpp"
#include "generators.hpp"

using namespace cayley;
using namespace cayley::testing;

namespace {

Vector8 e(int i) { return Vector8::Unit(i); }

// Leibniz expansion of det[a_i(v_j)] for a simple 4-form a_1 ^ ... ^ a_4.
double det_pairing(const Frame4& covectors, const Frame4& vectors) {
  return (covectors.transpose() * vectors).determinant();
}

}  // namespace

TEST(Multilinear, DualBasisWedge) {
  const KForm e12 = wedge(KForm::basis({0}), KForm::basis({1}));
  const Vector8 v[2] = {e(0), e(1)};
  EXPECT_DOUBLE_EQ(e12.evaluate(v), 1.0);
  const Vector8 w[2] = {e(1), e(0)};
  EXPECT_DOUBLE_EQ(e12.evaluate(w), -1.0);
}

TEST(Multilinear, WedgeWithItselfVanishes) {
  const KForm a = wedge(KForm::basis({0}), KForm::basis({0}));
  EXPECT_EQ(a.max_abs(), 0.0);
}

TEST(Multilinear, DegreeOverflow) {
  try {
    wedge(KForm::basis({0, 1, 2, 3, 4}), KForm::basis({5, 6, 7, 2}));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::degree_overflow);
  }
}

TEST(Multilinear, OmegaSquaredOnComplexPlane) {
  // omega = sum dx_k ^ dy_k; on (x1, y1, x2, y2) only the cross terms
  // dx1^dy1^dx2^dy2 and dx2^dy2^dx1^dy1 survive, each giving 1.
  const KForm w2 = kahler_power(2);
  EXPECT_NEAR(w2.evaluate(Frame4::Identity()), 2.0, 1e-14);
  EXPECT_NEAR(evaluate(w2 * 0.5, Blade4(Frame4::Identity())), 1.0, 1e-14);
}

TEST(Multilinear, VolumeFormNormalization) {
  const KForm vol = KForm::basis({0, 1, 2, 3});
  EXPECT_DOUBLE_EQ(evaluate(vol, Blade4(e(0), e(1), e(2), e(3))), 1.0);
}

TEST(Multilinear, RepeatedFactorVanishes) {
  Rng rng(1);
  const KForm f = random_form(rng, 4);
  const Vector8 v = random_vector(rng);
  EXPECT_NEAR(evaluate(f, Blade4(v, random_vector(rng), v, random_vector(rng))), 0.0, 1e-12);
}

TEST(Multilinear, SimpleFormIsDeterminant) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    Frame4 cov;
    Frame4 vec;
    for (int k = 0; k < 4; ++k) {
      cov.col(k) = random_vector(rng);
      vec.col(k) = random_vector(rng);
    }
    const KForm f = wedge(wedge(KForm::covector(cov.col(0)), KForm::covector(cov.col(1))),
                          wedge(KForm::covector(cov.col(2)), KForm::covector(cov.col(3))));
    const double oracle = det_pairing(cov, vec);
    EXPECT_NEAR(f.evaluate(vec), oracle, 1e-10 * (1.0 + std::abs(oracle)));
    EXPECT_NEAR(evaluate(f, Blade4(vec)), oracle, 1e-10 * (1.0 + std::abs(oracle)));
  }
}

TEST(Multilinear, GradedCommutativity) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 3;
    const int l = 1 + (trial / 3) % 4;
    const KForm a = random_form(rng, k);
    const KForm b = random_form(rng, l);
    const double sign = (k * l) % 2 == 0 ? 1.0 : -1.0;
    EXPECT_LE((wedge(a, b) - wedge(b, a) * sign).max_abs(), 1e-12) << k << " " << l;
  }
}

TEST(Multilinear, WedgeIsAssociative) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const KForm a = random_form(rng, 1);
    const KForm b = random_form(rng, 2);
    const KForm c = random_form(rng, 2);
    EXPECT_LE((wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).max_abs(), 1e-11);
  }
}

TEST(Multilinear, InteriorProduct) {
  Rng rng(5);
  const KForm f = random_form(rng, 3);
  const Vector8 v = random_vector(rng);
  const Vector8 a = random_vector(rng);
  const Vector8 b = random_vector(rng);
  const Vector8 full[3] = {v, a, b};
  const Vector8 rest[2] = {a, b};
  EXPECT_NEAR(f.interior(v).evaluate(rest), f.evaluate(full), 1e-11);
}

TEST(Multilinear, MatrixRoundTrip) {
  Rng rng(6);
  const KForm f = random_form(rng, 2);
  const Matrix8 m = f.to_matrix();
  EXPECT_LE((m + m.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE((KForm::from_matrix(m) - f).max_abs(), 1e-15);
  const Vector8 x = random_vector(rng);
  const Vector8 y = random_vector(rng);
  const Vector8 xy[2] = {x, y};
  EXPECT_NEAR(x.dot(m * y), f.evaluate(xy), 1e-12);
}

TEST(Multilinear, PluckerPairingMatchesEvaluation) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const KForm f = random_form(rng, 4);
    const Frame4 frame = haar_frame(rng);
    EXPECT_NEAR(f.pair(Blade4(frame).coordinates()), f.evaluate(frame), 1e-11);
  }
}

TEST(Multilinear, FromFrameRejectsNonOrthonormal) {
  Frame4 f = Frame4::Identity();
  f(0, 1) = 1e-6;
  try {
    OrientedPlane4::from_frame(f);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::non_orthonormal);
  }
  EXPECT_NO_THROW(OrientedPlane4::from_frame(f, 1e-5));
}

TEST(Multilinear, OrthonormalizedKeepsSpanAndOrientation) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Frame4 raw;
    for (int k = 0; k < 4; ++k) raw.col(k) = random_vector(rng);
    const OrientedPlane4 p = OrientedPlane4::orthonormalized(raw);
    EXPECT_LE(gram_deviation(p.frame()), 1e-13);
    const Matrix4 change = p.frame().transpose() * raw;
    EXPECT_LE((p.frame() * change - raw).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(change.determinant(), 0.0);
  }
}

TEST(Multilinear, RestrictionToLagrangianPlaneVanishes) {
  EXPECT_EQ(restrict_2form(standard_structure().kahler_form(), real_plane()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Multilinear, RestrictionToComplexPlane) {
  const Matrix4 a = restrict_2form(standard_structure().kahler_form(), complex_plane());
  Matrix4 expected = Matrix4::Zero();
  expected(0, 1) = 1.0;
  expected(1, 0) = -1.0;
  expected(2, 3) = 1.0;
  expected(3, 2) = -1.0;
  EXPECT_LE((a - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Multilinear, RestrictionOnCanonicalPlane) {
  Rng rng(9);
  const double t1 = kPi / 6.0;
  const double t2 = kPi / 3.0;
  const OrientedPlane4 p = plane_with_angles(rng, t1, t2);
  const Matrix4 a = restrict_2form(standard_structure().kahler_form(), p);
  Matrix4 expected = Matrix4::Zero();
  expected(0, 1) = std::cos(t1);
  expected(1, 0) = -std::cos(t1);
  expected(2, 3) = std::cos(t2);
  expected(3, 2) = -std::cos(t2);
  EXPECT_LE((a - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((restrict_2form(standard_structure().kahler_matrix(), p) - a).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Multilinear, HodgeStarBasis) {
  auto basis = [](int i, int j) {
    Matrix4 m = Matrix4::Zero();
    m(i, j) = 1.0;
    m(j, i) = -1.0;
    return m;
  };
  EXPECT_EQ(hodge_star_plane(basis(0, 1)), basis(2, 3));
  EXPECT_EQ(hodge_star_plane(basis(0, 2)), basis(3, 1));
  EXPECT_EQ(hodge_star_plane(basis(0, 3)), basis(1, 2));
  const Matrix4 sd = basis(0, 1) + basis(2, 3);
  EXPECT_EQ(hodge_star_plane(sd), sd);
  const double c1 = std::cos(kPi / 6.0);
  const double c2 = std::cos(kPi / 3.0);
  EXPECT_LE((hodge_star_plane(c1 * basis(0, 1) + c2 * basis(2, 3)) - (c1 * basis(2, 3) + c2 * basis(0, 1)))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(Multilinear, HodgeStarIsInvolution) {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix4 a = random_antisymmetric(rng);
    EXPECT_LE((hodge_star_plane(hodge_star_plane(a)) - a).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Multilinear, HodgeStarMatchesWedgeDefinition) {
  // a ^ *b = <a, b> vol on R^4, with <e^12, e^12> = 1.
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix4 a = random_antisymmetric(rng);
    const Matrix4 b = random_antisymmetric(rng);
    const Matrix4 sb = hodge_star_plane(b);
    const double wedge_coeff = a(0, 1) * sb(2, 3) - a(0, 2) * sb(1, 3) + a(0, 3) * sb(1, 2) + a(1, 2) * sb(0, 3) -
                               a(1, 3) * sb(0, 2) + a(2, 3) * sb(0, 1);
    const double inner = 0.5 * (a.array() * b.array()).sum();
    EXPECT_NEAR(wedge_coeff, inner, 1e-12);
  }
}

TEST(Multilinear, PfaffianSquaresToDeterminant) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix4 a = random_antisymmetric(rng);
    EXPECT_NEAR(pfaffian(a) * pfaffian(a), a.determinant(), 1e-10 * (1.0 + std::abs(a.determinant())));
  }
}

TEST(Multilinear, HalfOmegaSquaredIsProductOfCosines) {
  Rng rng(13);
  const KForm half_w2 = kahler_power(2) * 0.5;
  for (int i = 0; i <= 8; ++i) {
    for (int j = 0; j <= 8; ++j) {
      const double t1 = i * kPi / 16.0;
      const double t2 = t1 + j * (kPi - 2.0 * t1) / 8.0;
      const OrientedPlane4 p = plane_with_angles(rng, t1, t2);
      const double oracle = std::cos(t1) * std::cos(t2);
      EXPECT_NEAR(evaluate(half_w2, p.blade()), oracle, 1e-10 * std::max(1.0, std::abs(oracle)));
    }
  }
}
