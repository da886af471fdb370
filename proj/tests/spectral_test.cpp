// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#include "conelag/spectral.hpp"

#include <gtest/gtest.h>

#include "conelag/cones.hpp"
#include "test_util.hpp"

namespace conelag {
namespace {

using testing::Rng;

TEST(SymEig, DiagonalAndKnown2x2) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 5.0;
  d(1, 1) = -1.0;
  EigDecomposition e = sym_eig(d);
  EXPECT_NEAR(e.eigenvalues(0), 5.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues(1), -1.0, 1e-14);

  Matrix f(2, 2);
  f << 0, 1, 1, 0;
  e = sym_eig(f);
  EXPECT_NEAR(e.eigenvalues(0), 1.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues(1), -1.0, 1e-14);
}

TEST(SymEig, ReconstructionAndOrthonormality) {
  Rng rng(1234);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + static_cast<int>(rng() % 7);  // up to 8
    Matrix y = testing::random_symmetric(rng, n, 3.0);
    EigDecomposition e = sym_eig(y);
    EXPECT_LE((e.reconstruct() - y).norm(), 1e-10 * std::max(1.0, y.norm()));
    EXPECT_LE((e.eigenvectors.transpose() * e.eigenvectors - Matrix::Identity(n, n)).norm(),
              1e-10);
    for (int i = 0; i + 1 < n; ++i) EXPECT_GE(e.eigenvalues(i), e.eigenvalues(i + 1));
  }
}

TEST(SymEig, RejectsNonSymmetric) {
  Matrix a(2, 2);
  a << 1, 2, 3, 4;
  EXPECT_THROW(sym_eig(a), std::invalid_argument);
}

TEST(Lowner, IdentityIsIdentity) {
  Rng rng(9);
  ScalarFunction id = ScalarFunction::identity();
  for (int t = 0; t < 50; ++t) {
    Matrix y = testing::random_symmetric(rng, 3);
    auto r = lowner_matrix(id, y);
    ASSERT_TRUE(r.has_value());
    EXPECT_LE((*r - y).norm(), 1e-12 * std::max(1.0, y.norm()));

    Vector v = testing::random_vector(rng, 4);
    auto s = lowner_soc(id, v);
    ASSERT_TRUE(s.has_value());
    EXPECT_LE((*s - v).norm(), 1e-12 * std::max(1.0, v.norm()));
  }
}

TEST(Lowner, PositivePartMatchesConeProjection) {
  Rng rng(77);
  ScalarFunction pos = ScalarFunction::positive_part();
  ConeSpec psd{ConeBlock::psd(3)};
  for (int t = 0; t < 100; ++t) {
    Matrix y = testing::random_symmetric(rng, 3);
    auto r = lowner_matrix(pos, y);
    ASSERT_TRUE(r.has_value());
    // [.]_+ is exactly the projection onto the PSD-positive cone
    Matrix viaCone = smat(project_polar(psd, BlockVector({svec(y)})).blocks[0], 3);
    EXPECT_LE((*r - viaCone).norm(), 1e-10);
  }
}

TEST(Lowner, SocPositivePartMatchesProjection) {
  ScalarFunction pos = ScalarFunction::positive_part();
  Vector y(2);
  y << 0.0, 2.0;
  auto r = lowner_soc(pos, y);
  ASSERT_TRUE(r.has_value());
  // spectral values 2 and -2 map to 2 and 0; reassembly gives (1, 1)
  EXPECT_NEAR((*r)(0), 1.0, 1e-14);
  EXPECT_NEAR((*r)(1), 1.0, 1e-14);

  Rng rng(31);
  ConeSpec soc{ConeBlock::second_order(4)};
  for (int t = 0; t < 100; ++t) {
    Vector v = testing::random_vector(rng, 4);
    auto s = lowner_soc(pos, v);
    ASSERT_TRUE(s.has_value());
    BlockVector p = project(soc, BlockVector({v}));
    EXPECT_LE((*s - p.blocks[0]).norm(), 1e-10);
  }
}

TEST(Lowner, ZeroTailBranch) {
  ScalarFunction frisch = ScalarFunction::modified_frisch();
  Vector y = Vector::Zero(3);
  y(0) = 0.3;
  auto r = lowner_soc(frisch, y);
  ASSERT_TRUE(r.has_value());
  EXPECT_NEAR((*r)(0), -std::log1p(-0.3), 1e-14);
  EXPECT_EQ((*r)(1), 0.0);
  EXPECT_EQ((*r)(2), 0.0);
}

TEST(Lowner, DomainBoundaryReturnsInfinityFlag) {
  ScalarFunction frisch = ScalarFunction::modified_frisch();
  Matrix y = Matrix::Identity(2, 2);  // eigenvalue 1 = eps0 exactly
  EXPECT_FALSE(lowner_matrix(frisch, y).has_value());
  y *= 0.5;
  EXPECT_TRUE(lowner_matrix(frisch, y).has_value());

  Vector v(2);
  v << 0.9, 0.3;  // spectral value 1.2 >= eps0
  EXPECT_FALSE(lowner_soc(frisch, v).has_value());
}

TEST(Lowner, CompositionRule) {
  Rng rng(55);
  ScalarFunction f = ScalarFunction::exp_minus_one();
  ScalarFunction g = ScalarFunction::positive_part();
  // psi1 o psi2 with psi1 = exp-1 applied after positive part
  ScalarFunction comp{[&](double t) { return f.value(g.value(t)); },
                      [](double) { return 0.0; }, [](double) { return 0.0; }};
  for (int t = 0; t < 50; ++t) {
    Matrix y = testing::random_symmetric(rng, 3);
    auto direct = lowner_matrix(comp, y);
    auto inner = lowner_matrix(g, y);
    ASSERT_TRUE(inner.has_value());
    auto chained = lowner_matrix(f, *inner);
    ASSERT_TRUE(direct.has_value());
    ASSERT_TRUE(chained.has_value());
    EXPECT_LE((*direct - *chained).norm(), 1e-8);
  }
}

TEST(Lowner, MonotonePsiMapsConeToCone) {
  // psi non-decreasing with psi(0) = 0: y in K implies Psi(-y) in -K,
  // for the second order cone reading K = Q.
  Rng rng(202);
  ScalarFunction psi = ScalarFunction::exp_minus_one();
  ConeSpec soc{ConeBlock::second_order(3)};
  for (int t = 0; t < 100; ++t) {
    BlockVector y = testing::random_feasible(rng, soc);  // y in Q? project gives Q
    auto r = lowner_soc(psi, -1.0 * y.blocks[0]);
    ASSERT_TRUE(r.has_value());
    // Psi(-y) must lie in -Q
    EXPECT_TRUE(contains(soc, BlockVector({-*r}), 1e-9));
  }
}

TEST(ScalarFunction, CheckedRejectsNonzeroAtOrigin) {
  ScalarFunction bad{[](double t) { return t + 1.0; }, [](double) { return 1.0; },
                     [](double) { return 0.0; }};
  EXPECT_THROW(ScalarFunction::checked(bad), std::invalid_argument);
  EXPECT_NO_THROW(ScalarFunction::checked(ScalarFunction::exp_minus_one()));
}

}  // namespace
}  // namespace conelag
