// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#include "conelag/analysis.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace conelag {
namespace {

using testing::Rng;

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

PhiFamily full_dual_exponential() {
  FamilyParams params;
  params.full_dual = true;
  return make_family("exponential", params);
}

TEST(Saddle, WorkedExampleExmplExp) {
  ProblemInstance exm = catalog_get("exmpl-exp");
  PhiFamily expf = full_dual_exponential();
  SaddleCheckConfig cfg;
  cfg.lambda_samples = 2000;  // the acceptance suite runs the full budget
  SaddleCheckReport rep = local_saddle_check(exm, expf, exm.reference->x,
                                             exm.reference->lambda, cfg);
  EXPECT_TRUE(rep.pass);
  for (const auto& row : rep.per_c) {
    EXPECT_NEAR(row.value, 2.0, 1e-12);
    EXPECT_NEAR(row.sup_value, 2.0, 1e-6);
    EXPECT_NEAR(row.inf_value, 2.0, 1e-6);
  }
}

TEST(Saddle, Nlp1dHprPasses) {
  ProblemInstance nlp = catalog_get("nlp1d");
  PhiFamily hpr = make_family("hpr");
  SaddleCheckConfig cfg;
  cfg.c_list = {1.0, 2.0, 10.0};
  cfg.lambda_samples = 1000;
  SaddleCheckReport rep =
      local_saddle_check(nlp, hpr, nlp.reference->x, nlp.reference->lambda, cfg);
  EXPECT_TRUE(rep.pass);
}

TEST(Saddle, PerturbedMultiplierFails) {
  ProblemInstance nlp = catalog_get("nlp1d");
  PhiFamily hpr = make_family("hpr");
  SaddleCheckConfig cfg;
  cfg.c_list = {1.0};
  cfg.lambda_samples = 2000;
  // at the exactly complementary x* the sup side stays flat (Phi(0, ., c)
  // vanishes on K*), so the wrong multiplier is caught on the inf side
  SaddleCheckReport rep =
      local_saddle_check(nlp, hpr, nlp.reference->x, BlockVector({vec({2.5})}), cfg);
  EXPECT_FALSE(rep.pass);
  EXPECT_LT(rep.per_c[0].inf_margin, -1e-6);

  // at a non-complementary pair the sampled multiplier ascent finds an
  // improvement: the sup side fails
  SaddleCheckReport rep2 =
      local_saddle_check(nlp, hpr, vec({1.1}), BlockVector({vec({0.5})}), cfg);
  EXPECT_FALSE(rep2.pass);
  EXPECT_LT(rep2.per_c[0].sup_margin, -1e-6);
}

TEST(Dual, StrongDualityOnConvexQp) {
  ProblemInstance qp = catalog_get("qp2");
  PhiFamily hpr = make_family("hpr");
  DualValueResult res = dual_value(qp, hpr, qp.reference->lambda, 10.0, 8);
  EXPECT_NEAR(res.theta_hat, qp.reference->f, 1e-6);
}

TEST(Dual, WeakDualitySampled) {
  Rng rng(15);
  for (const char* name : {"qp2", "nlp1d"}) {
    ProblemInstance prob = catalog_get(name);
    PhiFamily hpr = make_family("hpr");
    const double fstar = prob.reference->f;
    for (int s = 0; s < 50; ++s) {
      BlockVector l = testing::random_block_vector(rng, prob.cone, -2.0, 2.0);
      const double c = std::pow(10.0, static_cast<double>(rng() % 3));
      DualValueResult res = dual_value(prob, hpr, l, c, 4, 1000 + s);
      EXPECT_LE(res.theta_hat, fstar + 1e-8) << name;
    }
  }
}

TEST(Dual, ThetaMonotoneInCForA4Families) {
  ProblemInstance qp = catalog_get("qp2");
  PhiFamily hpr = make_family("hpr");
  Rng rng(7);
  for (int s = 0; s < 10; ++s) {
    BlockVector l = testing::random_block_vector(rng, qp.cone, 0.0, 2.0);
    double prev = -std::numeric_limits<double>::infinity();
    for (double c : {1.0, 10.0, 100.0, 1000.0}) {
      DualValueResult res = dual_value(qp, hpr, l, c, 6, 55);
      EXPECT_GE(res.theta_hat, prev - 1e-7);
      prev = res.theta_hat;
    }
  }
}

TEST(Sublevel, BoundedOnQp2Hpr) {
  ProblemInstance qp = catalog_get("qp2");
  PhiFamily hpr = make_family("hpr");
  ProbeResult res =
      sublevel_probe(qp, hpr, qp.reference->lambda, 10.0, {1, 2, 4, 8, 16}, 300);
  EXPECT_EQ(res.verdict, ProbeVerdict::BoundedWithin);
}

TEST(Sublevel, EscapeForExponentialWithZeroMultiplier) {
  // linear objective, single inequality: Phi(., 0, c) == 0 makes the
  // augmented Lagrangian unbounded below
  ProblemInstance lin = catalog_get("lin1d");
  PhiFamily expf = make_family("exponential");
  ProbeResult res =
      sublevel_probe(lin, expf, BlockVector::zeros(lin.cone), 2.0, {1, 2, 4, 8, 16}, 200);
  EXPECT_EQ(res.verdict, ProbeVerdict::EscapeDetected);
  // witness replays
  const ExtendedReal v =
      lagrangian_value(lin, expf, res.witness_x, BlockVector::zeros(lin.cone), 2.0);
  EXPECT_LT(v.value(), lin.reference->f - 1e-9);
}

TEST(Sublevel, EmptySublevelAtHugeC) {
  ProblemInstance nlp = catalog_get("nlp1d");
  PhiFamily hpr = make_family("hpr");
  ProbeResult res =
      sublevel_probe(nlp, hpr, nlp.reference->lambda, 1e6, {1, 2, 4, 8}, 200);
  EXPECT_EQ(res.verdict, ProbeVerdict::BoundedWithin);
  EXPECT_EQ(res.hits, 0);
}

TEST(SecondOrder, Nlp1dVacuous) {
  ProblemInstance nlp = catalog_get("nlp1d");
  SecondOrderReport rep =
      second_order_check(nlp, nlp.reference->x, nlp.reference->lambda);
  EXPECT_EQ(rep.verdict, SecondOrderVerdict::SufficientHolds);
  EXPECT_TRUE(rep.vacuous);  // the active constraint gradient spans R
}

TEST(SecondOrder, Qp2MarginIsHessianEigenvalue) {
  ProblemInstance qp = catalog_get("qp2");
  SecondOrderReport rep = second_order_check(qp, qp.reference->x, qp.reference->lambda);
  EXPECT_EQ(rep.verdict, SecondOrderVerdict::SufficientHolds);
  EXPECT_FALSE(rep.vacuous);
  EXPECT_NEAR(rep.margin, 2.0, 1e-9);  // Hessian 2I restricted to the nullspace
}

TEST(SecondOrder, IndefiniteToyHoldsOnCriticalCone) {
  // min x1^2 - x2^2 s.t. x2 = 0: the critical cone is the x1 axis
  ProblemInstance p;
  p.name = "indef2d";
  p.dim = 2;
  p.objective = Objective::smooth(
      {[](const Vector& x) { return x(0) * x(0) - x(1) * x(1); },
       [](const Vector& x) { return vec({2.0 * x(0), -2.0 * x(1)}); },
       [](const Vector&) {
         Matrix h(2, 2);
         h << 2, 0, 0, -2;
         return h;
       }});
  p.cone = ConeSpec{ConeBlock::zero(1)};
  p.constraints.evaluate = [](const Vector& x) { return BlockVector({vec({x(1)})}); };
  p.constraints.jacobian_apply = [](const Vector&, const Vector& h) {
    return BlockVector({vec({h(1)})});
  };
  p.constraints.adjoint_apply = [](const Vector&, const BlockVector& w) {
    return vec({0.0, w.blocks[0](0)});
  };
  p.constraints.second_adjoint = [](const Vector&, const BlockVector&) {
    return Matrix(Matrix::Zero(2, 2));
  };
  SecondOrderReport rep =
      second_order_check(p, Vector::Zero(2), BlockVector({vec({0.0})}));
  EXPECT_EQ(rep.verdict, SecondOrderVerdict::SufficientHolds);
  EXPECT_NEAR(rep.margin, 2.0, 1e-9);

  // without the equality constraint the negative curvature is exposed
  ProblemInstance free = p;
  free.cone = ConeSpec{};
  free.constraints.evaluate = [](const Vector&) { return BlockVector{}; };
  free.constraints.adjoint_apply = [](const Vector& x, const BlockVector&) {
    return Vector(Vector::Zero(x.size()));
  };
  SecondOrderReport rep2 = second_order_check(free, Vector::Zero(2), BlockVector{});
  EXPECT_EQ(rep2.verdict, SecondOrderVerdict::ViolationFound);
}

TEST(SecondOrder, InapplicableForSocAndSdp) {
  ProblemInstance soc = catalog_get("soc-toy");
  EXPECT_EQ(second_order_check(soc, soc.reference->x, soc.reference->lambda).verdict,
            SecondOrderVerdict::Inapplicable);
  ProblemInstance sdp = catalog_get("sdp-toy");
  EXPECT_EQ(second_order_check(sdp, sdp.reference->x, sdp.reference->lambda).verdict,
            SecondOrderVerdict::Inapplicable);
}

TEST(Alternance, MinimaxAbsCompleteAtOrigin) {
  ProblemInstance mm = catalog_get("minimax-abs");
  AlternanceReport rep = alternance_check(mm, vec({0.0}), Matrix::Identity(1, 1));
  EXPECT_TRUE(rep.found);
  EXPECT_EQ(rep.p, 2);
  ASSERT_EQ(rep.determinants.size(), 2u);
  // V1 = 1, V2 = -1: Delta_1 = -1, Delta_2 = 1
  EXPECT_NEAR(std::abs(rep.determinants[0]), 1.0, 1e-12);
  EXPECT_LT(rep.determinants[0] * rep.determinants[1], 0.0);
}

TEST(Alternance, NotFoundOffOptimum) {
  ProblemInstance mm = catalog_get("minimax-abs");
  for (double x : {0.5, -0.25, 1.0}) {
    AlternanceReport rep = alternance_check(mm, vec({x}), Matrix::Identity(1, 1));
    EXPECT_FALSE(rep.found) << x;
  }
}

TEST(Alternance, SmoothStationaryPointIsNotComplete) {
  // smooth unconstrained objective with vanishing gradient: only the zero
  // vector enters the first pool, no complete alternance exists
  ProblemInstance p;
  p.name = "smooth1d";
  p.dim = 1;
  p.objective = Objective::smooth({[](const Vector& x) { return x(0) * x(0); },
                                   [](const Vector& x) { return vec({2.0 * x(0)}); },
                                   [](const Vector&) { return Matrix(2.0 * Matrix::Identity(1, 1)); }});
  p.cone = ConeSpec{};
  p.constraints.evaluate = [](const Vector&) { return BlockVector{}; };
  p.constraints.adjoint_apply = [](const Vector& x, const BlockVector&) {
    return Vector(Vector::Zero(x.size()));
  };
  AlternanceReport rep = alternance_check(p, vec({0.0}), Matrix::Identity(1, 1));
  EXPECT_FALSE(rep.found);
  EXPECT_EQ(rep.p, 1);  // a 1-point certificate exists (the zero gradient)
}

TEST(Alternance, InvariantUnderPoolPermutationAndZScaling) {
  ProblemInstance mm = catalog_get("minimax-abs");
  std::swap(mm.objective.pieces[0], mm.objective.pieces[1]);
  AlternanceReport rep = alternance_check(mm, vec({0.0}), Matrix::Identity(1, 1));
  EXPECT_TRUE(rep.found);
  AlternanceReport rep2 =
      alternance_check(mm, vec({0.0}), Matrix(7.5 * Matrix::Identity(1, 1)));
  EXPECT_TRUE(rep2.found);
  EXPECT_EQ(rep.p, rep2.p);
}

TEST(Kkt, ComplementarityScalesLinearlyInLambda) {
  Rng rng(23);
  ProblemInstance qp = catalog_get("qp2");
  for (int t = 0; t < 50; ++t) {
    Vector x = testing::random_vector(rng, 2);
    BlockVector l = testing::random_block_vector(rng, qp.cone, 0.0, 2.0);
    const double c1 = kkt_residual(qp, x, l).complementarity;
    const double c3 = kkt_residual(qp, x, 3.0 * l).complementarity;
    EXPECT_NEAR(c3, 3.0 * c1, 1e-10 * std::max(1.0, c1));
  }
}

TEST(Alternance, DimensionGuard) {
  ProblemInstance p;
  p.dim = 5;
  EXPECT_THROW(alternance_check(p, Vector::Zero(5), Matrix::Identity(5, 5)),
               std::invalid_argument);
}

}  // namespace
}  // namespace conelag
