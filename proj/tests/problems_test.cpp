// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#include "conelag/problems.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace conelag {
namespace {

using testing::Rng;

TEST(Problems, EvaluateExmplExp) {
  ProblemInstance p = catalog_get("exmpl-exp");
  Vector x(2);
  x << -1.0, -1.0;
  auto r = evaluate(p, x);
  EXPECT_NEAR(r.f, 2.0, 1e-15);
  EXPECT_NEAR(r.g.blocks[0](0), 0.0, 1e-15);
  EXPECT_NEAR(r.g.blocks[0](1), 0.0, 1e-15);
  EXPECT_EQ(r.active_set.size(), 1u);
}

TEST(Problems, EvaluateQp2AtReference) {
  ProblemInstance p = catalog_get("qp2");
  auto r = evaluate(p, p.reference->x);
  EXPECT_NEAR(r.f, p.reference->f, 1e-14);
}

TEST(Problems, MinimaxActiveSet) {
  ProblemInstance p = catalog_get("minimax-abs");
  Vector x(1);
  x << 0.0;
  EXPECT_EQ(evaluate(p, x).active_set.size(), 2u);
  x << 0.5;
  auto act = evaluate(p, x).active_set;
  ASSERT_EQ(act.size(), 1u);
  EXPECT_EQ(act[0], 0);
  EXPECT_THROW(p.objective.gradient(Vector::Zero(1)), NondifferentiablePoint);
}

TEST(Problems, FdCheckQuadratic) {
  ProblemInstance p = catalog_get("qp2");
  Vector x(2);
  x << 0.3, -0.7;
  auto rep = fd_check(p, x, 1e-5);
  EXPECT_LE(rep.objective_error, 1e-7);
  EXPECT_LE(rep.constraint_error, 1e-10);  // linear constraint map
}

TEST(Problems, FdCheckSdpToy) {
  ProblemInstance p = catalog_get("sdp-toy");
  Vector x(2);
  x << 0.4, 0.9;
  auto rep = fd_check(p, x, 1e-5);
  EXPECT_LE(rep.max_error(), 1e-5);
}

TEST(Problems, FdCheckAllCatalogInstances) {
  Rng rng(88);
  for (const auto& name : catalog_names()) {
    ProblemInstance p = catalog_get(name);
    Vector x = testing::random_vector(rng, p.dim, -0.8, 0.8);
    auto rep = fd_check(p, x, 1e-5);
    EXPECT_LE(rep.max_error(), 1e-4) << name;
  }
}

TEST(Problems, CatalogReferences) {
  ProblemInstance p = catalog_get("exmpl-exp");
  EXPECT_NEAR(p.reference->f, 2.0, 0);
  EXPECT_FALSE(p.reference->multiplier_in_polar_cone);

  p = catalog_get("nlp1d");
  EXPECT_NEAR(p.reference->x(0), 1.0, 0);
  EXPECT_NEAR(p.reference->lambda.blocks[0](0), 2.0, 0);

  p = catalog_get("minimax-abs");
  EXPECT_NEAR(p.reference->x(0), 0.0, 0);

  EXPECT_THROW(catalog_get("no-such-problem"), std::invalid_argument);
  EXPECT_GE(catalog_names().size(), 6u);
}

TEST(Problems, CatalogReferenceInvariants) {
  for (const auto& name : catalog_names()) {
    ProblemInstance p = catalog_get(name);
    ASSERT_TRUE(p.reference.has_value()) << name;
    const Reference& r = *p.reference;
    if (p.cone.ambient_dim() == 0) continue;
    EXPECT_LE(std::abs(inner(r.lambda, p.g(r.x))), 1e-8) << name;
    if (r.multiplier_in_polar_cone)
      EXPECT_TRUE(polar_contains(p.cone, r.lambda, 1e-8)) << name;
    else
      EXPECT_FALSE(polar_contains(p.cone, r.lambda, 1e-8)) << name;
  }
}

TEST(Problems, AdjointConsistency) {
  Rng rng(412);
  for (const auto& name : catalog_names()) {
    ProblemInstance p = catalog_get(name);
    if (p.cone.ambient_dim() == 0) continue;
    for (int t = 0; t < 20; ++t) {
      Vector x = testing::random_vector(rng, p.dim);
      Vector h = testing::random_vector(rng, p.dim);
      BlockVector w = testing::random_block_vector(rng, p.cone);
      const double lhs = inner(w, p.constraints.jac_apply(x, h));
      const double rhs = p.constraints.adj_apply(x, w).dot(h);
      EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(lhs))) << name;
    }
  }
}

TEST(Problems, EvaluateRejectsNonFinite) {
  ProblemInstance p = catalog_get("qp2");
  Vector x(2);
  x << std::numeric_limits<double>::quiet_NaN(), 0.0;
  EXPECT_THROW(evaluate(p, x), std::domain_error);
}

TEST(Problems, MissingHessianIsTypedError) {
  ProblemInstance p = catalog_get("qp2");
  p.objective.pieces[0].hessian = nullptr;
  Vector x = Vector::Zero(2);
  EXPECT_THROW(p.objective.pieces[0].hess(x), MissingHessian);
}

TEST(Problems, BoxFeasibleSet) {
  Vector lo(2), hi(2);
  lo << -1.0, -1.0;
  hi << 1.0, 2.0;
  FeasibleSetA box = FeasibleSetA::box(lo, hi);
  Vector x(2);
  x << 3.0, -5.0;
  Vector px = box.project(x);
  EXPECT_EQ(px(0), 1.0);
  EXPECT_EQ(px(1), -1.0);
  EXPECT_TRUE(box.contains(px));
  EXPECT_FALSE(box.contains(x));
  EXPECT_THROW(FeasibleSetA::box(hi, lo), std::invalid_argument);
}

}  // namespace
}  // namespace conelag
