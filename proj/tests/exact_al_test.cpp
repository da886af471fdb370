// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#include "conelag/exact_al.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace conelag {
namespace {

using testing::Rng;

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

// construction -> (catalog problem, solver-side reference multiplier)
struct Case {
  ExactConstruction construction;
  std::string problem;
};

std::vector<Case> all_cases() {
  return {{ExactConstruction::HPR, "nlp1d"},
          {ExactConstruction::HPR, "qp2"},
          {ExactConstruction::Cubic, "nlp1d"},
          {ExactConstruction::PenalizedExp, "nlp1d"},
          {ExactConstruction::HeWuMeng, "nlp1d"},
          {ExactConstruction::SOC_RW, "soc-toy"},
          {ExactConstruction::SDP_RW, "sdp-toy"},
          {ExactConstruction::SDP_PenalizedRescale, "sdp-toy"}};
}

/// Solver-side multiplier whose kkt image is the catalog multiplier:
/// componentwise square root for the zeta-transformed constructions.
BlockVector solver_multiplier(const ExactALInstance& inst) {
  BlockVector lambda = inst.problem.reference->lambda;
  if (!inst.zeta_transform) return lambda;
  for (size_t b = 0; b < inst.problem.cone.blocks.size(); ++b) {
    const ConeBlock& blk = inst.problem.cone.blocks[b];
    if (blk.kind == ConeKind::NegativeOrthant) {
      lambda.blocks[b] = lambda.blocks[b].cwiseMax(0.0).cwiseSqrt();
    } else if (blk.kind == ConeKind::NegSemidefinite) {
      EigDecomposition e = sym_eig(smat(lambda.blocks[b], blk.size));
      Vector r = e.eigenvalues.cwiseMax(0.0).cwiseSqrt();
      lambda.blocks[b] = svec(e.eigenvectors * r.asDiagonal() * e.eigenvectors.transpose());
    }
  }
  return lambda;
}

TEST(ExactAl, Eta1Examples) {
  ProblemInstance nlp = catalog_get("nlp1d");
  EXPECT_NEAR(eta1(nlp, vec1(1.0), BlockVector({vec1(2.0)})), 0.0, 1e-15);
  // D_x L = 2 - 3 = -1, grad g = -1, g = 0: term (1 + 0)^2 = 1
  EXPECT_NEAR(eta1(nlp, vec1(1.0), BlockVector({vec1(3.0)})), 1.0, 1e-12);
}

TEST(ExactAl, Eta2Examples) {
  ProblemInstance nlp = catalog_get("nlp1d");
  EXPECT_NEAR(eta2(nlp, vec1(1.0), BlockVector({vec1(std::sqrt(2.0))})), 0.0, 1e-13);
  // lambda = 0 at the stationary point of f: only <grad f, grad g>^2 remains
  EXPECT_NEAR(eta2(nlp, vec1(0.0), BlockVector({vec1(0.0)})), 0.0, 1e-15);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    Vector x = testing::random_vector(rng, 1);
    BlockVector l({testing::random_vector(rng, 1)});
    EXPECT_GE(eta2(nlp, x, l), 0.0);
  }
}

TEST(ExactAl, EtaSocExamples) {
  ProblemInstance soc = catalog_get("soc-toy");
  EXPECT_LE(eta_soc(soc, soc.reference->x, soc.reference->lambda), 1e-10);

  // interior feasible point with an aligned multiplier: complementarity
  // pairing is strictly nonzero
  Vector x(2);
  x << 3.0, 0.0;  // g = (3, 0, 1) strictly inside Q
  BlockVector lambda({Vector(3)});
  lambda.blocks[0] << -1.0, 0.0, 0.5;
  EXPECT_GT(eta_soc(soc, x, lambda), 1e-3);

  // lambda = 0 at an unconstrained stationary point
  ProblemInstance tiny;
  tiny.name = "soc-tiny";
  tiny.dim = 2;
  tiny.objective = Objective::smooth(
      {[](const Vector& z) { return z.squaredNorm(); },
       [](const Vector& z) { return Vector(2.0 * z); },
       [](const Vector& z) { return Matrix(2.0 * Matrix::Identity(2, 2)); }});
  tiny.cone = ConeSpec{ConeBlock::second_order(3)};
  tiny.constraints.evaluate = [](const Vector& z) {
    Vector g(3);
    g << z(0), z(1), 1.0;
    return BlockVector({g});
  };
  tiny.constraints.adjoint_apply = [](const Vector&, const BlockVector& w) {
    Vector out(2);
    out << w.blocks[0](0), w.blocks[0](1);
    return out;
  };
  tiny.constraints.jacobian_apply = [](const Vector&, const Vector& h) {
    Vector g(3);
    g << h(0), h(1), 0.0;
    return BlockVector({g});
  };
  tiny.constraints.second_adjoint = [](const Vector&, const BlockVector&) {
    return Matrix(Matrix::Zero(2, 2));
  };
  EXPECT_NEAR(eta_soc(tiny, Vector::Zero(2), BlockVector::zeros(tiny.cone)), 0.0, 1e-15);
}

TEST(ExactAl, EtaSdpExamples) {
  ProblemInstance sdp = catalog_get("sdp-toy");
  EXPECT_LE(eta_sdp(sdp, sdp.reference->x, sdp.reference->lambda), 1e-10);
  // lambda0 = 0, mu = 0 reduces to the stationarity norm
  Vector x(2);
  x << 0.3, -0.4;
  const double e = eta_sdp(sdp, x, BlockVector::zeros(sdp.cone));
  EXPECT_NEAR(e, sdp.objective.gradient(x).squaredNorm(), 1e-14);
}

TEST(ExactAl, EtaNonnegativeAndZeroAtReferences) {
  Rng rng(17);
  for (const Case& cs : all_cases()) {
    ExactALInstance inst = make_exact_al(catalog_get(cs.problem), cs.construction);
    const BlockVector lref = solver_multiplier(inst);
    EXPECT_LE(eta_value(inst, inst.problem.reference->x, lref), 1e-10)
        << construction_name(cs.construction) << " " << cs.problem;
    for (int t = 0; t < 50; ++t) {
      Vector x = testing::random_vector(rng, inst.problem.dim);
      BlockVector l = testing::random_block_vector(rng, inst.problem.cone);
      EXPECT_GE(eta_value(inst, x, l), 0.0);
    }
  }
}

TEST(ExactAl, BarrierValues) {
  ProblemInstance qp = catalog_get("qp2");
  BarrierConfig cfg;  // alpha 1, kappa 3
  // feasible point: a = b = alpha
  Vector x(2);
  x << 0.2, 0.3;
  BlockVector l({vec1(1.5)});
  BarrierValues bar = barriers(qp, x, l, cfg);
  EXPECT_EQ(bar.a, cfg.alpha);
  EXPECT_EQ(bar.b, cfg.alpha);
  EXPECT_TRUE(bar.in_omega);
  EXPECT_LE(bar.p, cfg.alpha);
  EXPECT_GT(bar.p, 0.0);

  // violation max{0, g} = alpha^{1/kappa}: a = 0 and the domain is left
  Vector xb(2);
  xb << 1.0 + 0.5, 0.5;  // g = x1 + x2 - 1 = 1 = alpha^{1/3}
  bar = barriers(qp, xb, l, cfg);
  EXPECT_NEAR(bar.a, 0.0, 1e-12);
  EXPECT_FALSE(bar.in_omega);

  EXPECT_THROW((BarrierConfig{0.0, 3.0}).validate(), std::invalid_argument);
  EXPECT_THROW((BarrierConfig{1.0, 1.5}).validate(), std::invalid_argument);
  EXPECT_NO_THROW((BarrierConfig{1.0, 1.5}).validate(1.0));  // SDP case
}

TEST(ExactAl, ComplementarityIdentityAtReferences) {
  for (const Case& cs : all_cases()) {
    ExactALInstance inst = make_exact_al(catalog_get(cs.problem), cs.construction);
    const BlockVector lref = solver_multiplier(inst);
    const double fstar = inst.problem.reference->f;
    for (double c : {1.0, 10.0, 100.0}) {
      ExtendedReal v = exact_al_value(inst, inst.problem.reference->x, lref, c);
      ASSERT_TRUE(v.is_finite()) << construction_name(cs.construction);
      EXPECT_NEAR(v.value(), fstar, 1e-9)
          << construction_name(cs.construction) << " " << cs.problem << " c=" << c;
    }
  }
}

TEST(ExactAl, InfiniteOutsideOmega) {
  ExactALInstance inst = make_exact_al(catalog_get("qp2"), ExactConstruction::HPR);
  Vector x(2);
  x << 3.0, 3.0;  // g = 5, violation^kappa = 125 > alpha
  EXPECT_TRUE(exact_al_value(inst, x, BlockVector({vec1(1.0)}), 1.0).is_infinite());
}

TEST(ExactAl, MonotoneInC) {
  Rng rng(5);
  for (const Case& cs : all_cases()) {
    ExactALInstance inst = make_exact_al(catalog_get(cs.problem), cs.construction);
    int checked = 0;
    for (int t = 0; t < 600 && checked < 200; ++t) {
      Vector x = testing::random_vector(rng, inst.problem.dim, -1.0, 1.0);
      BlockVector l = testing::random_block_vector(rng, inst.problem.cone, -1.0, 1.0);
      double prev = -std::numeric_limits<double>::infinity();
      bool inside = true;
      for (double c : {1.0, 3.0, 10.0, 30.0, 100.0}) {
        ExtendedReal v = exact_al_value(inst, x, l, c);
        if (!v.is_finite()) {
          inside = false;
          break;
        }
        EXPECT_GE(v.value(), prev - 1e-9 * std::max(1.0, std::abs(prev)))
            << construction_name(cs.construction) << " " << cs.problem;
        prev = v.value();
      }
      if (inside) ++checked;
    }
    EXPECT_EQ(checked, 200) << cs.problem;
  }
}

// finite-difference Hessian of eta in lambda at the reference pair
TEST(ExactAl, LambdaHessianPositiveDefiniteAtNondegeneratePairs) {
  for (const char* name : {"soc-toy", "sdp-toy"}) {
    ProblemInstance prob = catalog_get(name);
    const Vector& x = prob.reference->x;
    const BlockVector& lref = prob.reference->lambda;
    auto eta_fn = [&](const BlockVector& l) {
      return std::string(name) == "soc-toy" ? eta_soc(prob, x, l) : eta_sdp(prob, x, l);
    };
    const Vector l0 = lref.flat();
    const int m = static_cast<int>(l0.size());
    Matrix hess(m, m);
    const double h = 1e-4;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Vector a = l0, b = l0, cvec = l0, d = l0;
        a(i) += h, a(j) += h;
        b(i) += h, b(j) -= h;
        cvec(i) -= h, cvec(j) += h;
        d(i) -= h, d(j) -= h;
        auto F = [&](const Vector& v) {
          return eta_fn(BlockVector::from_flat(prob.cone, v));
        };
        hess(i, j) = (F(a) - F(b) - F(cvec) + F(d)) / (4.0 * h * h);
      }
    EigDecomposition e = sym_eig(Matrix(0.5 * (hess + hess.transpose())));
    EXPECT_GT(e.eigenvalues(m - 1), 1e-6) << name;
  }
}

TEST(ExactAl, LocalExactnessSampling) {
  Rng rng(99);
  const double c = 100.0;
  for (const Case& cs : all_cases()) {
    ExactALInstance inst = make_exact_al(catalog_get(cs.problem), cs.construction);
    const BlockVector lref = solver_multiplier(inst);
    const Vector xref = inst.problem.reference->x;
    const ExtendedReal ref = exact_al_value(inst, xref, lref, c);
    ASSERT_TRUE(ref.is_finite());
    const int d = inst.problem.dim;
    const int m = inst.problem.cone.ambient_dim();
    int below = 0;
    for (int t = 0; t < 1000; ++t) {
      Vector dir = testing::random_vector(rng, d + m, -1.0, 1.0);
      dir *= 0.2 / std::max(1.0, dir.norm());
      Vector x = xref + dir.head(d);
      BlockVector l = lref;
      Vector lf = l.flat() + dir.tail(m);
      l = BlockVector::from_flat(inst.problem.cone, lf);
      ExtendedReal v = exact_al_value(inst, x, l, c);
      if (v.is_finite() && v.value() < ref.value() - 1e-9) ++below;
    }
    EXPECT_EQ(below, 0) << construction_name(cs.construction) << " " << cs.problem;
  }
}

TEST(ExactAl, AnalyticGradientsMatchFiniteDifferences) {
  Rng rng(31);
  for (const Case& cs : all_cases()) {
    if (cs.construction != ExactConstruction::HPR &&
        cs.construction != ExactConstruction::SOC_RW &&
        cs.construction != ExactConstruction::SDP_RW)
      continue;
    ExactALInstance inst = make_exact_al(catalog_get(cs.problem), cs.construction);
    int checked = 0;
    for (int t = 0; t < 200 && checked < 40; ++t) {
      Vector x = testing::random_vector(rng, inst.problem.dim, -0.6, 0.6);
      BlockVector l = testing::random_block_vector(rng, inst.problem.cone, -0.8, 0.8);
      const double c = 1.0 + static_cast<double>(rng() % 5);
      if (!exact_al_value(inst, x, l, c).is_finite()) continue;
      // stay away from the max-branch boundaries of the HPR terms
      if (cs.construction == ExactConstruction::HPR) {
        const BlockVector g = inst.problem.g(x);
        const BarrierValues bar = barriers(inst.problem, x, l, inst.barrier);
        bool near_kink = false;
        for (size_t b = 0; b < inst.problem.cone.blocks.size(); ++b)
          if (inst.problem.cone.blocks[b].kind == ConeKind::NegativeOrthant)
            for (int i = 0; i < inst.problem.cone.blocks[b].size; ++i)
              if (std::abs(g.blocks[b](i) + bar.p / c * l.blocks[b](i)) < 1e-3)
                near_kink = true;
        if (near_kink) continue;
      }
      ++checked;
      Vector gx_a, gx_f;
      BlockVector gl_a, gl_f;
      exact_al_grad(inst, x, l, c, gx_a, gl_a);
      exact_al_grad_fd(inst, x, l, c, gx_f, gl_f);
      EXPECT_LE((gx_a - gx_f).norm(), 2e-5 * std::max(1.0, gx_f.norm()))
          << construction_name(cs.construction) << " " << cs.problem;
      EXPECT_LE(norm(gl_a - gl_f), 2e-5 * std::max(1.0, norm(gl_f)))
          << construction_name(cs.construction) << " " << cs.problem;
    }
    EXPECT_GE(checked, 30) << cs.problem;
  }
}

TEST(ExactAl, SublevelProbeBoundedOnQp2) {
  ExactALInstance inst = make_exact_al(catalog_get("qp2"), ExactConstruction::HPR);
  ProbeResult res = exact_sublevel_probe(inst, 10.0, {1, 2, 4, 8, 16, 32}, 400);
  EXPECT_EQ(res.verdict, ProbeVerdict::BoundedWithin);
  EXPECT_LE(res.radius, 10.0);
}

TEST(ExactAl, SublevelProbeEscapesForHeWuMeng) {
  // the flat-pocket problem: at moderate c the lambda direction at the
  // unconstrained minimizer drives the exact AL below f*
  ExactALInstance inst = make_exact_al(catalog_get("disk1d"), ExactConstruction::HeWuMeng);
  ProbeResult res = exact_sublevel_probe(inst, 100.0, {1, 2, 4, 8, 16, 32, 64}, 400);
  EXPECT_EQ(res.verdict, ProbeVerdict::EscapeDetected);
  // the escape witness replays
  ExtendedReal v = exact_al_value(inst, res.witness_x, res.witness_lambda, 100.0);
  ASSERT_TRUE(v.is_finite());
  EXPECT_LT(v.value(), inst.problem.reference->f - 1e-9);
}

TEST(ExactAl, ConstructionConeValidation) {
  EXPECT_THROW(make_exact_al(catalog_get("soc-toy"), ExactConstruction::HPR),
               std::invalid_argument);
  EXPECT_THROW(make_exact_al(catalog_get("qp2"), ExactConstruction::SOC_RW),
               std::invalid_argument);
  EXPECT_THROW(make_exact_al(catalog_get("sdp-toy"), ExactConstruction::Cubic),
               std::invalid_argument);
  // sdp-toy has an equality block, fine for SDP_RW but not for eta2 forms
  EXPECT_NO_THROW(make_exact_al(catalog_get("sdp-toy"), ExactConstruction::SDP_RW));
}

}  // namespace
}  // namespace conelag
