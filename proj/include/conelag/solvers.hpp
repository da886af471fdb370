// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#pragma once

#include <deque>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conelag/aug_lagrangians.hpp"
#include "conelag/exact_al.hpp"
#include "conelag/kkt.hpp"
#include "conelag/problems.hpp"

namespace conelag {

struct MinimizerConfig {
  int max_iterations = 400;
  double gradient_tolerance = 1e-9;
  double sufficient_decrease = 1e-4;  // Armijo constant
  double backtrack_factor = 0.5;
  int quasi_newton_memory = 10;
  int max_linesearch = 60;

  void validate() const {
    if (max_iterations <= 0 || gradient_tolerance <= 0 || sufficient_decrease <= 0 ||
        backtrack_factor <= 0 || backtrack_factor >= 1 || quasi_newton_memory < 0)
      throw std::invalid_argument("MinimizerConfig: invalid parameters");
  }
};

enum class SolveStatus { Converged, IterationLimit, Diverged, LeftDomain };

inline std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::IterationLimit: return "IterationLimit";
    case SolveStatus::Diverged: return "Diverged";
    case SolveStatus::LeftDomain: return "LeftDomain";
  }
  return "?";
}

struct SolverReport {
  SolveStatus status = SolveStatus::IterationLimit;
  Vector x;
  BlockVector lambda;
  double value = 0.0;
  double kkt_total = -1.0;
  int outer_iterations = 0;
  int inner_iterations = 0;
  int skipped_multiplier_updates = 0;
  std::vector<double> c_trajectory;
};

/// Extended-real objective with gradient, minimized over a box (or the
/// whole space) by limited-memory BFGS with a projected backtracking line
/// search; +inf regions are treated as infeasible by step rejection.
struct SmoothObjective {
  std::function<ExtendedReal(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

struct MinimizeResult {
  Vector x;
  double value = 0.0;
  double stationarity = 0.0;
  SolveStatus status = SolveStatus::IterationLimit;
  int iterations = 0;
};

inline MinimizeResult minimize_unconstrained(const SmoothObjective& f, const Vector& x0,
                                             const FeasibleSetA& box,
                                             const MinimizerConfig& cfg) {
  cfg.validate();
  Vector x = box.project(x0);
  ExtendedReal fx = f.value(x);
  if (!fx.is_finite())
    throw std::domain_error("minimize_unconstrained: objective infinite at start");

  std::deque<Vector> s_hist, y_hist;
  std::deque<double> rho_hist;
  Vector g = f.gradient(x);
  if (!g.allFinite()) throw std::domain_error("minimize_unconstrained: non-finite gradient");

  MinimizeResult res;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    res.iterations = it;
    const double stat = (x - box.project(x - g)).norm();
    if (stat <= cfg.gradient_tolerance) {
      res.status = SolveStatus::Converged;
      break;
    }
    if (fx.value() < -1e14) {
      res.status = SolveStatus::Diverged;
      break;
    }

    // two-loop recursion
    Vector d = -g;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(d);
      d -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      const Vector& s = s_hist.back();
      const Vector& yv = y_hist.back();
      d *= s.dot(yv) / yv.squaredNorm();
    }
    for (size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(d);
      d += (alpha[i] - beta) * s_hist[i];
    }
    if (d.dot(g) >= 0) d = -g;  // safeguard: fall back to steepest descent

    // projected backtracking line search with the Armijo test
    double t = 1.0;
    Vector x_new = x;
    ExtendedReal f_new = fx;
    bool accepted = false;
    for (int ls = 0; ls < cfg.max_linesearch; ++ls) {
      x_new = box.project(x + t * d);
      const Vector step = x_new - x;
      if (step.norm() < 1e-16 * std::max(1.0, x.norm())) break;
      f_new = f.value(x_new);
      if (f_new.is_finite() &&
          f_new.value() <= fx.value() + cfg.sufficient_decrease * g.dot(step)) {
        accepted = true;
        break;
      }
      t *= cfg.backtrack_factor;
    }
    if (!accepted) {
      // no acceptable step: treat as converged to working precision
      res.status = stat <= 1e2 * cfg.gradient_tolerance ? SolveStatus::Converged
                                                        : SolveStatus::IterationLimit;
      break;
    }

    Vector g_new = f.gradient(x_new);
    if (!g_new.allFinite())
      throw std::domain_error("minimize_unconstrained: non-finite gradient");
    const Vector s = x_new - x;
    const Vector yv = g_new - g;
    if (s.dot(yv) > 1e-12 * s.norm() * yv.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(yv);
      rho_hist.push_back(1.0 / s.dot(yv));
      if (static_cast<int>(s_hist.size()) > cfg.quasi_newton_memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = x_new;
    fx = f_new;
    g = g_new;
  }
  res.x = x;
  res.value = fx.value();
  res.stationarity = (x - box.project(x - g)).norm();
  if (res.status == SolveStatus::IterationLimit &&
      res.stationarity <= cfg.gradient_tolerance)
    res.status = SolveStatus::Converged;
  return res;
}

// ---------------------------------------------------------------------------
// Classical augmented Lagrangian outer loop
// ---------------------------------------------------------------------------

struct AlmConfig {
  MinimizerConfig inner;
  double c0 = 10.0;
  double c_factor = 1.0;  // constant schedule by default
  double c_max = 1e8;
  int max_outer = 50;
  double kkt_tolerance = 1e-6;
};

/// Multiplier iteration lambda+ = D_y Phi(G(x), lambda, c), the update
/// consistent with the derivative axiom; for the quadratic family this is
/// the classical clipped update. Nondifferentiable points keep lambda.
inline SolverReport alm_solve(const ProblemInstance& problem, const PhiFamily& family,
                              const Vector& x0, const BlockVector& lambda0,
                              const AlmConfig& cfg) {
  if (!problem.objective.is_smooth())
    throw NondifferentiablePoint("alm_solve: minimax objectives are not supported");
  SolverReport rep;
  Vector x = x0;
  BlockVector lambda = lambda0;
  if (family.multiplier_cone == MultiplierCone::PolarK)
    lambda = project_polar(problem.cone, lambda);
  double c = cfg.c0;

  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    rep.outer_iterations = outer + 1;
    rep.c_trajectory.push_back(c);
    SmoothObjective inner_obj{
        [&](const Vector& z) { return lagrangian_value(problem, family, z, lambda, c); },
        [&](const Vector& z) { return lagrangian_grad_x(problem, family, z, lambda, c); }};
    MinimizeResult inner = minimize_unconstrained(inner_obj, x, problem.set_a, cfg.inner);
    rep.inner_iterations += inner.iterations;
    x = inner.x;
    if (inner.status == SolveStatus::Diverged) {
      rep.status = SolveStatus::Diverged;
      break;
    }

    BlockVector lambda_next = lambda;
    try {
      lambda_next = family.grad_y(problem.cone, problem.g(x), lambda, c);
      if (family.multiplier_cone == MultiplierCone::PolarK)
        lambda_next = project_polar(problem.cone, lambda_next);
    } catch (const NondifferentiablePoint&) {
      ++rep.skipped_multiplier_updates;  // keep the current multiplier
    }
    lambda = lambda_next;

    const KKTResidual r = kkt_residual(problem, x, lambda);
    rep.kkt_total = r.total();
    if (rep.kkt_total <= cfg.kkt_tolerance) {
      rep.status = SolveStatus::Converged;
      break;
    }
    c = std::min(c * std::max(1.0, cfg.c_factor), cfg.c_max);
  }
  rep.x = x;
  rep.lambda = lambda;
  rep.value = problem.f(x);
  return rep;
}

// ---------------------------------------------------------------------------
// Joint minimization of the penalized exact augmented Lagrangian
// ---------------------------------------------------------------------------

struct ExactSolveConfig {
  MinimizerConfig inner;
  double c0 = 1.0;
  double c_factor = 10.0;
  double c_max = 1e8;
  double kkt_tolerance = 1e-6;
  double eta_tolerance = 1e-8;
};

inline SolverReport exact_al_solve(const ExactALInstance& inst, const Vector& x0,
                                   const BlockVector& lambda0, const ExactSolveConfig& cfg) {
  const ProblemInstance& prob = inst.problem;
  const int d = prob.dim;
  const int m = prob.cone.ambient_dim();
  Vector z0(d + m);
  z0.head(d) = x0;
  z0.tail(m) = lambda0.flat();
  if (!exact_al_value(inst, x0, lambda0, cfg.c0).is_finite())
    throw std::domain_error("exact_al_solve: start outside the barrier domain");

  // the box constraint acts on the x part only
  FeasibleSetA stacked_box = FeasibleSetA::whole_space();
  if (!prob.set_a.is_whole_space()) {
    Vector lo = Vector::Constant(d + m, -std::numeric_limits<double>::infinity());
    Vector hi = Vector::Constant(d + m, std::numeric_limits<double>::infinity());
    lo.head(d) = prob.set_a.lower;
    hi.head(d) = prob.set_a.upper;
    stacked_box = FeasibleSetA::box(lo, hi);
  }

  SolverReport rep;
  Vector z = z0;
  double c = cfg.c0;
  while (true) {
    rep.c_trajectory.push_back(c);
    ++rep.outer_iterations;
    SmoothObjective obj{
        [&](const Vector& zz) {
          return exact_al_value(inst, zz.head(d),
                                BlockVector::from_flat(prob.cone, zz.tail(m)), c);
        },
        [&](const Vector& zz) {
          Vector gx;
          BlockVector gl;
          exact_al_grad(inst, zz.head(d), BlockVector::from_flat(prob.cone, zz.tail(m)), c,
                        gx, gl);
          Vector g(d + m);
          g.head(d) = gx;
          g.tail(m) = gl.flat();
          return g;
        }};
    MinimizeResult inner;
    try {
      inner = minimize_unconstrained(obj, z, stacked_box, cfg.inner);
    } catch (const NondifferentiablePoint&) {
      rep.status = SolveStatus::LeftDomain;
      break;
    }
    rep.inner_iterations += inner.iterations;
    z = inner.x;
    if (inner.status == SolveStatus::Diverged) {
      rep.status = SolveStatus::Diverged;
      break;
    }

    const Vector x = z.head(d);
    const BlockVector lambda = BlockVector::from_flat(prob.cone, z.tail(m));
    const BlockVector lambda_kkt = kkt_multiplier(inst, lambda);
    const double eta = eta_value(inst, x, lambda);
    const KKTResidual r = kkt_residual(prob, x, lambda_kkt);
    rep.kkt_total = r.total();
    rep.x = x;
    rep.lambda = lambda_kkt;
    rep.value = prob.f(x);
    if (rep.kkt_total <= cfg.kkt_tolerance && eta <= cfg.eta_tolerance) {
      rep.status = SolveStatus::Converged;
      break;
    }
    if (c >= cfg.c_max) {
      rep.status = SolveStatus::IterationLimit;
      break;
    }
    c *= cfg.c_factor;  // stalled below tolerance: escalate the penalty
  }
  return rep;
}

}  // namespace conelag
