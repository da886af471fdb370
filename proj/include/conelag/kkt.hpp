// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#pragma once

#include <cmath>
#include <vector>

#include "conelag/cones.hpp"
#include "conelag/problems.hpp"

namespace conelag {

/// KKT residual components; total is their maximum.
struct KKTResidual {
  double stationarity = 0.0;
  double primal = 0.0;
  double complementarity = 0.0;
  double dual = 0.0;
  bool dual_flagged = false;       // multiplier deliberately outside K*
  bool heuristic_weights = false;  // uniform Danskin weights were used

  double total() const { return std::max({stationarity, primal, complementarity, dual}); }
};

struct KKTOptions {
  // dual feasibility is reported as 0 when multipliers range over all of Y*
  bool full_dual_multipliers = false;
  std::vector<double> piece_weights;  // Danskin weights for minimax objectives
};

inline KKTResidual kkt_residual(const ProblemInstance& problem, const Vector& x,
                                const BlockVector& lambda, const KKTOptions& opts = {}) {
  KKTResidual r;
  std::vector<double> weights = opts.piece_weights;
  const auto active = problem.objective.active_set(x);
  if (weights.empty() && active.size() > 1) {
    weights.assign(problem.objective.pieces.size(), 0.0);
    for (int k : active) weights[k] = 1.0 / static_cast<double>(active.size());
    r.heuristic_weights = true;
  }

  Vector grad = Vector::Zero(problem.dim);
  if (weights.empty()) {
    grad = problem.objective.gradient(x);
  } else {
    for (size_t k = 0; k < weights.size(); ++k)
      if (weights[k] != 0.0) grad += weights[k] * problem.objective.pieces[k].grad(x);
  }
  if (problem.cone.ambient_dim() > 0) grad += problem.constraints.adj_apply(x, lambda);

  if (problem.set_a.is_whole_space())
    r.stationarity = grad.norm();
  else
    r.stationarity = (x - problem.set_a.project(x - grad)).norm();

  if (problem.cone.ambient_dim() > 0) {
    const BlockVector g = problem.g(x);
    r.primal = distance(problem.cone, g);
    r.complementarity = std::abs(inner(lambda, g));
    r.dual = opts.full_dual_multipliers ? 0.0 : polar_distance(problem.cone, lambda);
  }
  if (problem.reference && !problem.reference->multiplier_in_polar_cone &&
      (x - problem.reference->x).norm() < 1e-9)
    r.dual_flagged = true;
  return r;
}

}  // namespace conelag
