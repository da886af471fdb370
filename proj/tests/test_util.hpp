// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#pragma once

#include <random>

#include "conelag/cones.hpp"

namespace conelag::testing {

using Rng = std::mt19937_64;

inline Vector random_vector(Rng& rng, int n, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline Matrix random_symmetric(Rng& rng, int n, double scale = 1.0) {
  Matrix a(n, n);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

inline BlockVector random_block_vector(Rng& rng, const ConeSpec& cone,
                                       double lo = -2.0, double hi = 2.0) {
  BlockVector v;
  for (const auto& b : cone.blocks) {
    if (b.kind == ConeKind::NegSemidefinite) {
      v.blocks.push_back(svec(random_symmetric(rng, b.size, std::max(std::abs(lo), hi))));
    } else {
      v.blocks.push_back(random_vector(rng, b.ambient_dim(), lo, hi));
    }
  }
  return v;
}

/// Random point of K (projection of a box sample).
inline BlockVector random_feasible(Rng& rng, const ConeSpec& cone) {
  return project(cone, random_block_vector(rng, cone));
}

}  // namespace conelag::testing
