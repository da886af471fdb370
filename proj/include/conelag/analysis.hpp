// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "conelag/aug_lagrangians.hpp"
#include "conelag/kkt.hpp"
#include "conelag/solvers.hpp"

namespace conelag {

// ---------------------------------------------------------------------------
// Local saddle point verification
// ---------------------------------------------------------------------------

struct SaddleCheckConfig {
  std::vector<double> c_list = {0.5, 1.0, 2.0, 5.0};
  double radius = 3.0;          // inf-side box half width around x*
  std::optional<FeasibleSetA> inf_box;  // explicit inf-side box override
  int lambda_samples = 10000;   // sup-side multiplier samples
  double lambda_radius = 10.0;
  int multistart = 16;
  double tolerance = 1e-8;
  uint64_t seed = 777;
  MinimizerConfig inner;
};

struct SaddlePerC {
  double c = 0.0;
  double value = 0.0;      // L(x*, lambda*, c)
  double sup_value = 0.0;  // best multiplier found
  double inf_value = 0.0;  // best primal point found
  double sup_margin = 0.0;
  double inf_margin = 0.0;
  bool pass = false;
};

struct SaddleCheckReport {
  std::vector<SaddlePerC> per_c;
  bool pass = true;
  int lambda_samples = 0;
  int multistart = 0;
};

inline SaddleCheckReport local_saddle_check(const ProblemInstance& problem,
                                            const PhiFamily& family, const Vector& xstar,
                                            const BlockVector& lstar,
                                            const SaddleCheckConfig& cfg) {
  SaddleCheckReport rep;
  rep.lambda_samples = cfg.lambda_samples;
  rep.multistart = cfg.multistart;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int m = problem.cone.ambient_dim();

  for (double c : cfg.c_list) {
    SaddlePerC row;
    row.c = c;
    const ExtendedReal v0 = lagrangian_value(problem, family, xstar, lstar, c);
    if (!v0.is_finite())
      throw std::domain_error("local_saddle_check: L(x*, lambda*, c) is not finite");
    row.value = v0.value();

    // sup side: sampled multipliers around lambda*, coordinate rays, and a
    // short ascent along the lambda gradient
    double sup = row.value;
    const Vector l0 = lstar.flat();
    auto consider = [&](Vector lf) {
      BlockVector l = BlockVector::from_flat(problem.cone, lf);
      if (family.multiplier_cone == MultiplierCone::PolarK)
        l = project_polar(problem.cone, l);
      const ExtendedReal v = lagrangian_value(problem, family, xstar, l, c);
      if (v.is_finite()) sup = std::max(sup, v.value());
    };
    for (int s = 0; s < cfg.lambda_samples; ++s) {
      Vector lf = l0;
      for (int i = 0; i < m; ++i) lf(i) += cfg.lambda_radius * unit(rng);
      consider(lf);
    }
    for (int i = 0; i < m; ++i)
      for (double t : {1.0, cfg.lambda_radius / 2.0, cfg.lambda_radius}) {
        Vector lf = l0;
        lf(i) += t;
        consider(lf);
        lf(i) -= 2.0 * t;
        consider(lf);
      }
    try {  // local ascent from lambda*
      Vector lf = l0;
      for (int step = 0; step < 50; ++step) {
        BlockVector l = BlockVector::from_flat(problem.cone, lf);
        if (family.multiplier_cone == MultiplierCone::PolarK)
          l = project_polar(problem.cone, l);
        const BlockVector g = lagrangian_grad_lambda(problem, family, xstar, l, c);
        if (norm(g) < 1e-12) break;
        lf += 0.5 * g.flat();
        consider(lf);
      }
    } catch (const std::exception&) {
      // ascent may leave the differentiable region; sampling already covered it
    }
    row.sup_value = sup;
    row.sup_margin = row.value - sup;

    // inf side: multistart descent over the radius box around x*
    Vector lo = xstar.array() - cfg.radius;
    Vector hi = xstar.array() + cfg.radius;
    if (!problem.set_a.is_whole_space()) {
      lo = lo.cwiseMax(problem.set_a.lower);
      hi = hi.cwiseMin(problem.set_a.upper);
    }
    const FeasibleSetA box = cfg.inf_box ? *cfg.inf_box : FeasibleSetA::box(lo, hi);
    lo = box.lower;
    hi = box.upper;
    SmoothObjective obj{
        [&](const Vector& x) { return lagrangian_value(problem, family, x, lstar, c); },
        [&](const Vector& x) { return lagrangian_grad_x(problem, family, x, lstar, c); }};
    double inf = row.value;
    for (int s = 0; s < cfg.multistart; ++s) {
      Vector x0 = xstar;
      if (s > 0)
        for (int i = 0; i < problem.dim; ++i)
          x0(i) = 0.5 * (lo(i) + hi(i)) + 0.5 * (hi(i) - lo(i)) * unit(rng);
      if (!lagrangian_value(problem, family, x0, lstar, c).is_finite()) continue;
      MinimizeResult r = minimize_unconstrained(obj, x0, box, cfg.inner);
      inf = std::min(inf, r.value);
    }
    row.inf_value = inf;
    row.inf_margin = inf - row.value;
    row.pass = row.sup_margin >= -cfg.tolerance && row.inf_margin >= -cfg.tolerance;
    rep.pass = rep.pass && row.pass;
    rep.per_c.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Augmented dual function probe
// ---------------------------------------------------------------------------

struct DualValueResult {
  double theta_hat = 0.0;  // best found value: an upper bound on Theta
  Vector argmin;
  bool diverged = false;
  int starts = 0;
};

inline DualValueResult dual_value(const ProblemInstance& problem, const PhiFamily& family,
                                  const BlockVector& lambda, double c, int multistart,
                                  uint64_t seed = 4242,
                                  const MinimizerConfig& inner = {}) {
  if (c <= 0) throw std::invalid_argument("dual_value: c must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  SmoothObjective obj{
      [&](const Vector& x) { return lagrangian_value(problem, family, x, lambda, c); },
      [&](const Vector& x) { return lagrangian_grad_x(problem, family, x, lambda, c); }};
  DualValueResult res;
  res.theta_hat = std::numeric_limits<double>::infinity();
  for (int s = 0; s < multistart; ++s) {
    ++res.starts;
    Vector x0(problem.dim);
    if (s == 0 && problem.reference) x0 = problem.reference->x;
    else
      for (int i = 0; i < problem.dim; ++i) x0(i) = 5.0 * unit(rng);
    x0 = problem.set_a.project(x0);
    if (!lagrangian_value(problem, family, x0, lambda, c).is_finite()) continue;
    MinimizeResult r = minimize_unconstrained(obj, x0, problem.set_a, inner);
    res.diverged = res.diverged || r.status == SolveStatus::Diverged;
    if (r.value < res.theta_hat) {
      res.theta_hat = r.value;
      res.argmin = r.x;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Localization-principle sublevel probe for L(., lambda*, c)
// ---------------------------------------------------------------------------

inline ProbeResult sublevel_probe(const ProblemInstance& problem, const PhiFamily& family,
                                  const BlockVector& lstar, double c,
                                  const std::vector<double>& radius_schedule,
                                  int budget_per_shell, uint64_t seed = 1234) {
  if (c <= 0) throw std::invalid_argument("sublevel_probe: c must be positive");
  if (!problem.reference)
    throw std::invalid_argument("sublevel_probe: needs a reference optimal value");
  const double fstar = problem.reference->f;
  const Vector x0 = problem.reference->x;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  ProbeResult res;
  double outer_hit_radius = -1.0;
  for (double r : radius_schedule) {
    std::vector<Vector> dirs;
    for (int s = 0; s < budget_per_shell; ++s) {
      Vector dir(problem.dim);
      for (int i = 0; i < problem.dim; ++i) dir(i) = gauss(rng);
      dirs.push_back(r / dir.norm() * dir);
    }
    for (int i = 0; i < problem.dim; ++i) {
      Vector dir = Vector::Zero(problem.dim);
      dir(i) = r;
      dirs.push_back(dir);
      dirs.push_back(-dir);
    }
    for (const Vector& dir : dirs) {
      const Vector x = problem.set_a.project(x0 + dir);
      const ExtendedReal v = lagrangian_value(problem, family, x, lstar, c);
      if (v.is_finite() && v.value() < fstar - 1e-9) {
        ++res.hits;
        if (r >= outer_hit_radius) {
          outer_hit_radius = r;
          res.witness_x = x;
          res.witness_value = v.value();
        }
      }
    }
  }
  if (outer_hit_radius >= radius_schedule.back()) {
    res.verdict = ProbeVerdict::EscapeDetected;
    res.radius = outer_hit_radius;
  } else {
    res.verdict = ProbeVerdict::BoundedWithin;
    res.radius = outer_hit_radius < 0 ? radius_schedule.front() : outer_hit_radius + 1e-12;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Second order sufficient condition (polyhedral cones)
// ---------------------------------------------------------------------------

enum class SecondOrderVerdict { SufficientHolds, ViolationFound, Inapplicable };

struct SecondOrderReport {
  SecondOrderVerdict verdict = SecondOrderVerdict::Inapplicable;
  double margin = 0.0;  // min of h' D2L h over sampled critical directions
  Vector violation;     // direction with nonpositive curvature
  int directions_checked = 0;
  bool vacuous = false;  // critical cone reduced to {0}
};

inline SecondOrderReport second_order_check(const ProblemInstance& problem,
                                            const Vector& xstar, const BlockVector& lstar,
                                            int budget = 500, uint64_t seed = 99) {
  SecondOrderReport rep;
  for (const auto& b : problem.cone.blocks)
    if (b.kind == ConeKind::SecondOrder || b.kind == ConeKind::NegSemidefinite)
      return rep;  // sigma term out of scope: Inapplicable

  const double act_tol = 1e-8;
  const BlockVector g = problem.g(xstar);
  std::vector<Vector> eq_rows;    // <row, h> = 0
  std::vector<Vector> ineq_rows;  // <row, h> <= 0
  for (size_t b = 0; b < problem.cone.blocks.size(); ++b) {
    for (int i = 0; i < problem.cone.blocks[b].size; ++i) {
      Vector e = Vector::Zero(problem.cone.blocks[b].size);
      e(i) = 1.0;
      const Vector row =
          problem.constraints.adj_apply(xstar, exact_detail::embed_block(problem.cone, b, e));
      if (problem.cone.blocks[b].kind == ConeKind::Zero) {
        eq_rows.push_back(row);
      } else if (std::abs(g.blocks[b](i)) <= act_tol) {
        if (lstar.blocks[b](i) > act_tol) eq_rows.push_back(row);
        else ineq_rows.push_back(row);
      }
    }
  }

  // minimax: directions must keep the max of the active piece derivatives 0
  const auto active = problem.objective.active_set(xstar);
  std::vector<Vector> piece_grads;
  for (int k : active) piece_grads.push_back(problem.objective.pieces[k].grad(xstar));

  // basis of the nullspace of the equality rows
  Matrix a(static_cast<int>(eq_rows.size()), problem.dim);
  for (size_t i = 0; i < eq_rows.size(); ++i) a.row(static_cast<int>(i)) = eq_rows[i];
  Matrix nullspace;
  if (eq_rows.empty()) {
    nullspace = Matrix::Identity(problem.dim, problem.dim);
  } else {
    Eigen::FullPivLU<Matrix> lu(a);
    nullspace = lu.kernel();
    if (lu.dimensionOfKernel() == 0) {
      rep.verdict = SecondOrderVerdict::SufficientHolds;
      rep.vacuous = true;
      rep.margin = std::numeric_limits<double>::infinity();
      return rep;
    }
  }

  // weight candidates over the active objective pieces
  std::vector<std::vector<double>> weight_sets;
  {
    std::vector<double> uniform(problem.objective.pieces.size(), 0.0);
    for (int k : active) uniform[k] = 1.0 / static_cast<double>(active.size());
    weight_sets.push_back(uniform);
    if (active.size() > 1)
      for (int k : active) {
        std::vector<double> vertex(problem.objective.pieces.size(), 0.0);
        vertex[k] = 1.0;
        weight_sets.push_back(vertex);
      }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  rep.margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < budget; ++s) {
    Vector z(nullspace.cols());
    for (int i = 0; i < z.size(); ++i) z(i) = gauss(rng);
    Vector h = nullspace * z;
    if (h.norm() < 1e-12) continue;
    h /= h.norm();
    bool ok = true;
    for (const Vector& row : ineq_rows)
      if (row.dot(h) > 1e-10) {
        ok = false;
        break;
      }
    if (!ok) {
      h = -h;  // the cone is symmetric in the equality part; retry mirrored
      ok = true;
      for (const Vector& row : ineq_rows)
        if (row.dot(h) > 1e-10) {
          ok = false;
          break;
        }
    }
    if (!ok) continue;
    if (active.size() > 1) {  // directional derivative of the max must vanish
      double lp = -std::numeric_limits<double>::infinity();
      for (const Vector& pg : piece_grads) lp = std::max(lp, pg.dot(h));
      const BlockVector dgh = problem.constraints.jac_apply(xstar, h);
      lp += inner(lstar, dgh);
      if (std::abs(lp) > 1e-8) continue;
    }
    ++rep.directions_checked;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& w : weight_sets) {
      const Matrix hess = problem.lagrangian_hess_x(xstar, lstar, w);
      best = std::max(best, h.dot(hess * h));
    }
    if (best <= 1e-10) {
      rep.verdict = SecondOrderVerdict::ViolationFound;
      rep.violation = h;
      rep.margin = best;
      return rep;
    }
    rep.margin = std::min(rep.margin, best);
  }
  rep.verdict = SecondOrderVerdict::SufficientHolds;
  rep.vacuous = rep.directions_checked == 0;
  if (rep.vacuous) rep.margin = std::numeric_limits<double>::infinity();
  return rep;
}

// ---------------------------------------------------------------------------
// Alternance certificates
// ---------------------------------------------------------------------------

struct AlternanceReport {
  bool found = false;  // complete (d+1 point) alternance
  int p = 0;           // point count of the best certificate
  std::vector<Vector> vectors;
  std::vector<double> determinants;
};

namespace analysis_detail {

inline void arrangements(const std::vector<Vector>& pool, int count,
                         std::vector<std::vector<int>>& out) {
  out.clear();
  std::vector<int> cur;
  std::function<void()> rec = [&]() {
    if (static_cast<int>(cur.size()) == count) {
      out.push_back(cur);
      return;
    }
    for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
      bool used = false;
      for (int j : cur) used = used || j == i;
      if (used) continue;
      cur.push_back(i);
      rec();
      cur.pop_back();
    }
  };
  rec();
}

inline std::vector<double> leave_one_out_dets(const std::vector<Vector>& v, int d) {
  std::vector<double> dets;
  for (size_t s = 0; s < v.size(); ++s) {
    Matrix m(d, d);
    int col = 0;
    for (size_t i = 0; i < v.size(); ++i)
      if (i != s) m.col(col++) = v[i];
    dets.push_back(m.determinant());
  }
  return dets;
}

inline bool alternates(const std::vector<double>& dets, int p, double tol) {
  for (int s = 0; s < p; ++s)
    if (std::abs(dets[s]) <= tol) return false;
  for (size_t s = p; s < dets.size(); ++s)
    if (std::abs(dets[s]) > tol) return false;
  for (int s = 0; s + 1 < p; ++s)
    if (dets[s] * dets[s + 1] >= 0.0) return false;
  return true;
}

}  // namespace analysis_detail

/// Search for a p-point alternance at x*: vectors from the active objective
/// gradients, the adjoint images of polar-cone generators orthogonal to
/// G(x*), and the normal cone of the box; found means a complete (d+1
/// point) alternance with strictly alternating determinant signs.
inline AlternanceReport alternance_check(const ProblemInstance& problem, const Vector& xstar,
                                         const Matrix& z_basis, double tol = 1e-9) {
  const int d = problem.dim;
  if (d > 4) throw std::invalid_argument("alternance_check: exhaustive search needs d <= 4");
  for (const auto& b : problem.cone.blocks)
    if (b.kind == ConeKind::SecondOrder || b.kind == ConeKind::NegSemidefinite)
      throw std::invalid_argument("alternance_check: polyhedral cones only");
  if (z_basis.rows() != d || z_basis.cols() != d)
    throw std::invalid_argument("alternance_check: Z must be d x d");

  std::vector<Vector> pool_obj, pool_polar, pool_normal, pool_z;
  for (int k : problem.objective.active_set(xstar))
    pool_obj.push_back(problem.objective.pieces[k].grad(xstar));
  const double act_tol = 1e-8;
  if (problem.cone.ambient_dim() > 0) {
    const BlockVector g = problem.g(xstar);
    for (size_t b = 0; b < problem.cone.blocks.size(); ++b)
      for (int i = 0; i < problem.cone.blocks[b].size; ++i) {
        const bool eq = problem.cone.blocks[b].kind == ConeKind::Zero;
        if (!eq && std::abs(g.blocks[b](i)) > act_tol) continue;
        Vector e = Vector::Zero(problem.cone.blocks[b].size);
        e(i) = 1.0;
        const Vector row = problem.constraints.adj_apply(
            xstar, exact_detail::embed_block(problem.cone, b, e));
        pool_polar.push_back(row);
        if (eq) pool_polar.push_back(-row);  // K* component is all of R there
      }
  }
  if (!problem.set_a.is_whole_space()) {
    for (int i = 0; i < d; ++i) {
      if (xstar(i) >= problem.set_a.upper(i) - act_tol)
        pool_normal.push_back(Vector::Unit(d, i));
      if (xstar(i) <= problem.set_a.lower(i) + act_tol)
        pool_normal.push_back(-Vector::Unit(d, i));
    }
  }
  for (int i = 0; i < d; ++i) pool_z.push_back(z_basis.col(i));

  AlternanceReport rep;
  using analysis_detail::alternates;
  using analysis_detail::arrangements;
  using analysis_detail::leave_one_out_dets;

  for (int p = d + 1; p >= 1 && !rep.found; --p) {
    for (int k0 = 1; k0 <= p; ++k0) {
      for (int i0 = k0; i0 <= p; ++i0) {
        std::vector<std::vector<int>> sel1, sel2, sel3, selz;
        arrangements(pool_obj, k0, sel1);
        arrangements(pool_polar, i0 - k0, sel2);
        arrangements(pool_normal, p - i0, sel3);
        arrangements(pool_z, d + 1 - p, selz);
        for (const auto& s1 : sel1)
          for (const auto& s2 : sel2)
            for (const auto& s3 : sel3)
              for (const auto& sz : selz) {
                std::vector<Vector> v;
                for (int i : s1) v.push_back(pool_obj[i]);
                for (int i : s2) v.push_back(pool_polar[i]);
                for (int i : s3) v.push_back(pool_normal[i]);
                for (int i : sz) v.push_back(pool_z[i]);
                const std::vector<double> dets = leave_one_out_dets(v, d);
                if (alternates(dets, p, tol)) {
                  rep.p = std::max(rep.p, p);
                  if (p == d + 1) rep.found = true;
                  if (rep.p == p) {
                    rep.vectors = v;
                    rep.determinants = dets;
                  }
                  if (rep.found) return rep;
                }
              }
      }
    }
  }
  return rep;
}

}  // namespace conelag
