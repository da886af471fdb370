// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "conelag/cones.hpp"

namespace conelag {

struct MissingDerivative : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingHessian : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NondifferentiablePoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Central-difference step per coordinate: cbrt(eps) * max(1, |x_i|).
inline double fd_step(double xi) {
  static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  return base * std::max(1.0, std::abs(xi));
}

inline Vector central_gradient(const std::function<double(const Vector&)>& f,
                               const Vector& x) {
  Vector g(x.size());
  Vector xp = x;
  for (int i = 0; i < x.size(); ++i) {
    const double h = fd_step(x(i));
    xp(i) = x(i) + h;
    const double fp = f(xp);
    xp(i) = x(i) - h;
    const double fm = f(xp);
    xp(i) = x(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace detail

/// One smooth piece of a (possibly minimax) objective. Gradient falls back
/// to central differences; a missing Hessian is a typed error so second
/// order analysis never silently differentiates twice.
struct Piece {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Matrix(const Vector&)> hessian;

  Vector grad(const Vector& x) const {
    if (gradient) return gradient(x);
    return detail::central_gradient(value, x);
  }
  Matrix hess(const Vector& x) const {
    if (!hessian) throw MissingHessian("objective piece has no Hessian");
    return hessian(x);
  }
};

/// f = max over pieces; the active set uses a 1e-10 tie tolerance.
struct Objective {
  std::vector<Piece> pieces;

  static Objective smooth(Piece p) { return Objective{{std::move(p)}}; }

  double value(const Vector& x) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : pieces) best = std::max(best, p.value(x));
    return best;
  }

  std::vector<int> active_set(const Vector& x, double tol = 1e-10) const {
    const double v = value(x);
    std::vector<int> act;
    for (size_t k = 0; k < pieces.size(); ++k)
      if (pieces[k].value(x) >= v - tol) act.push_back(static_cast<int>(k));
    return act;
  }

  bool is_smooth() const { return pieces.size() == 1; }

  /// Gradient where the active piece is unique.
  Vector gradient(const Vector& x) const {
    auto act = active_set(x);
    if (act.size() != 1)
      throw NondifferentiablePoint("objective: active set is not a singleton");
    return pieces[act[0]].grad(x);
  }
};

/// Constraint map G with directional derivatives. All derivative closures
/// are optional; finite-difference fallbacks keep the map usable, the
/// second order closures throw typed errors when absent.
struct ConstraintMap {
  std::function<BlockVector(const Vector&)> evaluate;
  // DG(x) h
  std::function<BlockVector(const Vector&, const Vector&)> jacobian_apply;
  // [DG(x)]* w
  std::function<Vector(const Vector&, const BlockVector&)> adjoint_apply;
  // sum_k w_k Hess G_k(x)  (w-weighted constraint Hessians, d x d)
  std::function<Matrix(const Vector&, const BlockVector&)> second_adjoint;

  BlockVector jac_apply(const Vector& x, const Vector& h) const {
    if (jacobian_apply) return jacobian_apply(x, h);
    const double s = detail::fd_step(h.norm());
    BlockVector gp = evaluate(x + s * h);
    BlockVector gm = evaluate(x - s * h);
    return (1.0 / (2.0 * s)) * (gp - gm);
  }

  Vector adj_apply(const Vector& x, const BlockVector& w) const {
    if (adjoint_apply) return adjoint_apply(x, w);
    Vector out(x.size());
    Vector e = Vector::Zero(x.size());
    for (int i = 0; i < x.size(); ++i) {
      e(i) = 1.0;
      out(i) = inner(w, jac_apply(x, e));
      e(i) = 0.0;
    }
    return out;
  }

  Matrix second_adj(const Vector& x, const BlockVector& w) const {
    if (!second_adjoint) throw MissingHessian("constraint map has no second derivatives");
    return second_adjoint(x, w);
  }
  bool has_second_order() const { return static_cast<bool>(second_adjoint); }
};

struct FeasibleSetA {
  enum class Kind { WholeSpace, Box } kind = Kind::WholeSpace;
  Vector lower, upper;

  static FeasibleSetA whole_space() { return FeasibleSetA{}; }
  static FeasibleSetA box(Vector lo, Vector hi) {
    if (lo.size() != hi.size() || (lo.array() > hi.array()).any())
      throw std::invalid_argument("FeasibleSetA: invalid box bounds");
    return FeasibleSetA{Kind::Box, std::move(lo), std::move(hi)};
  }

  bool is_whole_space() const { return kind == Kind::WholeSpace; }
  Vector project(const Vector& x) const {
    if (kind == Kind::WholeSpace) return x;
    return x.cwiseMax(lower).cwiseMin(upper);
  }
  bool contains(const Vector& x, double tol = 0.0) const {
    if (kind == Kind::WholeSpace) return true;
    return ((x - lower).array() >= -tol).all() && ((upper - x).array() >= -tol).all();
  }
};

/// Reference solution metadata for catalog problems.
struct Reference {
  Vector x;
  BlockVector lambda;
  double f;
  std::string note;
  // exmpl-exp carries a saddle multiplier that is deliberately outside K*
  bool multiplier_in_polar_cone = true;
};

struct ProblemInstance {
  std::string name;
  int dim = 0;
  Objective objective;
  ConstraintMap constraints;
  ConeSpec cone;
  FeasibleSetA set_a;
  std::optional<Reference> reference;

  double f(const Vector& x) const { return objective.value(x); }
  BlockVector g(const Vector& x) const { return constraints.evaluate(x); }

  /// Classical Lagrangian L(x, lambda) = f(x) + <lambda, G(x)>.
  double lagrangian(const Vector& x, const BlockVector& lambda) const {
    return objective.value(x) + inner(lambda, g(x));
  }
  /// D_x L for a smooth objective (or unique active piece).
  Vector lagrangian_grad_x(const Vector& x, const BlockVector& lambda) const {
    return objective.gradient(x) + constraints.adj_apply(x, lambda);
  }
  /// D^2_xx of the weighted Lagrangian L0(x, lambda, alpha).
  Matrix lagrangian_hess_x(const Vector& x, const BlockVector& lambda,
                           const std::vector<double>& piece_weights = {}) const {
    Matrix h = Matrix::Zero(dim, dim);
    if (piece_weights.empty()) {
      auto act = objective.active_set(x);
      if (act.size() != 1)
        throw NondifferentiablePoint("lagrangian_hess_x: supply piece weights");
      h = objective.pieces[act[0]].hess(x);
    } else {
      for (size_t k = 0; k < objective.pieces.size(); ++k)
        if (piece_weights[k] != 0.0) h += piece_weights[k] * objective.pieces[k].hess(x);
    }
    if (cone.ambient_dim() > 0) h += constraints.second_adj(x, lambda);
    return h;
  }
};

struct EvaluateResult {
  double f;
  std::vector<int> active_set;
  BlockVector g;
};

inline EvaluateResult evaluate(const ProblemInstance& problem, const Vector& x) {
  if (!x.allFinite()) throw std::domain_error("evaluate: non-finite point");
  EvaluateResult r{problem.f(x), problem.objective.active_set(x), problem.g(x)};
  if (!std::isfinite(r.f)) throw std::domain_error("evaluate: objective is non-finite");
  for (const auto& b : r.g.blocks)
    if (!b.allFinite()) throw std::domain_error("evaluate: constraint value is non-finite");
  return r;
}

struct FdCheckReport {
  double objective_error = 0.0;   // max relative error over pieces
  double constraint_error = 0.0;  // max relative error over Jacobian columns
  double max_error() const { return std::max(objective_error, constraint_error); }
};

/// Compare supplied first derivatives against central finite differences.
inline FdCheckReport fd_check(const ProblemInstance& problem, const Vector& x,
                              double step) {
  if (step <= 0) throw std::invalid_argument("fd_check: step must be positive");
  FdCheckReport rep;
  Vector xp = x;
  for (const auto& piece : problem.objective.pieces) {
    const Vector g = piece.grad(x);
    for (int i = 0; i < x.size(); ++i) {
      xp(i) = x(i) + step;
      const double fp = piece.value(xp);
      xp(i) = x(i) - step;
      const double fm = piece.value(xp);
      xp(i) = x(i);
      const double fd = (fp - fm) / (2.0 * step);
      rep.objective_error = std::max(
          rep.objective_error, std::abs(g(i) - fd) / std::max(1.0, std::abs(g(i))));
    }
  }
  if (problem.cone.ambient_dim() > 0) {
    Vector e = Vector::Zero(x.size());
    for (int i = 0; i < x.size(); ++i) {
      e(i) = 1.0;
      const BlockVector col = problem.constraints.jac_apply(x, e);
      e(i) = 0.0;
      xp(i) = x(i) + step;
      const BlockVector gp = problem.g(xp);
      xp(i) = x(i) - step;
      const BlockVector gm = problem.g(xp);
      xp(i) = x(i);
      const BlockVector fd = (1.0 / (2.0 * step)) * (gp - gm);
      const double scale = std::max(1.0, norm(col));
      rep.constraint_error = std::max(rep.constraint_error, norm(col - fd) / scale);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

namespace catalog_detail {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline ProblemInstance exmpl_exp() {
  ProblemInstance p;
  p.name = "exmpl-exp";
  p.dim = 2;
  p.objective = Objective::smooth(
      {[](const Vector& x) { return x.squaredNorm(); },
       [](const Vector& x) { return Vector(2.0 * x); },
       [](const Vector& x) { return Matrix(2.0 * Matrix::Identity(x.size(), x.size())); }});
  p.cone = ConeSpec{ConeBlock::orthant(2)};
  p.constraints.evaluate = [](const Vector& x) {
    Vector g(2);
    g(0) = x(0) + x(1) + 2.0;
    g(1) = 0.5 * (x(0) + 2.0) * (x(0) + 2.0) + 0.5 * (x(1) + 2.0) * (x(1) + 2.0) - 1.0;
    return BlockVector({g});
  };
  p.constraints.jacobian_apply = [](const Vector& x, const Vector& h) {
    Vector g(2);
    g(0) = h(0) + h(1);
    g(1) = (x(0) + 2.0) * h(0) + (x(1) + 2.0) * h(1);
    return BlockVector({g});
  };
  p.constraints.adjoint_apply = [](const Vector& x, const BlockVector& w) {
    Vector out(2);
    out(0) = w.blocks[0](0) + w.blocks[0](1) * (x(0) + 2.0);
    out(1) = w.blocks[0](0) + w.blocks[0](1) * (x(1) + 2.0);
    return out;
  };
  p.constraints.second_adjoint = [](const Vector&, const BlockVector& w) {
    return Matrix(w.blocks[0](1) * Matrix::Identity(2, 2));
  };
  p.reference = Reference{vec({-1.0, -1.0}), BlockVector({vec({-1.0, 3.0})}), 2.0,
                          "saddle multiplier, not a K*-multiplier", false};
  return p;
}

inline ProblemInstance qp2() {
  ProblemInstance p;
  p.name = "qp2";
  p.dim = 2;
  p.objective = Objective::smooth(
      {[](const Vector& x) {
         return (x(0) - 2.0) * (x(0) - 2.0) + (x(1) - 1.0) * (x(1) - 1.0);
       },
       [](const Vector& x) {
         Vector g(2);
         g << 2.0 * (x(0) - 2.0), 2.0 * (x(1) - 1.0);
         return g;
       },
       [](const Vector&) { return Matrix(2.0 * Matrix::Identity(2, 2)); }});
  p.cone = ConeSpec{ConeBlock::orthant(1)};
  p.constraints.evaluate = [](const Vector& x) {
    return BlockVector({vec({x(0) + x(1) - 1.0})});
  };
  p.constraints.jacobian_apply = [](const Vector&, const Vector& h) {
    return BlockVector({vec({h(0) + h(1)})});
  };
  p.constraints.adjoint_apply = [](const Vector&, const BlockVector& w) {
    Vector out(2);
    out << w.blocks[0](0), w.blocks[0](0);
    return out;
  };
  p.constraints.second_adjoint = [](const Vector&, const BlockVector&) {
    return Matrix(Matrix::Zero(2, 2));
  };
  p.reference = Reference{vec({1.0, 0.0}), BlockVector({vec({2.0})}), 2.0,
                          "analytic KKT of the 2-variable QP"};
  return p;
}

inline ProblemInstance nlp1d() {
  ProblemInstance p;
  p.name = "nlp1d";
  p.dim = 1;
  p.objective = Objective::smooth(
      {[](const Vector& x) { return x(0) * x(0); },
       [](const Vector& x) { return vec({2.0 * x(0)}); },
       [](const Vector&) { return Matrix(2.0 * Matrix::Identity(1, 1)); }});
  p.cone = ConeSpec{ConeBlock::orthant(1)};
  p.constraints.evaluate = [](const Vector& x) {
    return BlockVector({vec({1.0 - x(0)})});
  };
  p.constraints.jacobian_apply = [](const Vector&, const Vector& h) {
    return BlockVector({vec({-h(0)})});
  };
  p.constraints.adjoint_apply = [](const Vector&, const BlockVector& w) {
    return vec({-w.blocks[0](0)});
  };
  p.constraints.second_adjoint = [](const Vector&, const BlockVector&) {
    return Matrix(Matrix::Zero(1, 1));
  };
  p.reference = Reference{vec({1.0}), BlockVector({vec({2.0})}), 1.0, "hand KKT"};
  return p;
}

inline ProblemInstance minimax_abs() {
  ProblemInstance p;
  p.name = "minimax-abs";
  p.dim = 1;
  p.objective.pieces = {
      {[](const Vector& x) { return x(0); }, [](const Vector&) { return vec({1.0}); },
       [](const Vector&) { return Matrix(Matrix::Zero(1, 1)); }},
      {[](const Vector& x) { return -x(0); }, [](const Vector&) { return vec({-1.0}); },
       [](const Vector&) { return Matrix(Matrix::Zero(1, 1)); }}};
  p.cone = ConeSpec{};
  p.constraints.evaluate = [](const Vector&) { return BlockVector{}; };
  p.constraints.jacobian_apply = [](const Vector&, const Vector&) { return BlockVector{}; };
  p.constraints.adjoint_apply = [](const Vector& x, const BlockVector&) {
    return Vector(Vector::Zero(x.size()));
  };
  p.constraints.second_adjoint = [](const Vector&, const BlockVector&) {
    return Matrix(Matrix::Zero(1, 1));
  };
  p.reference = Reference{vec({0.0}), BlockVector{}, 0.0, "alternance certificate"};
  return p;
}

inline ProblemInstance soc_toy() {
  ProblemInstance p;
  p.name = "soc-toy";
  p.dim = 2;
  p.objective = Objective::smooth(
      {[](const Vector& x) { return x(0); }, [](const Vector&) { return vec({1.0, 0.0}); },
       [](const Vector&) { return Matrix(Matrix::Zero(2, 2)); }});
  p.cone = ConeSpec{ConeBlock::second_order(3)};
  p.constraints.evaluate = [](const Vector& x) {
    return BlockVector({vec({x(0), x(1), 1.0})});
  };
  p.constraints.jacobian_apply = [](const Vector&, const Vector& h) {
    return BlockVector({vec({h(0), h(1), 0.0})});
  };
  p.constraints.adjoint_apply = [](const Vector&, const BlockVector& w) {
    return vec({w.blocks[0](0), w.blocks[0](1)});
  };
  p.constraints.second_adjoint = [](const Vector&, const BlockVector&) {
    return Matrix(Matrix::Zero(2, 2));
  };
  p.reference = Reference{vec({1.0, 0.0}), BlockVector({vec({-1.0, 0.0, 1.0})}), 1.0,
                          "hand KKT, nondegenerate boundary solution"};
  return p;
}

inline ProblemInstance sdp_toy() {
  ProblemInstance p;
  p.name = "sdp-toy";
  p.dim = 2;
  p.objective = Objective::smooth(
      {[](const Vector& x) { return -x(0); }, [](const Vector&) { return vec({-1.0, 0.0}); },
       [](const Vector&) { return Matrix(Matrix::Zero(2, 2)); }});
  p.cone = ConeSpec{ConeBlock::psd(2), ConeBlock::zero(1)};
  p.constraints.evaluate = [](const Vector& x) {
    Matrix g0(2, 2);
    g0 << x(0) - 1.0, x(1), x(1), -1.0;
    return BlockVector({svec(g0), vec({x(1)})});
  };
  p.constraints.jacobian_apply = [](const Vector&, const Vector& h) {
    Matrix dg(2, 2);
    dg << h(0), h(1), h(1), 0.0;
    return BlockVector({svec(dg), vec({h(1)})});
  };
  p.constraints.adjoint_apply = [](const Vector&, const BlockVector& w) {
    const Matrix w0 = smat(w.blocks[0], 2);
    Vector out(2);
    out(0) = w0(0, 0);
    out(1) = 2.0 * w0(1, 0) + w.blocks[1](0);
    return out;
  };
  p.constraints.second_adjoint = [](const Vector&, const BlockVector&) {
    return Matrix(Matrix::Zero(2, 2));
  };
  Matrix lam0(2, 2);
  lam0 << 1.0, 0.0, 0.0, 0.0;
  p.reference = Reference{vec({1.0, 0.0}), BlockVector({svec(lam0), vec({0.0})}), -1.0,
                          "hand KKT, nondegenerate, strictly complementary"};
  return p;
}

inline ProblemInstance lin1d() {
  ProblemInstance p;
  p.name = "lin1d";
  p.dim = 1;
  p.objective = Objective::smooth(
      {[](const Vector& x) { return x(0); }, [](const Vector&) { return vec({1.0}); },
       [](const Vector&) { return Matrix(Matrix::Zero(1, 1)); }});
  p.cone = ConeSpec{ConeBlock::orthant(1)};
  p.constraints.evaluate = [](const Vector& x) { return BlockVector({vec({-x(0)})}); };
  p.constraints.jacobian_apply = [](const Vector&, const Vector& h) {
    return BlockVector({vec({-h(0)})});
  };
  p.constraints.adjoint_apply = [](const Vector&, const BlockVector& w) {
    return vec({-w.blocks[0](0)});
  };
  p.constraints.second_adjoint = [](const Vector&, const BlockVector&) {
    return Matrix(Matrix::Zero(1, 1));
  };
  p.reference = Reference{vec({0.0}), BlockVector({vec({1.0})}), 0.0, "hand KKT"};
  return p;
}

inline ProblemInstance disk1d() {
  ProblemInstance p;
  p.name = "disk1d";
  p.dim = 1;
  p.objective = Objective::smooth(
      {[](const Vector& x) { return x(0) * x(0); },
       [](const Vector& x) { return vec({2.0 * x(0)}); },
       [](const Vector&) { return Matrix(2.0 * Matrix::Identity(1, 1)); }});
  p.cone = ConeSpec{ConeBlock::orthant(1)};
  p.constraints.evaluate = [](const Vector& x) {
    return BlockVector({vec({x(0) * x(0) - 0.01})});
  };
  p.constraints.jacobian_apply = [](const Vector& x, const Vector& h) {
    return BlockVector({vec({2.0 * x(0) * h(0)})});
  };
  p.constraints.adjoint_apply = [](const Vector& x, const BlockVector& w) {
    return vec({2.0 * x(0) * w.blocks[0](0)});
  };
  p.constraints.second_adjoint = [](const Vector&, const BlockVector& w) {
    return Matrix(2.0 * w.blocks[0](0) * Matrix::Identity(1, 1));
  };
  p.reference = Reference{vec({0.0}), BlockVector({vec({0.0})}), 0.0,
                          "interior unconstrained minimum, inactive constraint"};
  return p;
}

/// Stationarity + complementarity + primal feasibility of the stored
/// reference, with uniform Danskin weights over the active objective set.
inline double reference_residual(const ProblemInstance& p) {
  const Reference& r = *p.reference;
  const auto act = p.objective.active_set(r.x);
  Vector grad = Vector::Zero(p.dim);
  for (int k : act) grad += p.objective.pieces[k].grad(r.x) / static_cast<double>(act.size());
  if (p.cone.ambient_dim() > 0) grad += p.constraints.adj_apply(r.x, r.lambda);
  double stat = grad.norm();
  if (!p.set_a.is_whole_space())
    stat = (r.x - p.set_a.project(r.x - grad)).norm();
  double compl_res = 0.0, primal = 0.0;
  if (p.cone.ambient_dim() > 0) {
    compl_res = std::abs(inner(r.lambda, p.g(r.x)));
    primal = distance(p.cone, p.g(r.x));
  }
  return std::max({stat, compl_res, primal, std::abs(p.f(r.x) - r.f)});
}

}  // namespace catalog_detail

inline std::vector<std::string> catalog_names() {
  return {"exmpl-exp", "qp2", "nlp1d", "minimax-abs", "soc-toy", "sdp-toy",
          "lin1d", "disk1d"};
}

inline ProblemInstance catalog_get(const std::string& name) {
  using namespace catalog_detail;
  ProblemInstance p;
  if (name == "exmpl-exp") p = exmpl_exp();
  else if (name == "qp2") p = qp2();
  else if (name == "nlp1d") p = nlp1d();
  else if (name == "minimax-abs") p = minimax_abs();
  else if (name == "soc-toy") p = soc_toy();
  else if (name == "sdp-toy") p = sdp_toy();
  else if (name == "lin1d") p = lin1d();
  else if (name == "disk1d") p = disk1d();
  else throw std::invalid_argument("catalog_get: unknown problem '" + name + "'");

  if (p.reference && catalog_detail::reference_residual(p) > 1e-6)
    throw std::logic_error("catalog_get: reference data fails the KKT check for " + name);
  if (p.reference && p.reference->multiplier_in_polar_cone &&
      p.cone.ambient_dim() > 0 && !polar_contains(p.cone, p.reference->lambda, 1e-8))
    throw std::logic_error("catalog_get: reference multiplier not in K* for " + name);
  return p;
}

}  // namespace conelag
