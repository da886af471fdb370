// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "conelag/cones.hpp"
#include "conelag/extended_real.hpp"
#include "conelag/problems.hpp"
#include "conelag/spectral.hpp"

namespace conelag {

struct MultiplierOutsideCone : std::domain_error {
  using std::domain_error::domain_error;
};

enum class MultiplierCone { FullDual, PolarK };

enum class AxiomId {
  A1, A2, A3, A4, A5, A6, A7, A8, A9, A10, A11, A12, A13, A4s, A6s,
};

inline const std::vector<AxiomId>& all_axioms() {
  static const std::vector<AxiomId> ids = {
      AxiomId::A1, AxiomId::A2,  AxiomId::A3,  AxiomId::A4,  AxiomId::A5,
      AxiomId::A6, AxiomId::A7,  AxiomId::A8,  AxiomId::A9,  AxiomId::A10,
      AxiomId::A11, AxiomId::A12, AxiomId::A13, AxiomId::A4s, AxiomId::A6s};
  return ids;
}

inline std::string axiom_name(AxiomId a) {
  switch (a) {
    case AxiomId::A1: return "A1";
    case AxiomId::A2: return "A2";
    case AxiomId::A3: return "A3";
    case AxiomId::A4: return "A4";
    case AxiomId::A5: return "A5";
    case AxiomId::A6: return "A6";
    case AxiomId::A7: return "A7";
    case AxiomId::A8: return "A8";
    case AxiomId::A9: return "A9";
    case AxiomId::A10: return "A10";
    case AxiomId::A11: return "A11";
    case AxiomId::A12: return "A12";
    case AxiomId::A13: return "A13";
    case AxiomId::A4s: return "A4s";
    case AxiomId::A6s: return "A6s";
  }
  return "?";
}

inline std::optional<AxiomId> axiom_from_name(const std::string& s) {
  for (AxiomId a : all_axioms())
    if (axiom_name(a) == s) return a;
  return std::nullopt;
}

enum class ClaimKind { Holds, HoldsIf, Fails };

struct Claim {
  ClaimKind kind = ClaimKind::Holds;
  std::string condition;  // set for HoldsIf

  static Claim holds() { return {ClaimKind::Holds, {}}; }
  static Claim fails() { return {ClaimKind::Fails, {}}; }
  static Claim holds_if(std::string cond) { return {ClaimKind::HoldsIf, std::move(cond)}; }
};

using ClaimTable = std::map<AxiomId, Claim>;

/// One Phi(y, lambda, c) family: value, optional analytic gradients, the
/// Phi0 map of the derivative axiom, and the declared axiom claims.
struct PhiFamily {
  using ValueFn = std::function<ExtendedReal(const ConeSpec&, const BlockVector&,
                                             const BlockVector&, double)>;
  using GradFn = std::function<BlockVector(const ConeSpec&, const BlockVector&,
                                           const BlockVector&, double)>;

  std::string id;
  MultiplierCone multiplier_cone = MultiplierCone::FullDual;
  ValueFn raw_value;
  GradFn raw_grad_y;       // may be null
  GradFn raw_grad_lambda;  // may be null
  std::function<BlockVector(const BlockVector&)> phi0;
  ClaimTable claims;
  std::vector<ConeKind> supported_kinds;

  bool supports(const ConeSpec& cone) const {
    for (const auto& b : cone.blocks) {
      bool ok = false;
      for (ConeKind k : supported_kinds) ok = ok || k == b.kind;
      if (!ok) return false;
    }
    return true;
  }

  void validate_call(const ConeSpec& cone, const BlockVector& y,
                     const BlockVector& lambda, double c) const {
    if (c <= 0) throw std::invalid_argument(id + ": penalty parameter must be positive");
    require_shaped(cone, y, id.c_str());
    require_shaped(cone, lambda, id.c_str());
    if (!supports(cone))
      throw std::invalid_argument(id + ": cone has unsupported block kinds");
    if (multiplier_cone == MultiplierCone::PolarK &&
        !polar_contains(cone, lambda, 1e-8 * std::max(1.0, norm(lambda))))
      throw MultiplierOutsideCone(id + ": multiplier outside K*");
  }

  ExtendedReal value(const ConeSpec& cone, const BlockVector& y,
                     const BlockVector& lambda, double c) const {
    validate_call(cone, y, lambda, c);
    return raw_value(cone, y, lambda, c);
  }

  bool has_grad_y() const { return static_cast<bool>(raw_grad_y); }

  BlockVector grad_y(const ConeSpec& cone, const BlockVector& y,
                     const BlockVector& lambda, double c) const {
    validate_call(cone, y, lambda, c);
    if (raw_grad_y) return raw_grad_y(cone, y, lambda, c);
    return grad_y_fd(cone, y, lambda, c);
  }

  BlockVector grad_lambda(const ConeSpec& cone, const BlockVector& y,
                          const BlockVector& lambda, double c) const {
    validate_call(cone, y, lambda, c);
    if (raw_grad_lambda) return raw_grad_lambda(cone, y, lambda, c);
    BlockVector g = lambda;
    for (size_t b = 0; b < g.blocks.size(); ++b)
      for (int i = 0; i < g.blocks[b].size(); ++i) {
        BlockVector lp = lambda, lm = lambda;
        const double h = 1e-6 * std::max(1.0, std::abs(lambda.blocks[b](i)));
        lp.blocks[b](i) += h;
        lm.blocks[b](i) -= h;
        const ExtendedReal fp = raw_value(cone, y, lp, c);
        const ExtendedReal fm = raw_value(cone, y, lm, c);
        if (!fp.is_finite() || !fm.is_finite())
          throw NondifferentiablePoint(id + ": grad_lambda next to +inf region");
        g.blocks[b](i) = (fp.value() - fm.value()) / (2.0 * h);
      }
    return g;
  }

  /// Central finite differences of the value in y, used when no analytic
  /// gradient is stored and by the derivative-axiom checker.
  BlockVector grad_y_fd(const ConeSpec& cone, const BlockVector& y,
                        const BlockVector& lambda, double c,
                        double step = 1e-6) const {
    BlockVector g = y;
    for (size_t b = 0; b < g.blocks.size(); ++b)
      for (int i = 0; i < g.blocks[b].size(); ++i) {
        BlockVector yp = y, ym = y;
        const double h = step * std::max(1.0, std::abs(y.blocks[b](i)));
        yp.blocks[b](i) += h;
        ym.blocks[b](i) -= h;
        const ExtendedReal fp = raw_value(cone, yp, lambda, c);
        const ExtendedReal fm = raw_value(cone, ym, lambda, c);
        if (!fp.is_finite() || !fm.is_finite())
          throw NondifferentiablePoint(id + ": finite differences next to +inf region");
        g.blocks[b](i) = (fp.value() - fm.value()) / (2.0 * h);
      }
    return g;
  }
};

inline ExtendedReal phi_value(const PhiFamily& family, const ConeSpec& cone,
                              const BlockVector& y, const BlockVector& lambda,
                              double c) {
  return family.value(cone, y, lambda, c);
}

inline BlockVector phi_grad_y(const PhiFamily& family, const ConeSpec& cone,
                              const BlockVector& y, const BlockVector& lambda,
                              double c) {
  return family.grad_y(cone, y, lambda, c);
}

// ---------------------------------------------------------------------------
// Family construction
// ---------------------------------------------------------------------------

/// Optional per-family parameter overrides; defaults give the canonical
/// instance of each example.
struct FamilyParams {
  std::optional<ScalarFunction> phi;
  std::optional<ScalarFunction> psi;
  std::optional<ScalarFunction> xi;
  double b = 1.0;            // p-th power shift
  bool full_dual = false;    // exponential-type families: Lambda = Y* instead
                             // of K* (several claims flip to Fails)
};

namespace family_detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Separable scalar family: per-coordinate formulas on orthant blocks,
/// the Hestenes-Powell-Rockafellar terms on equality blocks when allowed.
struct ScalarPhi {
  std::function<double(double, double, double)> value;  // may return +inf
  std::function<double(double, double, double)> dy;     // nullable
  std::function<double(double, double, double)> dl;     // nullable
  bool supports_equality = false;
};

inline PhiFamily::ValueFn separable_value(ScalarPhi s) {
  return [s](const ConeSpec& cone, const BlockVector& y, const BlockVector& l,
             double c) -> ExtendedReal {
    double total = 0.0;
    for (size_t b = 0; b < cone.blocks.size(); ++b) {
      const auto& yb = y.blocks[b];
      const auto& lb = l.blocks[b];
      if (cone.blocks[b].kind == ConeKind::Zero) {
        total += lb.dot(yb) + 0.5 * c * yb.squaredNorm();
        continue;
      }
      for (int i = 0; i < yb.size(); ++i) {
        const double v = s.value(yb(i), lb(i), c);
        if (std::isinf(v)) return ExtendedReal::infinity();
        total += v;
      }
    }
    return total;
  };
}

inline PhiFamily::GradFn separable_grad(std::function<double(double, double, double)> d,
                                        bool wrt_y) {
  if (!d) return nullptr;
  return [d, wrt_y](const ConeSpec& cone, const BlockVector& y, const BlockVector& l,
                    double c) {
    BlockVector g = y;
    for (size_t b = 0; b < cone.blocks.size(); ++b) {
      const auto& yb = y.blocks[b];
      const auto& lb = l.blocks[b];
      if (cone.blocks[b].kind == ConeKind::Zero) {
        g.blocks[b] = wrt_y ? Vector(lb + c * yb) : yb;
        continue;
      }
      for (int i = 0; i < yb.size(); ++i) g.blocks[b](i) = d(yb(i), lb(i), c);
    }
    return g;
  };
}

inline std::function<BlockVector(const BlockVector&)> phi0_identity() {
  return [](const BlockVector& l) { return l; };
}

inline std::function<BlockVector(const BlockVector&)> phi0_scale(double s) {
  return [s](const BlockVector& l) { return s * l; };
}

inline std::function<BlockVector(const BlockVector&)> phi0_componentwise(
    std::function<double(double)> f) {
  return [f](const BlockVector& l) {
    BlockVector out = l;
    for (auto& b : out.blocks)
      for (int i = 0; i < b.size(); ++i) b(i) = f(b(i));
    return out;
  };
}

inline ClaimTable claims_all_hold() {
  ClaimTable t;
  for (AxiomId a : all_axioms()) t[a] = Claim::holds();
  return t;
}

// Rockafellar-Wets with sigma = ||.||^2/2; the infimum has the projection
// closed form  Phi = (c/2) dist^2(y + lambda/c, K) - ||lambda||^2 / (2c),
// valid for every block kind.
inline PhiFamily make_rw_quadratic(const std::string& id,
                                   std::vector<ConeKind> kinds) {
  PhiFamily f;
  f.id = id;
  f.multiplier_cone = MultiplierCone::FullDual;
  f.supported_kinds = std::move(kinds);
  f.raw_value = [](const ConeSpec& cone, const BlockVector& y, const BlockVector& l,
                   double c) -> ExtendedReal {
    const BlockVector u = y + (1.0 / c) * l;
    const double d = distance(cone, u);
    return 0.5 * c * d * d - inner(l, l) / (2.0 * c);
  };
  f.raw_grad_y = [](const ConeSpec& cone, const BlockVector& y, const BlockVector& l,
                    double c) {
    const BlockVector u = y + (1.0 / c) * l;
    return c * (u - project(cone, u));
  };
  f.raw_grad_lambda = [](const ConeSpec& cone, const BlockVector& y,
                         const BlockVector& l, double c) {
    const BlockVector u = y + (1.0 / c) * l;
    return (u - project(cone, u)) - (1.0 / c) * l;
  };
  f.phi0 = phi0_identity();
  f.claims = claims_all_hold();
  return f;
}

inline PhiFamily make_hpr() {
  ScalarPhi s;
  s.value = [](double y, double l, double c) {
    return (l + c * y >= 0.0) ? l * y + 0.5 * c * y * y : -l * l / (2.0 * c);
  };
  s.dy = [](double y, double l, double c) {
    return (l + c * y >= 0.0) ? l + c * y : 0.0;
  };
  s.dl = [](double y, double l, double c) {
    return (l + c * y >= 0.0) ? y : -l / c;
  };
  s.supports_equality = true;
  PhiFamily f;
  f.id = "hpr";
  f.multiplier_cone = MultiplierCone::FullDual;
  f.supported_kinds = {ConeKind::NegativeOrthant, ConeKind::Zero};
  f.raw_value = separable_value(s);
  f.raw_grad_y = separable_grad(s.dy, true);
  f.raw_grad_lambda = separable_grad(s.dl, false);
  f.phi0 = phi0_identity();
  f.claims = claims_all_hold();
  return f;
}

inline PhiFamily make_cubic() {
  ScalarPhi s;
  auto root = [](double l) { return (l >= 0 ? 1.0 : -1.0) * std::sqrt(std::abs(l)); };
  s.value = [root](double y, double l, double c) {
    const double m = std::max(root(l) + c * y, 0.0);
    return (m * m * m - std::pow(std::abs(l), 1.5)) / (3.0 * c);
  };
  s.dy = [root](double y, double l, double c) {
    const double m = std::max(root(l) + c * y, 0.0);
    return m * m;
  };
  s.dl = [root](double y, double l, double c) -> double {
    if (l == 0.0) throw NondifferentiablePoint("cubic: d/dlambda at 0");
    const double m = std::max(root(l) + c * y, 0.0);
    const double dr = 1.0 / (2.0 * std::sqrt(std::abs(l)));
    return (m * m * dr - 0.5 * std::sqrt(std::abs(l)) * (l >= 0 ? 1.0 : -1.0)) / c;
  };
  PhiFamily f;
  f.id = "cubic";
  f.multiplier_cone = MultiplierCone::FullDual;
  f.supported_kinds = {ConeKind::NegativeOrthant};
  f.raw_value = separable_value(s);
  f.raw_grad_y = separable_grad(s.dy, true);
  f.raw_grad_lambda = separable_grad(s.dl, false);
  f.phi0 = phi0_identity();
  f.claims = claims_all_hold();
  return f;
}

inline PhiFamily make_mangasarian(const FamilyParams& params) {
  ScalarFunction phi = params.phi.value_or(ScalarFunction::cosh_minus_one());
  if (std::abs(phi.value(0.0)) > 1e-12 || std::abs(phi.derivative(0.0)) > 1e-12)
    throw std::invalid_argument("mangasarian: need phi(0) = phi'(0) = 0");
  // Overflow-safe difference (phi(m) - phi(l)) / c. The sign resolution of
  // the double-overflow case assumes |.|-monotone phi, true for the default.
  auto safe_diff = [phi](double m, double l, double c) {
    const double a = phi.value(m), b = phi.value(l);
    if (std::isinf(a) && std::isinf(b))
      return std::abs(m) > std::abs(l) ? kInf
                                       : (std::abs(m) < std::abs(l) ? -1e300 : 0.0);
    double d = (a - b) / c;
    if (std::isinf(d) && d < 0.0) d = -1e300;
    return d;
  };
  ScalarPhi s;
  s.value = [safe_diff](double y, double l, double c) {
    return safe_diff(std::max(c * y + l, 0.0), l, c);
  };
  s.dy = [phi](double y, double l, double c) {
    return phi.derivative(std::max(c * y + l, 0.0));
  };
  s.dl = [phi](double y, double l, double c) {
    const double m = c * y + l;
    return ((m > 0.0 ? phi.derivative(m) : 0.0) - phi.derivative(l)) / c;
  };
  PhiFamily f;
  f.id = "mangasarian";
  f.multiplier_cone = MultiplierCone::FullDual;
  f.supported_kinds = {ConeKind::NegativeOrthant, ConeKind::Zero};
  f.raw_value = [safe_diff, s](const ConeSpec& cone, const BlockVector& y,
                               const BlockVector& l, double c) -> ExtendedReal {
    double total = 0.0;
    for (size_t b = 0; b < cone.blocks.size(); ++b) {
      const auto& yb = y.blocks[b];
      const auto& lb = l.blocks[b];
      const bool eq = cone.blocks[b].kind == ConeKind::Zero;
      for (int i = 0; i < yb.size(); ++i) {
        const double v = eq ? safe_diff(c * yb(i) + lb(i), lb(i), c)
                            : s.value(yb(i), lb(i), c);
        if (std::isinf(v)) return ExtendedReal::infinity();
        total += v;
      }
    }
    return total;
  };
  f.raw_grad_y = [phi, s](const ConeSpec& cone, const BlockVector& y,
                          const BlockVector& l, double c) {
    BlockVector g = y;
    for (size_t b = 0; b < cone.blocks.size(); ++b) {
      const bool eq = cone.blocks[b].kind == ConeKind::Zero;
      for (int i = 0; i < y.blocks[b].size(); ++i)
        g.blocks[b](i) = eq ? phi.derivative(c * y.blocks[b](i) + l.blocks[b](i))
                            : s.dy(y.blocks[b](i), l.blocks[b](i), c);
    }
    return g;
  };
  f.raw_grad_lambda = [phi, s](const ConeSpec& cone, const BlockVector& y,
                               const BlockVector& l, double c) {
    BlockVector g = y;
    for (size_t b = 0; b < cone.blocks.size(); ++b) {
      const bool eq = cone.blocks[b].kind == ConeKind::Zero;
      for (int i = 0; i < y.blocks[b].size(); ++i) {
        const double yi = y.blocks[b](i), li = l.blocks[b](i);
        g.blocks[b](i) = eq ? (phi.derivative(c * yi + li) - phi.derivative(li)) / c
                            : s.dl(yi, li, c);
      }
    }
    return g;
  };
  f.phi0 = phi0_componentwise(phi.derivative);
  f.claims = claims_all_hold();
  return f;
}

// Exponential-type nonlinear rescaling, Lambda = K*.
inline PhiFamily make_exp_type(const std::string& id, ScalarFunction phi,
                               bool penalized, ScalarFunction xi,
                               bool full_dual = false) {
  if (std::abs(phi.value(0.0)) > 1e-12)
    throw std::invalid_argument(id + ": need phi(0) = 0");
  if (phi.value(1.0) <= phi.value(0.0))
    throw std::invalid_argument(id + ": phi must be strictly increasing");
  ScalarPhi s;
  s.value = [phi, penalized, xi](double y, double l, double c) {
    double v = (l == 0.0) ? 0.0 : l / c * phi.value(c * y);
    if (penalized) v += xi.value(c * y) / c;
    return v;
  };
  s.dy = [phi, penalized, xi](double y, double l, double c) {
    double d = (l == 0.0) ? 0.0 : l * phi.derivative(c * y);
    if (penalized) d += xi.derivative(c * y);
    return d;
  };
  s.dl = [phi](double y, double l, double c) { return phi.value(c * y) / c; };
  PhiFamily f;
  f.id = id;
  f.multiplier_cone = MultiplierCone::PolarK;
  f.supported_kinds = {ConeKind::NegativeOrthant};
  f.raw_value = separable_value(s);
  f.raw_grad_y = separable_grad(s.dy, true);
  f.raw_grad_lambda = separable_grad(s.dl, false);
  f.phi0 = phi0_scale(phi.derivative(0.0));
  f.claims = claims_all_hold();
  if (!penalized) {
    f.claims[AxiomId::A6] = Claim::fails();
    f.claims[AxiomId::A7] = Claim::fails();
    f.claims[AxiomId::A4s] = Claim::fails();
    f.claims[AxiomId::A6s] = Claim::fails();
  }
  if (full_dual) {
    // the classical worked saddle-point example uses Lambda = Y*; the sign
    // axioms then fail
    f.multiplier_cone = MultiplierCone::FullDual;
    for (AxiomId a : {AxiomId::A2, AxiomId::A4, AxiomId::A5, AxiomId::A8, AxiomId::A9,
                      AxiomId::A4s})
      f.claims[a] = Claim::fails();
  }
  return f;
}

// Polyak modified barrier, Lambda = K*; +inf once c y reaches the domain
// boundary of phi.
inline PhiFamily make_modified_barrier(const std::string& id, ScalarFunction phi,
                                       bool phi_bounded_below) {
  ScalarPhi s;
  s.value = [phi](double y, double l, double c) {
    if (c * y >= phi.eps0) return kInf;
    return l / c * phi.value(c * y);
  };
  s.dy = [phi](double y, double l, double c) -> double {
    if (c * y >= phi.eps0) throw NondifferentiablePoint("modified barrier: +inf region");
    return l * phi.derivative(c * y);
  };
  s.dl = [phi](double y, double l, double c) -> double {
    if (c * y >= phi.eps0) throw NondifferentiablePoint("modified barrier: +inf region");
    return phi.value(c * y) / c;
  };
  PhiFamily f;
  f.id = id;
  f.multiplier_cone = MultiplierCone::PolarK;
  f.supported_kinds = {ConeKind::NegativeOrthant};
  f.raw_value = separable_value(s);
  f.raw_grad_y = separable_grad(s.dy, true);
  f.raw_grad_lambda = separable_grad(s.dl, false);
  f.phi0 = phi0_scale(phi.derivative(0.0));
  f.claims = claims_all_hold();
  f.claims[AxiomId::A4s] = Claim::fails();
  if (!phi_bounded_below)
    f.claims[AxiomId::A13] =
        Claim::holds_if("phi bounded below or bounded feasible constraint image");
  return f;
}

inline PhiFamily make_pth_power(const FamilyParams& params) {
  const double b = params.b;
  ScalarFunction phi = params.phi.value_or(ScalarFunction::positive_part());
  if (b < 0 || phi.value(b) <= 0)
    throw std::invalid_argument("pth-power: need b >= 0 with phi(b) > 0");
  const double phib = phi.value(b);
  ScalarPhi s;
  s.value = [phi, b, phib](double y, double l, double c) {
    if (l == 0.0) return 0.0;
    return l / c * (std::pow(phi.value(y + b) / phib, c) - 1.0);
  };
  s.dy = [phi, b, phib](double y, double l, double c) {
    const double r = phi.value(y + b) / phib;
    if (r == 0.0 || l == 0.0) return 0.0;
    return l * std::pow(r, c - 1.0) * phi.derivative(y + b) / phib;
  };
  s.dl = [phi, b, phib](double y, double l, double c) {
    return (std::pow(phi.value(y + b) / phib, c) - 1.0) / c;
  };
  PhiFamily f;
  f.id = "pth-power";
  f.multiplier_cone = MultiplierCone::PolarK;
  f.supported_kinds = {ConeKind::NegativeOrthant};
  f.raw_value = separable_value(s);
  f.raw_grad_y = separable_grad(s.dy, true);
  f.raw_grad_lambda = separable_grad(s.dl, false);
  f.phi0 = phi0_scale(phi.derivative(b));
  f.claims = claims_all_hold();
  f.claims[AxiomId::A6] = Claim::fails();
  f.claims[AxiomId::A7] = Claim::fails();
  f.claims[AxiomId::A4s] = Claim::fails();
  f.claims[AxiomId::A6s] = Claim::fails();
  return f;
}

inline PhiFamily make_he_wu_meng() {
  // (1/c) int_0^{cy} (sqrt(t^2 + l^2) + t) dt, closed form. For u = cy < 0
  // both the quadratic and the log terms are evaluated through the
  // conjugate r - u to avoid the cancellation in r + u.
  auto log_term = [](double u, double l) {
    const double r = std::sqrt(u * u + l * l);
    if (u >= 0.0) return std::log(r + u) - std::log(std::abs(l));
    return std::log(std::abs(l)) - std::log(r - u);
  };
  auto value = [log_term](double y, double l, double c) {
    const double u = c * y;
    if (l == 0.0) return c * y * (std::abs(y) + y) / 2.0;
    const double quad = u >= 0.0
                            ? y / 2.0 * std::sqrt(u * u + l * l) + c * y * y / 2.0
                            : y * l * l / (2.0 * (std::sqrt(u * u + l * l) - u));
    return quad + l * l / (2.0 * c) * log_term(u, l);
  };
  ScalarPhi s;
  s.value = value;
  s.dy = [](double y, double l, double c) {
    const double u = c * y;
    const double r = std::sqrt(u * u + l * l);
    return u >= 0.0 ? r + u : l * l / (r - u);
  };
  s.dl = [log_term](double y, double l, double c) -> double {
    if (l == 0.0) return 0.0;  // Phi is even in lambda
    return l / c * log_term(c * y, l);
  };
  PhiFamily f;
  f.id = "he-wu-meng";
  f.multiplier_cone = MultiplierCone::FullDual;
  f.supported_kinds = {ConeKind::NegativeOrthant};
  f.raw_value = separable_value(s);
  f.raw_grad_y = separable_grad(s.dy, true);
  f.raw_grad_lambda = separable_grad(s.dl, false);
  f.phi0 = phi0_identity();
  f.claims = claims_all_hold();
  f.claims[AxiomId::A7] =
      Claim::holds_if("single inequality constraint; fails for l > 1 because "
                      "Phi_i(y_i, ., c) tends to -inf as y_i -> -inf");
  f.claims[AxiomId::A8] = Claim::fails();  // the family cannot see sign(lambda)
  f.claims[AxiomId::A13] = Claim::holds_if("bounded feasible constraint image");
  return f;
}

inline PhiFamily make_soc_rescale(const FamilyParams& params) {
  ScalarFunction psi = params.psi.value_or(ScalarFunction::exp_minus_one());
  if (std::abs(psi.value(0.0)) > 1e-12 || std::abs(psi.derivative(0.0) - 1.0) > 1e-12)
    throw std::invalid_argument("soc-rescale: need psi(0) = 0, psi'(0) = 1");
  PhiFamily f;
  f.id = "soc-rescale";
  f.multiplier_cone = MultiplierCone::PolarK;
  f.supported_kinds = {ConeKind::SecondOrder};
  // Spectral form of -(1/c) <lambda, Psi(-c y)>: with spectral values
  // s_12 = -c (y0 -+ r) of -cy and unit tail u, the pairing is
  // (1/2) psi(s1) (l0 - <lbar, u>) + (1/2) psi(s2) (l0 + <lbar, u>); both
  // coefficients are <= 0 on K*, which keeps psi overflow unambiguous.
  f.raw_value = [psi](const ConeSpec& cone, const BlockVector& y, const BlockVector& l,
                      double c) -> ExtendedReal {
    double total = 0.0;
    for (size_t b = 0; b < cone.blocks.size(); ++b) {
      const Vector& yb = y.blocks[b];
      const Vector& lb = l.blocks[b];
      const int tail = static_cast<int>(yb.size()) - 1;
      const double r = yb.tail(tail).norm();
      const double s1 = -c * (yb(0) - r), s2 = -c * (yb(0) + r);
      if (s1 >= psi.eps0 || s2 >= psi.eps0) return ExtendedReal::infinity();
      const double lu = r > 0 ? lb.tail(tail).dot(yb.tail(tail)) / r : 0.0;
      const double a1 = 0.5 * (lb(0) - lu), a2 = 0.5 * (lb(0) + lu);
      const double t1 = a1 == 0.0 ? 0.0 : psi.value(s1) * a1;
      const double t2 = a2 == 0.0 ? 0.0 : psi.value(s2) * a2;
      if (std::isinf(t1) || std::isinf(t2)) return ExtendedReal::infinity();
      total += -(t1 + t2) / c;
    }
    return total;
  };
  f.phi0 = phi0_identity();
  f.claims = claims_all_hold();
  f.claims[AxiomId::A5] = Claim::fails();
  f.claims[AxiomId::A4s] = Claim::fails();
  if (psi.eps0 == kInf) {
    // no barrier term: the lambda = 0 ray kills the divergence axioms
    f.claims[AxiomId::A6] = Claim::fails();
    f.claims[AxiomId::A7] = Claim::fails();
    f.claims[AxiomId::A6s] = Claim::fails();
  }
  if (psi.value(-1e9) < -1e8)  // psi unbounded below
    f.claims[AxiomId::A13] =
        Claim::holds_if("psi bounded below or bounded feasible constraint image");
  return f;
}

inline PhiFamily make_sdp_rescale(const std::string& id, const FamilyParams& params,
                                  bool penalized) {
  ScalarFunction psi = params.psi.value_or(penalized ? ScalarFunction::exp_minus_one()
                                                     : ScalarFunction::modified_frisch());
  ScalarFunction xi = params.xi.value_or(ScalarFunction::cubed_positive_part());
  if (std::abs(psi.value(0.0)) > 1e-12 || std::abs(psi.derivative(0.0) - 1.0) > 1e-12)
    throw std::invalid_argument(id + ": need psi(0) = 0, psi'(0) = 1");
  if (penalized && psi.eps0 != kInf)
    throw std::invalid_argument(id + ": penalized rescaling needs eps0 = +inf");
  PhiFamily f;
  f.id = id;
  f.multiplier_cone = MultiplierCone::PolarK;
  f.supported_kinds = {ConeKind::NegSemidefinite, ConeKind::Zero};
  // Spectral form of (1/c) <lambda0, Psi(c y0)>: with c y0 = E diag(rho) E^T
  // the pairing is sum_i psi(rho_i) q_i, q_i = e_i^T lambda0 e_i >= 0 on K*,
  // which keeps psi overflow unambiguous.
  f.raw_value = [psi, xi, penalized](const ConeSpec& cone, const BlockVector& y,
                                     const BlockVector& l, double c) -> ExtendedReal {
    double total = 0.0;
    for (size_t b = 0; b < cone.blocks.size(); ++b) {
      const auto& yb = y.blocks[b];
      const auto& lb = l.blocks[b];
      if (cone.blocks[b].kind == ConeKind::Zero) {
        total += lb.dot(yb) + 0.5 * c * yb.squaredNorm();
        continue;
      }
      const int n = cone.blocks[b].size;
      const EigDecomposition d = sym_eig(Matrix(c * smat(yb, n)));
      const Matrix lam = smat(lb, n);
      for (int i = 0; i < n; ++i) {
        const double rho = d.eigenvalues(i);
        if (rho >= psi.eps0) return ExtendedReal::infinity();
        const Vector e = d.eigenvectors.col(i);
        const double q = e.dot(lam * e);
        const double t = q == 0.0 ? 0.0 : psi.value(rho) * q;
        if (std::isinf(t)) return ExtendedReal::infinity();
        total += t / c;
        if (penalized) total += xi.value(rho) / c;
      }
    }
    return total;
  };
  f.phi0 = phi0_identity();
  f.claims = claims_all_hold();
  f.claims[AxiomId::A5] = Claim::holds_if(
      penalized ? "both Loewner operators matrix monotone" : "Loewner operator matrix monotone");
  if (!penalized) {
    f.claims[AxiomId::A4s] = Claim::fails();
    f.claims[AxiomId::A13] =
        Claim::holds_if("psi bounded below or bounded feasible constraint image");
  }
  return f;
}

}  // namespace family_detail

inline std::vector<std::string> family_ids() {
  return {"rw-quadratic",   "hpr",          "cubic",
          "mangasarian",    "exponential",  "log-sigmoid",
          "penalized-exp",  "modified-frisch", "modified-carroll",
          "pth-power",      "he-wu-meng",   "soc-rw",
          "sdp-rw",         "soc-rescale",  "sdp-rescale",
          "sdp-penalized-rescale"};
}

inline PhiFamily make_family(const std::string& id, const FamilyParams& params = {}) {
  using namespace family_detail;
  if (id == "rw-quadratic")
    return make_rw_quadratic(id, {ConeKind::NegativeOrthant, ConeKind::Zero,
                                  ConeKind::SecondOrder, ConeKind::NegSemidefinite});
  if (id == "soc-rw")
    return make_rw_quadratic(id, {ConeKind::SecondOrder, ConeKind::Zero});
  if (id == "sdp-rw")
    return make_rw_quadratic(id, {ConeKind::NegSemidefinite, ConeKind::Zero});
  if (id == "hpr") return make_hpr();
  if (id == "cubic") return make_cubic();
  if (id == "mangasarian") return make_mangasarian(params);
  if (id == "exponential")
    return make_exp_type(id, params.phi.value_or(ScalarFunction::exp_minus_one()),
                         false, ScalarFunction::cubed_positive_part(), params.full_dual);
  if (id == "log-sigmoid")
    return make_exp_type(id, params.phi.value_or(ScalarFunction::log_sigmoid()), false,
                         ScalarFunction::cubed_positive_part(), params.full_dual);
  if (id == "penalized-exp")
    return make_exp_type(id, params.phi.value_or(ScalarFunction::exp_minus_one()), true,
                         params.xi.value_or(ScalarFunction::cubed_positive_part()),
                         params.full_dual);
  if (id == "modified-frisch")
    return make_modified_barrier(id, params.phi.value_or(ScalarFunction::modified_frisch()),
                                 /*phi_bounded_below=*/false);
  if (id == "modified-carroll")
    return make_modified_barrier(id, params.phi.value_or(ScalarFunction::modified_carroll()),
                                 /*phi_bounded_below=*/true);
  if (id == "pth-power") return make_pth_power(params);
  if (id == "he-wu-meng") return make_he_wu_meng();
  if (id == "soc-rescale") return make_soc_rescale(params);
  if (id == "sdp-rescale") return make_sdp_rescale(id, params, false);
  if (id == "sdp-penalized-rescale") return make_sdp_rescale(id, params, true);
  throw std::invalid_argument("make_family: unknown family '" + id + "'");
}

/// Barrier-wrapped family Phi^(y, lambda, c) =
///   (alpha - dist(y,K)^kappa) * Phi(y / (alpha - dist(y,K)^kappa), lambda, c)
/// on { dist(y,K)^kappa < alpha }, +inf outside.
inline PhiFamily barrier_wrap(const PhiFamily& base, double alpha, double kappa) {
  if (alpha <= 0 || kappa <= 0)
    throw std::invalid_argument("barrier_wrap: alpha and kappa must be positive");
  PhiFamily f = base;
  f.id = base.id + "+barrier";
  PhiFamily::ValueFn inner_value = base.raw_value;
  f.raw_value = [inner_value, alpha, kappa](const ConeSpec& cone, const BlockVector& y,
                                            const BlockVector& l,
                                            double c) -> ExtendedReal {
    const double d = distance(cone, y);
    const double margin = alpha - std::pow(d, kappa);
    if (margin <= 0.0) return ExtendedReal::infinity();
    const ExtendedReal v = inner_value(cone, (1.0 / margin) * y, l, c);
    if (!v.is_finite()) return v;
    return margin * v.value();
  };
  f.raw_grad_y = nullptr;
  f.raw_grad_lambda = nullptr;
  return f;
}

// ---------------------------------------------------------------------------
// Augmented Lagrangian assembly
// ---------------------------------------------------------------------------

inline ExtendedReal lagrangian_value(const ProblemInstance& problem,
                                     const PhiFamily& family, const Vector& x,
                                     const BlockVector& lambda, double c) {
  const double fx = problem.f(x);
  if (problem.cone.ambient_dim() == 0) return fx;
  const ExtendedReal phi = family.value(problem.cone, problem.g(x), lambda, c);
  return ExtendedReal(fx) + phi;
}

/// D_x of the augmented Lagrangian via the chain rule; requires a unique
/// active objective piece.
inline Vector lagrangian_grad_x(const ProblemInstance& problem, const PhiFamily& family,
                                const Vector& x, const BlockVector& lambda, double c) {
  Vector g = problem.objective.gradient(x);
  if (problem.cone.ambient_dim() == 0) return g;
  const BlockVector gy = family.grad_y(problem.cone, problem.g(x), lambda, c);
  return g + problem.constraints.adj_apply(x, gy);
}

inline BlockVector lagrangian_grad_lambda(const ProblemInstance& problem,
                                          const PhiFamily& family, const Vector& x,
                                          const BlockVector& lambda, double c) {
  return family.grad_lambda(problem.cone, problem.g(x), lambda, c);
}

}  // namespace conelag
