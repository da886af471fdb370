// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "conelag/aug_lagrangians.hpp"
#include "conelag/cones.hpp"
#include "conelag/problems.hpp"
#include "conelag/spectral.hpp"

namespace conelag {

struct BarrierConfig {
  double alpha = 1.0;
  double kappa = 3.0;

  void validate(double min_kappa = 2.0) const {
    if (alpha <= 0.0) throw std::invalid_argument("BarrierConfig: alpha must be positive");
    if (kappa <= min_kappa)
      throw std::invalid_argument("BarrierConfig: kappa too small for this construction");
  }
};

enum class EtaVariant { Eta1_NLP, Eta2_NLP, Eta_SOC, Eta_SDP };

enum class ExactConstruction {
  HPR,
  Cubic,
  PenalizedExp,
  HeWuMeng,
  SOC_RW,
  SDP_RW,
  SDP_PenalizedRescale,
};

inline std::string construction_name(ExactConstruction c) {
  switch (c) {
    case ExactConstruction::HPR: return "hpr";
    case ExactConstruction::Cubic: return "cubic";
    case ExactConstruction::PenalizedExp: return "penalized-exp";
    case ExactConstruction::HeWuMeng: return "he-wu-meng";
    case ExactConstruction::SOC_RW: return "soc-rw";
    case ExactConstruction::SDP_RW: return "sdp-rw";
    case ExactConstruction::SDP_PenalizedRescale: return "sdp-penalized-rescale";
  }
  return "?";
}

inline std::optional<ExactConstruction> construction_from_name(const std::string& s) {
  for (ExactConstruction c :
       {ExactConstruction::HPR, ExactConstruction::Cubic, ExactConstruction::PenalizedExp,
        ExactConstruction::HeWuMeng, ExactConstruction::SOC_RW, ExactConstruction::SDP_RW,
        ExactConstruction::SDP_PenalizedRescale})
    if (construction_name(c) == s) return c;
  return std::nullopt;
}

namespace exact_detail {

inline bool is_nlp_cone(const ConeSpec& cone, bool allow_equality) {
  for (const auto& b : cone.blocks) {
    if (b.kind == ConeKind::NegativeOrthant) continue;
    if (b.kind == ConeKind::Zero && allow_equality) continue;
    return false;
  }
  return cone.ambient_dim() > 0;
}

inline bool is_soc_cone(const ConeSpec& cone) {
  bool soc = false;
  for (const auto& b : cone.blocks) {
    if (b.kind == ConeKind::SecondOrder) soc = true;
    else if (b.kind != ConeKind::Zero) return false;
  }
  return soc;
}

inline bool is_sdp_cone(const ConeSpec& cone) {
  int psd = 0;
  for (const auto& b : cone.blocks) {
    if (b.kind == ConeKind::NegSemidefinite) ++psd;
    else if (b.kind != ConeKind::Zero) return false;
  }
  return psd == 1;
}

/// BlockVector with only block `b` set.
inline BlockVector embed_block(const ConeSpec& cone, size_t b, const Vector& v) {
  BlockVector out = BlockVector::zeros(cone);
  out.blocks[b] = v;
  return out;
}

}  // namespace exact_detail

/// Penalized exact augmented Lagrangian instance: construction id, barrier
/// configuration, eta variant and the multiplier transform it requires.
struct ExactALInstance {
  ProblemInstance problem;
  ExactConstruction construction = ExactConstruction::HPR;
  BarrierConfig barrier;
  EtaVariant eta_variant = EtaVariant::Eta1_NLP;
  bool zeta_transform = false;  // lambda -> lambda^2 (componentwise / Loewner)
  double fd_step = 1e-6;        // fallback gradient step
};

inline ExactALInstance make_exact_al(ProblemInstance problem, ExactConstruction construction,
                                     BarrierConfig barrier = {}) {
  using namespace exact_detail;
  ExactALInstance inst;
  inst.problem = std::move(problem);
  inst.construction = construction;
  inst.barrier = barrier;
  const ConeSpec& cone = inst.problem.cone;
  switch (construction) {
    case ExactConstruction::HPR:
      if (!is_nlp_cone(cone, true))
        throw std::invalid_argument("exact-al hpr: needs an orthant/zero cone");
      inst.eta_variant = EtaVariant::Eta1_NLP;
      barrier.validate(2.0);
      break;
    case ExactConstruction::Cubic:
    case ExactConstruction::PenalizedExp:
    case ExactConstruction::HeWuMeng:
      if (!is_nlp_cone(cone, false))
        throw std::invalid_argument("exact-al " + construction_name(construction) +
                                    ": needs an inequality-only orthant cone");
      inst.eta_variant = EtaVariant::Eta2_NLP;
      inst.zeta_transform = true;
      barrier.validate(2.0);
      break;
    case ExactConstruction::SOC_RW:
      if (!is_soc_cone(cone))
        throw std::invalid_argument("exact-al soc-rw: needs second order cone blocks");
      inst.eta_variant = EtaVariant::Eta_SOC;
      barrier.validate(2.0);
      break;
    case ExactConstruction::SDP_RW:
      if (!is_sdp_cone(cone))
        throw std::invalid_argument("exact-al sdp-rw: needs one PSD block");
      inst.eta_variant = EtaVariant::Eta_SDP;
      barrier.validate(1.0);  // the SDP barrier admits kappa > 1
      break;
    case ExactConstruction::SDP_PenalizedRescale:
      if (!is_sdp_cone(cone))
        throw std::invalid_argument("exact-al sdp-penalized-rescale: needs one PSD block");
      inst.eta_variant = EtaVariant::Eta_SDP;
      inst.zeta_transform = true;
      barrier.validate(1.0);
      break;
  }
  return inst;
}

/// zeta(lambda): componentwise square on orthant blocks, Loewner square on
/// the PSD block; equality multipliers pass through.
inline BlockVector zeta_square(const ConeSpec& cone, const BlockVector& lambda) {
  BlockVector out = lambda;
  for (size_t b = 0; b < cone.blocks.size(); ++b) {
    switch (cone.blocks[b].kind) {
      case ConeKind::NegativeOrthant:
        out.blocks[b] = lambda.blocks[b].cwiseProduct(lambda.blocks[b]);
        break;
      case ConeKind::NegSemidefinite: {
        const Matrix m = smat(lambda.blocks[b], cone.blocks[b].size);
        out.blocks[b] = svec(Matrix(m * m));
        break;
      }
      default:
        break;
    }
  }
  return out;
}

/// KKT multiplier associated with a solver multiplier of an instance.
inline BlockVector kkt_multiplier(const ExactALInstance& inst, const BlockVector& lambda) {
  return inst.zeta_transform ? zeta_square(inst.problem.cone, lambda) : lambda;
}

// ---------------------------------------------------------------------------
// Eta penalty terms
// ---------------------------------------------------------------------------

/// eta1 = sum_ineq (<D_x L, grad g_i> + g_i^2 lambda_i)^2
///      + sum_eq   <D_x L, grad g_j>^2
inline double eta1(const ProblemInstance& p, const Vector& x, const BlockVector& lambda) {
  using namespace exact_detail;
  if (!is_nlp_cone(p.cone, true))
    throw std::invalid_argument("eta1: needs an orthant/zero cone");
  const Vector dxl = p.lagrangian_grad_x(x, lambda);
  const BlockVector g = p.g(x);
  double total = 0.0;
  for (size_t b = 0; b < p.cone.blocks.size(); ++b) {
    const bool eq = p.cone.blocks[b].kind == ConeKind::Zero;
    for (int i = 0; i < p.cone.blocks[b].size; ++i) {
      Vector e = Vector::Zero(p.cone.blocks[b].size);
      e(i) = 1.0;
      const Vector grad_gi = p.constraints.adj_apply(x, embed_block(p.cone, b, e));
      double t = dxl.dot(grad_gi);
      if (!eq) t += g.blocks[b](i) * g.blocks[b](i) * lambda.blocks[b](i);
      total += t * t;
    }
  }
  return total;
}

/// eta2 = sum_i <D_x L(x, zeta(lambda)), grad g_i>^2 + sum_i g_i^2 lambda_i^2
/// (inequality-only problems; zeta(lambda) = lambda^2 componentwise)
inline double eta2(const ProblemInstance& p, const Vector& x, const BlockVector& lambda) {
  using namespace exact_detail;
  if (!is_nlp_cone(p.cone, false))
    throw std::invalid_argument("eta2: needs an inequality-only cone");
  const Vector dxl = p.lagrangian_grad_x(x, zeta_square(p.cone, lambda));
  const BlockVector g = p.g(x);
  double total = 0.0;
  for (size_t b = 0; b < p.cone.blocks.size(); ++b)
    for (int i = 0; i < p.cone.blocks[b].size; ++i) {
      Vector e = Vector::Zero(p.cone.blocks[b].size);
      e(i) = 1.0;
      const Vector grad_gi = p.constraints.adj_apply(x, embed_block(p.cone, b, e));
      const double t = dxl.dot(grad_gi);
      const double gl = g.blocks[b](i) * lambda.blocks[b](i);
      total += t * t + gl * gl;
    }
  return total;
}

/// eta_soc = ||D_x L||^2 + sum_i ( <lambda_i, g_i>^2
///           + || (lambda_i)_0 gbar_i + (g_i)_0 lbar_i ||^2 )
inline double eta_soc(const ProblemInstance& p, const Vector& x, const BlockVector& lambda) {
  using namespace exact_detail;
  if (!is_soc_cone(p.cone)) throw std::invalid_argument("eta_soc: needs SOC blocks");
  const Vector dxl = p.lagrangian_grad_x(x, lambda);
  const BlockVector g = p.g(x);
  double total = dxl.squaredNorm();
  for (size_t b = 0; b < p.cone.blocks.size(); ++b) {
    if (p.cone.blocks[b].kind != ConeKind::SecondOrder) continue;
    const Vector& gb = g.blocks[b];
    const Vector& lb = lambda.blocks[b];
    const int tail = p.cone.blocks[b].size - 1;
    const double pairing = lb.dot(gb);
    const Vector v = lb(0) * gb.tail(tail) + gb(0) * lb.tail(tail);
    total += pairing * pairing + v.squaredNorm();
  }
  return total;
}

/// eta_sdp = ||D_x L||^2 + trace(lambda0^2 G0(x)^2)
inline double eta_sdp(const ProblemInstance& p, const Vector& x, const BlockVector& lambda) {
  using namespace exact_detail;
  if (!is_sdp_cone(p.cone)) throw std::invalid_argument("eta_sdp: needs one PSD block");
  const Vector dxl = p.lagrangian_grad_x(x, lambda);
  const BlockVector g = p.g(x);
  double total = dxl.squaredNorm();
  for (size_t b = 0; b < p.cone.blocks.size(); ++b) {
    if (p.cone.blocks[b].kind != ConeKind::NegSemidefinite) continue;
    const int n = p.cone.blocks[b].size;
    const Matrix g0 = smat(g.blocks[b], n);
    const Matrix l0 = smat(lambda.blocks[b], n);
    total += (l0 * l0 * g0 * g0).trace();
  }
  return total;
}

/// The eta term of an instance, evaluated at the instance's own multiplier
/// parametrization (zeta-transformed constructions square lambda inside).
inline double eta_value(const ExactALInstance& inst, const Vector& x,
                        const BlockVector& lambda) {
  switch (inst.eta_variant) {
    case EtaVariant::Eta1_NLP: return eta1(inst.problem, x, lambda);
    case EtaVariant::Eta2_NLP: return eta2(inst.problem, x, lambda);
    case EtaVariant::Eta_SOC: return eta_soc(inst.problem, x, lambda);
    case EtaVariant::Eta_SDP:
      return eta_sdp(inst.problem, x, kkt_multiplier(inst, lambda));
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Barrier terms
// ---------------------------------------------------------------------------

struct BarrierValues {
  double a = 0.0, b = 0.0;  // numerators
  double p = 0.0, q = 0.0;  // scaled by the multiplier norms
  bool in_omega = false;
};

/// Cone-appropriate barrier terms: a(x) penalizes inequality violation
/// (per-coordinate max^kappa, per-block SOC dist^kappa, PSD trace power),
/// b(x) the equality residual; p, q divide by 1 + ||multiplier||^2.
inline BarrierValues barriers(const ProblemInstance& problem, const Vector& x,
                              const BlockVector& lambda, const BarrierConfig& cfg) {
  const BlockVector g = problem.g(x);
  double viol = 0.0, eq_sq = 0.0, l_ineq_sq = 0.0, l_eq_sq = 0.0;
  for (size_t b = 0; b < problem.cone.blocks.size(); ++b) {
    const ConeBlock& blk = problem.cone.blocks[b];
    const Vector& gb = g.blocks[b];
    const Vector& lb = lambda.blocks[b];
    switch (blk.kind) {
      case ConeKind::NegativeOrthant:
        for (int i = 0; i < blk.size; ++i)
          viol += std::pow(std::max(0.0, gb(i)), cfg.kappa);
        l_ineq_sq += lb.squaredNorm();
        break;
      case ConeKind::Zero:
        eq_sq += gb.squaredNorm();
        l_eq_sq += lb.squaredNorm();
        break;
      case ConeKind::SecondOrder: {
        ConeSpec one{blk};
        viol += std::pow(distance(one, BlockVector({gb})), cfg.kappa);
        l_ineq_sq += lb.squaredNorm();
        break;
      }
      case ConeKind::NegSemidefinite: {
        EigDecomposition d = sym_eig(smat(gb, blk.size));
        viol += std::pow(d.eigenvalues.cwiseMax(0.0).squaredNorm(), cfg.kappa);
        l_ineq_sq += lb.squaredNorm();  // = trace(lambda0^2)
        break;
      }
    }
  }
  BarrierValues out;
  out.a = cfg.alpha - viol;
  out.b = cfg.alpha - eq_sq;
  out.p = out.a / (1.0 + l_ineq_sq);
  out.q = out.b / (1.0 + l_eq_sq);
  out.in_omega = out.a > 0.0 && out.b > 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Penalized exact augmented Lagrangian values
// ---------------------------------------------------------------------------

inline ExtendedReal exact_al_value(const ExactALInstance& inst, const Vector& x,
                                   const BlockVector& lambda, double c) {
  if (c <= 0.0) throw std::invalid_argument("exact_al_value: c must be positive");
  const ProblemInstance& prob = inst.problem;
  require_shaped(prob.cone, lambda, "exact_al_value");

  // zeta-transformed constructions compute the barrier at zeta(lambda)
  const BlockVector barrier_lambda =
      (inst.construction == ExactConstruction::Cubic) ? zeta_square(prob.cone, lambda)
                                                      : lambda;
  const BarrierValues bar = barriers(prob, x, barrier_lambda, inst.barrier);
  if (!bar.in_omega) return ExtendedReal::infinity();

  const BlockVector g = prob.g(x);
  double total = prob.f(x) + eta_value(inst, x, lambda);

  auto eq_terms = [&](double q) {
    double s = 0.0;
    for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
      if (prob.cone.blocks[b].kind != ConeKind::Zero) continue;
      const Vector& h = g.blocks[b];
      const Vector& mu = lambda.blocks[b];
      s += mu.dot(h) + 0.5 * c / q * h.squaredNorm();
    }
    return s;
  };

  switch (inst.construction) {
    case ExactConstruction::HPR: {
      for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
        if (prob.cone.blocks[b].kind != ConeKind::NegativeOrthant) continue;
        for (int i = 0; i < prob.cone.blocks[b].size; ++i) {
          const double gi = g.blocks[b](i), li = lambda.blocks[b](i);
          const double m = std::max(gi, -bar.p / c * li);
          total += li * m + 0.5 * c / bar.p * m * m;
        }
      }
      total += eq_terms(bar.q);
      break;
    }
    case ExactConstruction::Cubic: {
      const double p = bar.p;
      for (size_t b = 0; b < prob.cone.blocks.size(); ++b)
        for (int i = 0; i < prob.cone.blocks[b].size; ++i) {
          const double gi = g.blocks[b](i), li = lambda.blocks[b](i);
          const double m = std::max(c * gi + p * li, 0.0);
          const double apl = std::abs(p * li);
          total += (m * m * m - apl * apl * apl) / (3.0 * c * p * p);
        }
      break;
    }
    case ExactConstruction::PenalizedExp: {
      const double p = bar.p;
      for (size_t b = 0; b < prob.cone.blocks.size(); ++b)
        for (int i = 0; i < prob.cone.blocks[b].size; ++i) {
          const double gi = g.blocks[b](i), li = lambda.blocks[b](i);
          const double t = c * gi / p;
          const double xi = t > 0 ? t * t * t : 0.0;  // max{0, t}^3
          total += p / c * (li * li * std::expm1(t) + xi);
        }
      break;
    }
    case ExactConstruction::HeWuMeng: {
      const double p = bar.p;
      for (size_t b = 0; b < prob.cone.blocks.size(); ++b)
        for (int i = 0; i < prob.cone.blocks[b].size; ++i) {
          const double gi = g.blocks[b](i), li = lambda.blocks[b](i);
          const double a = p * li * li;  // sqrt(t^2 + (p lambda^2)^2) + t
          const double u = c * gi;
          double integral;  // int_0^{u} (sqrt(t^2+a^2)+t) dt
          if (a == 0.0) {
            integral = u > 0 ? u * u : 0.0;
          } else {
            const double r = std::sqrt(u * u + a * a);
            const double logt = u >= 0 ? std::log(r + u) - std::log(a)
                                       : std::log(a) - std::log(r - u);
            const double quad = u >= 0 ? 0.5 * u * r + 0.5 * u * u
                                       : 0.5 * u * a * a / (r - u);
            integral = quad + 0.5 * a * a * logt;
          }
          total += integral / (c * p);
        }
      break;
    }
    case ExactConstruction::SOC_RW: {
      const double p = bar.p;
      for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
        if (prob.cone.blocks[b].kind != ConeKind::SecondOrder) continue;
        ConeSpec one{prob.cone.blocks[b]};
        const Vector u = g.blocks[b] + p / c * lambda.blocks[b];
        const double d = distance(one, BlockVector({u}));
        total += 0.5 * c / p *
                 (d * d - (p / c) * (p / c) * lambda.blocks[b].squaredNorm());
      }
      total += eq_terms(bar.q);
      break;
    }
    case ExactConstruction::SDP_RW: {
      const double p = bar.p;
      for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
        if (prob.cone.blocks[b].kind != ConeKind::NegSemidefinite) continue;
        const int n = prob.cone.blocks[b].size;
        const Matrix m = c * smat(g.blocks[b], n) + p * smat(lambda.blocks[b], n);
        EigDecomposition d = sym_eig(m);
        const double tr_plus_sq = d.eigenvalues.cwiseMax(0.0).squaredNorm();
        total += (tr_plus_sq - p * p * lambda.blocks[b].squaredNorm()) / (2.0 * c * p);
      }
      total += eq_terms(bar.q);
      break;
    }
    case ExactConstruction::SDP_PenalizedRescale: {
      const double p = bar.p;
      const ScalarFunction psi = ScalarFunction::exp_minus_one();
      const ScalarFunction xi = ScalarFunction::cubed_positive_part();
      for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
        if (prob.cone.blocks[b].kind != ConeKind::NegSemidefinite) continue;
        const int n = prob.cone.blocks[b].size;
        const EigDecomposition d = sym_eig(Matrix(c / p * smat(g.blocks[b], n)));
        const Matrix lam_sq = smat(zeta_square(prob.cone, lambda).blocks[b], n);
        for (int i = 0; i < n; ++i) {
          const double rho = d.eigenvalues(i);
          const Vector e = d.eigenvectors.col(i);
          const double qcoef = e.dot(lam_sq * e);
          total += p / c * (psi.value(rho) * qcoef + xi.value(rho));
        }
      }
      total += eq_terms(bar.q);
      break;
    }
  }
  if (std::isinf(total)) return ExtendedReal::infinity();
  return total;
}

/// eta at the KKT parametrization vanishing + complementarity makes the
/// exact AL equal f* at reference pairs; the solver needs its gradient.
/// Central finite differences on the stacked (x, lambda) variable.
inline void exact_al_grad_fd(const ExactALInstance& inst, const Vector& x,
                             const BlockVector& lambda, double c, Vector& gx,
                             BlockVector& glambda) {
  const double step = inst.fd_step;
  gx.resize(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    const double h = step * std::max(1.0, std::abs(x(i)));
    xp(i) += h;
    xm(i) -= h;
    const ExtendedReal fp = exact_al_value(inst, xp, lambda, c);
    const ExtendedReal fm = exact_al_value(inst, xm, lambda, c);
    if (!fp.is_finite() || !fm.is_finite())
      throw NondifferentiablePoint("exact_al_grad: next to the barrier boundary");
    gx(i) = (fp.value() - fm.value()) / (2.0 * h);
  }
  glambda = lambda;
  for (size_t b = 0; b < lambda.blocks.size(); ++b)
    for (int i = 0; i < lambda.blocks[b].size(); ++i) {
      BlockVector lp = lambda, lm = lambda;
      const double h = step * std::max(1.0, std::abs(lambda.blocks[b](i)));
      lp.blocks[b](i) += h;
      lm.blocks[b](i) -= h;
      const ExtendedReal fp = exact_al_value(inst, x, lp, c);
      const ExtendedReal fm = exact_al_value(inst, x, lm, c);
      if (!fp.is_finite() || !fm.is_finite())
        throw NondifferentiablePoint("exact_al_grad: next to the barrier boundary");
      glambda.blocks[b](i) = (fp.value() - fm.value()) / (2.0 * h);
    }
}

inline void exact_al_grad(const ExactALInstance& inst, const Vector& x,
                          const BlockVector& lambda, double c, Vector& gx,
                          BlockVector& glambda);

// ---------------------------------------------------------------------------
// Sublevel probe
// ---------------------------------------------------------------------------

enum class ProbeVerdict { BoundedWithin, EscapeDetected, Inconclusive };

struct ProbeResult {
  ProbeVerdict verdict = ProbeVerdict::Inconclusive;
  double radius = 0.0;  // bounding radius for BoundedWithin
  Vector witness_x;     // escape point
  BlockVector witness_lambda;
  double witness_value = 0.0;
  int hits = 0;
};

/// Shell sampling of { (x, lambda) : L_e(x, lambda, c) < f* } around the
/// reference pair: random shell directions plus deterministic coordinate
/// rays (escapes often live in thin tubes along multiplier axes). Escape is
/// declared when the outermost sampled shell still contains sublevel points.
inline ProbeResult exact_sublevel_probe(const ExactALInstance& inst, double c,
                                        const std::vector<double>& radius_schedule,
                                        int budget_per_shell, uint64_t seed = 1234) {
  if (c <= 0.0) throw std::invalid_argument("exact_sublevel_probe: c must be positive");
  if (!inst.problem.reference)
    throw std::invalid_argument("exact_sublevel_probe: needs a reference optimal value");
  const double fstar = inst.problem.reference->f;
  const Vector x0 = inst.problem.reference->x;
  const Vector l0 = inst.problem.reference->lambda.flat();
  const int d = inst.problem.dim;
  const int m = inst.problem.cone.ambient_dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  ProbeResult res;
  double outer_hit_radius = -1.0;
  for (double r : radius_schedule) {
    std::vector<Vector> dirs;
    for (int s = 0; s < budget_per_shell; ++s) {
      Vector dir(d + m);
      for (int i = 0; i < d + m; ++i) dir(i) = gauss(rng);
      dirs.push_back(r / dir.norm() * dir);
    }
    for (int i = 0; i < d + m; ++i) {  // coordinate rays
      Vector dir = Vector::Zero(d + m);
      dir(i) = r;
      dirs.push_back(dir);
      dir(i) = -r;
      dirs.push_back(dir);
    }
    for (const Vector& dir : dirs) {
      Vector x = inst.problem.set_a.project(x0 + dir.head(d));
      BlockVector lambda = BlockVector::from_flat(inst.problem.cone, l0 + dir.tail(m));
      const ExtendedReal v = exact_al_value(inst, x, lambda, c);
      if (v.is_finite() && v.value() < fstar - 1e-9) {
        ++res.hits;
        if (r >= outer_hit_radius) {
          outer_hit_radius = r;
          res.witness_x = x;
          res.witness_lambda = lambda;
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

}  // namespace conelag

#include "conelag/exact_al_grad.hpp"
