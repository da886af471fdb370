// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0
//
// Analytic gradients of the penalized exact augmented Lagrangians for the
// projection-based constructions (HPR, SOC-RW, SDP-RW); the remaining
// constructions fall back to central finite differences.

#pragma once

#include "conelag/exact_al.hpp"

namespace conelag {
namespace exact_detail {

struct BarrierGrads {
  BarrierValues bar;
  Vector a_x, b_x;        // gradients of the numerators in x
  Vector p_x, q_x;        // gradients of p, q in x
  BlockVector p_l, q_l;   // gradients of p, q in lambda
};

inline BarrierGrads barrier_grads(const ProblemInstance& prob, const Vector& x,
                                  const BlockVector& lambda, const BarrierConfig& cfg) {
  BarrierGrads out;
  out.bar = barriers(prob, x, lambda, cfg);
  const BlockVector g = prob.g(x);

  BlockVector wa = BlockVector::zeros(prob.cone), wb = BlockVector::zeros(prob.cone);
  double l_ineq_sq = 0.0, l_eq_sq = 0.0;
  for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
    const ConeBlock& blk = prob.cone.blocks[b];
    const Vector& gb = g.blocks[b];
    switch (blk.kind) {
      case ConeKind::NegativeOrthant:
        for (int i = 0; i < blk.size; ++i)
          wa.blocks[b](i) = -cfg.kappa * std::pow(std::max(0.0, gb(i)), cfg.kappa - 1.0);
        l_ineq_sq += lambda.blocks[b].squaredNorm();
        break;
      case ConeKind::Zero:
        wb.blocks[b] = -2.0 * gb;
        l_eq_sq += lambda.blocks[b].squaredNorm();
        break;
      case ConeKind::SecondOrder: {
        ConeSpec one{blk};
        const BlockVector proj = project(one, BlockVector({gb}));
        const Vector res = gb - proj.blocks[0];
        const double d = res.norm();
        if (d > 0.0) wa.blocks[b] = -cfg.kappa * std::pow(d, cfg.kappa - 2.0) * res;
        l_ineq_sq += lambda.blocks[b].squaredNorm();
        break;
      }
      case ConeKind::NegSemidefinite: {
        EigDecomposition e = sym_eig(smat(gb, blk.size));
        const Vector clip = e.eigenvalues.cwiseMax(0.0);
        const double tplus = clip.squaredNorm();
        const Matrix gplus =
            e.eigenvectors * clip.asDiagonal() * e.eigenvectors.transpose();
        wa.blocks[b] = -cfg.kappa * std::pow(tplus, cfg.kappa - 1.0) * 2.0 * svec(gplus);
        l_ineq_sq += lambda.blocks[b].squaredNorm();
        break;
      }
    }
  }
  out.a_x = prob.constraints.adj_apply(x, wa);
  out.b_x = prob.constraints.adj_apply(x, wb);
  out.p_x = out.a_x / (1.0 + l_ineq_sq);
  out.q_x = out.b_x / (1.0 + l_eq_sq);
  out.p_l = BlockVector::zeros(prob.cone);
  out.q_l = BlockVector::zeros(prob.cone);
  for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
    if (prob.cone.blocks[b].kind == ConeKind::Zero)
      out.q_l.blocks[b] = -2.0 * out.bar.q / (1.0 + l_eq_sq) * lambda.blocks[b];
    else
      out.p_l.blocks[b] = -2.0 * out.bar.p / (1.0 + l_ineq_sq) * lambda.blocks[b];
  }
  return out;
}

/// grad_g_coordinate: [DG]* of the basis vector of coordinate (b, i).
inline Vector constraint_gradient(const ProblemInstance& prob, const Vector& x, size_t b,
                                  int i) {
  Vector e = Vector::Zero(prob.cone.blocks[b].ambient_dim());
  e(i) = 1.0;
  return prob.constraints.adj_apply(x, embed_block(prob.cone, b, e));
}

struct EtaGrads {
  double value = 0.0;
  Vector gx;
  BlockVector gl;
};

inline EtaGrads eta1_grads(const ProblemInstance& prob, const Vector& x,
                           const BlockVector& lambda) {
  EtaGrads out;
  const Vector dxl = prob.lagrangian_grad_x(x, lambda);
  const Matrix hess_l = prob.lagrangian_hess_x(x, lambda);
  const BlockVector g = prob.g(x);
  out.gx = Vector::Zero(prob.dim);
  out.gl = BlockVector::zeros(prob.cone);

  // cache constraint gradients
  std::vector<std::vector<Vector>> grads(prob.cone.blocks.size());
  for (size_t b = 0; b < prob.cone.blocks.size(); ++b)
    for (int i = 0; i < prob.cone.blocks[b].size; ++i)
      grads[b].push_back(constraint_gradient(prob, x, b, i));

  for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
    const bool eq = prob.cone.blocks[b].kind == ConeKind::Zero;
    for (int i = 0; i < prob.cone.blocks[b].size; ++i) {
      const double gi = g.blocks[b](i);
      const double li = lambda.blocks[b](i);
      double t = dxl.dot(grads[b][i]);
      if (!eq) t += gi * gi * li;
      out.value += t * t;

      Vector e = Vector::Zero(prob.cone.blocks[b].ambient_dim());
      e(i) = 1.0;
      const Matrix hess_gi = prob.constraints.second_adj(x, embed_block(prob.cone, b, e));
      Vector dt_x = hess_l * grads[b][i] + hess_gi * dxl;
      if (!eq) dt_x += 2.0 * gi * li * grads[b][i];
      out.gx += 2.0 * t * dt_x;

      for (size_t b2 = 0; b2 < prob.cone.blocks.size(); ++b2)
        for (int k = 0; k < prob.cone.blocks[b2].size; ++k) {
          double dt = grads[b2][k].dot(grads[b][i]);
          if (!eq && b2 == b && k == i) dt += gi * gi;
          out.gl.blocks[b2](k) += 2.0 * t * dt;
        }
    }
  }
  return out;
}

inline EtaGrads eta_soc_grads(const ProblemInstance& prob, const Vector& x,
                              const BlockVector& lambda) {
  EtaGrads out;
  const Vector dxl = prob.lagrangian_grad_x(x, lambda);
  const Matrix hess_l = prob.lagrangian_hess_x(x, lambda);
  const BlockVector g = prob.g(x);
  const BlockVector jac_dxl = prob.constraints.jac_apply(x, dxl);

  out.value = dxl.squaredNorm();
  out.gx = 2.0 * hess_l * dxl;
  out.gl = 2.0 * jac_dxl;

  for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
    if (prob.cone.blocks[b].kind != ConeKind::SecondOrder) continue;
    const Vector& gb = g.blocks[b];
    const Vector& lb = lambda.blocks[b];
    const int tail = prob.cone.blocks[b].size - 1;
    const double pairing = lb.dot(gb);
    const Vector v = lb(0) * gb.tail(tail) + gb(0) * lb.tail(tail);
    out.value += pairing * pairing + v.squaredNorm();

    // d/dx <lambda, g>^2 = 2 pairing [DG]* lambda_b
    out.gx += 2.0 * pairing * prob.constraints.adj_apply(x, embed_block(prob.cone, b, lb));
    // d/dx ||v||^2 = 2 [DG]* w, w = (<v, lbar>, lambda0 v)
    Vector w(prob.cone.blocks[b].size);
    w(0) = v.dot(lb.tail(tail));
    w.tail(tail) = lb(0) * v;
    out.gx += 2.0 * prob.constraints.adj_apply(x, embed_block(prob.cone, b, w));

    out.gl.blocks[b] += 2.0 * pairing * gb;
    out.gl.blocks[b](0) += 2.0 * v.dot(gb.tail(tail));
    out.gl.blocks[b].tail(tail) += 2.0 * gb(0) * v;
  }
  return out;
}

inline EtaGrads eta_sdp_grads(const ProblemInstance& prob, const Vector& x,
                              const BlockVector& lambda) {
  EtaGrads out;
  const Vector dxl = prob.lagrangian_grad_x(x, lambda);
  const Matrix hess_l = prob.lagrangian_hess_x(x, lambda);
  const BlockVector g = prob.g(x);
  const BlockVector jac_dxl = prob.constraints.jac_apply(x, dxl);

  out.value = dxl.squaredNorm();
  out.gx = 2.0 * hess_l * dxl;
  out.gl = 2.0 * jac_dxl;

  for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
    if (prob.cone.blocks[b].kind != ConeKind::NegSemidefinite) continue;
    const int n = prob.cone.blocks[b].size;
    const Matrix g0 = smat(g.blocks[b], n);
    const Matrix l0 = smat(lambda.blocks[b], n);
    out.value += (l0 * l0 * g0 * g0).trace();
    const Matrix mg = l0 * l0 * g0 + g0 * l0 * l0;
    out.gx += prob.constraints.adj_apply(x, embed_block(prob.cone, b, svec(mg)));
    const Matrix ml = l0 * g0 * g0 + g0 * g0 * l0;
    out.gl.blocks[b] += svec(ml);
  }
  return out;
}

}  // namespace exact_detail

inline void exact_al_grad(const ExactALInstance& inst, const Vector& x,
                          const BlockVector& lambda, double c, Vector& gx,
                          BlockVector& glambda) {
  using namespace exact_detail;
  const ProblemInstance& prob = inst.problem;
  const bool analytic = inst.construction == ExactConstruction::HPR ||
                        inst.construction == ExactConstruction::SOC_RW ||
                        inst.construction == ExactConstruction::SDP_RW;
  if (!analytic || !prob.constraints.has_second_order()) {
    exact_al_grad_fd(inst, x, lambda, c, gx, glambda);
    return;
  }

  const BarrierGrads bg = barrier_grads(prob, x, lambda, inst.barrier);
  if (!bg.bar.in_omega)
    throw NondifferentiablePoint("exact_al_grad: outside the barrier domain");
  const double p = bg.bar.p, q = bg.bar.q;
  const BlockVector g = prob.g(x);

  gx = prob.objective.gradient(x);
  glambda = BlockVector::zeros(prob.cone);

  EtaGrads eta;
  switch (inst.eta_variant) {
    case EtaVariant::Eta1_NLP: eta = eta1_grads(prob, x, lambda); break;
    case EtaVariant::Eta_SOC: eta = eta_soc_grads(prob, x, lambda); break;
    case EtaVariant::Eta_SDP: eta = eta_sdp_grads(prob, x, lambda); break;
    default:
      throw std::logic_error("exact_al_grad: unexpected eta variant");
  }
  gx += eta.gx;
  glambda += eta.gl;

  // equality terms mu' h + (c / 2q) ||h||^2 shared by the three constructions
  for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
    if (prob.cone.blocks[b].kind != ConeKind::Zero) continue;
    const Vector& h = g.blocks[b];
    const Vector& mu = lambda.blocks[b];
    const double hsq = h.squaredNorm();
    gx += prob.constraints.adj_apply(
        x, embed_block(prob.cone, b, Vector(mu + c / q * h)));
    gx += -0.5 * c / (q * q) * hsq * bg.q_x;
    glambda.blocks[b] += h;
    for (size_t b2 = 0; b2 < prob.cone.blocks.size(); ++b2)
      if (prob.cone.blocks[b2].kind == ConeKind::Zero)
        glambda.blocks[b2] += -0.5 * c / (q * q) * hsq * bg.q_l.blocks[b2];
  }

  switch (inst.construction) {
    case ExactConstruction::HPR: {
      for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
        if (prob.cone.blocks[b].kind != ConeKind::NegativeOrthant) continue;
        for (int i = 0; i < prob.cone.blocks[b].size; ++i) {
          const double gi = g.blocks[b](i), li = lambda.blocks[b](i);
          const bool branch_g = gi >= -p / c * li;
          const double m = branch_g ? gi : -p / c * li;
          const Vector grad_gi = constraint_gradient(prob, x, b, i);

          // dm in x and lambda
          Vector m_x = branch_g ? grad_gi : Vector(-li / c * bg.p_x);
          // term = li m + (c / 2p) m^2
          gx += li * m_x + c / p * m * m_x - 0.5 * c / (p * p) * m * m * bg.p_x;

          BlockVector m_l = BlockVector::zeros(prob.cone);
          if (!branch_g) {
            m_l = (-li / c) * bg.p_l;
            m_l.blocks[b](i) += -p / c;
          }
          BlockVector term_l = (li + c / p * m) * m_l;
          term_l.blocks[b](i) += m;
          term_l += (-0.5 * c / (p * p) * m * m) * bg.p_l;
          glambda += term_l;
        }
      }
      break;
    }
    case ExactConstruction::SOC_RW: {
      double bracket = 0.0;       // sum_i (dist^2 - (p/c)^2 ||lambda_i||^2)
      Vector bracket_x = Vector::Zero(prob.dim);
      BlockVector bracket_l = BlockVector::zeros(prob.cone);
      double lam_sq = 0.0;
      double wl_sum = 0.0;  // sum_i <w_i, lambda_i>
      for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
        if (prob.cone.blocks[b].kind != ConeKind::SecondOrder) continue;
        ConeSpec one{prob.cone.blocks[b]};
        const Vector& lb = lambda.blocks[b];
        const Vector u = g.blocks[b] + p / c * lb;
        const Vector w = u - project(one, BlockVector({u})).blocks[0];
        const double d2 = w.squaredNorm();
        lam_sq += lb.squaredNorm();
        wl_sum += w.dot(lb);
        bracket += d2 - (p / c) * (p / c) * lb.squaredNorm();
        // x-part: 2 w' (DG_b h) through g, plus p(x)-dependence collected below
        bracket_x += 2.0 * prob.constraints.adj_apply(x, embed_block(prob.cone, b, w));
        bracket_l.blocks[b] += 2.0 * p / c * w - 2.0 * (p / c) * (p / c) * lb;
      }
      // p-dependence of the bracket: du = (lambda/c) dp and -(2p/c^2)||l||^2 dp
      const double dbracket_dp = 2.0 / c * wl_sum - 2.0 * p / (c * c) * lam_sq;
      bracket_x += dbracket_dp * bg.p_x;
      bracket_l += dbracket_dp * bg.p_l;
      // value term (c / 2p) * bracket
      gx += 0.5 * c / p * bracket_x - 0.5 * c / (p * p) * bracket * bg.p_x;
      glambda += 0.5 * c / p * bracket_l;
      glambda += (-0.5 * c / (p * p) * bracket) * bg.p_l;
      break;
    }
    case ExactConstruction::SDP_RW: {
      for (size_t b = 0; b < prob.cone.blocks.size(); ++b) {
        if (prob.cone.blocks[b].kind != ConeKind::NegSemidefinite) continue;
        const int n = prob.cone.blocks[b].size;
        const Matrix l0 = smat(lambda.blocks[b], n);
        const Matrix m = c * smat(g.blocks[b], n) + p * l0;
        EigDecomposition e = sym_eig(m);
        const Vector clip = e.eigenvalues.cwiseMax(0.0);
        const Matrix w = e.eigenvectors * clip.asDiagonal() * e.eigenvectors.transpose();
        const double tplus = clip.squaredNorm();
        const double lsq = lambda.blocks[b].squaredNorm();
        const double val = (tplus - p * p * lsq) / (2.0 * c * p);
        const double dval_dp = w.cwiseProduct(l0).sum() / (c * p) - lsq / c - val / p;

        gx += (1.0 / p) * prob.constraints.adj_apply(x, embed_block(prob.cone, b, svec(w)));
        gx += dval_dp * bg.p_x;
        glambda.blocks[b] += (1.0 / c) * svec(w) - (p / c) * lambda.blocks[b];
        glambda += dval_dp * bg.p_l;
      }
      break;
    }
    default:
      break;
  }
}

}  // namespace conelag
