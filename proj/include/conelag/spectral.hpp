// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#pragma once

#include <Eigen/Core>
#include <Eigen/Jacobi>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace conelag {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigendecomposition of a dense symmetric matrix, eigenvalues sorted
/// decreasing, eigenvectors as orthonormal columns.
struct EigDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;

  Matrix reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  }
};

namespace detail {

inline double offdiag_frobenius(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for small dense symmetric matrices.
/// Converges when the off-diagonal Frobenius mass drops below
/// 1e-14 * ||Y||_F; throws after 100 sweeps without convergence.
inline EigDecomposition sym_eig(const Matrix& y) {
  const int n = static_cast<int>(y.rows());
  if (y.cols() != n) throw std::invalid_argument("sym_eig: not square");
  const double nrm = y.norm();
  if ((y - y.transpose()).norm() > 1e-10 * std::max(1.0, nrm))
    throw std::invalid_argument("sym_eig: not symmetric");

  Matrix a = 0.5 * (y + y.transpose());
  Matrix e = Matrix::Identity(n, n);
  const double tol = 1e-14 * std::max(nrm, std::numeric_limits<double>::min());

  bool converged = (n <= 1) || detail::offdiag_frobenius(a) <= tol;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= tol / (n * n)) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k != p && k != q) {
            const double akp = a(k, p), akq = a(k, q);
            a(k, p) = a(p, k) = c * akp - s * akq;
            a(k, q) = a(q, k) = s * akp + c * akq;
          }
          const double ekp = e(k, p), ekq = e(k, q);
          e(k, p) = c * ekp - s * ekq;
          e(k, q) = s * ekp + c * ekq;
        }
      }
    }
    converged = detail::offdiag_frobenius(a) <= tol;
  }
  if (!converged) throw std::runtime_error("sym_eig: Jacobi did not converge");

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i) > a(j, j); });

  EigDecomposition d;
  d.eigenvalues.resize(n);
  d.eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    d.eigenvalues(i) = a(order[i], order[i]);
    d.eigenvectors.col(i) = e.col(order[i]);
  }
  return d;
}

/// Scalar function psi with derivatives, defined on (-inf, eps0).
/// Rescaling families require psi(0) = 0; `checked` enforces it.
struct ScalarFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> second_derivative;
  double eps0 = std::numeric_limits<double>::infinity();

  bool in_domain(double t) const { return t < eps0; }

  static ScalarFunction checked(ScalarFunction f) {
    if (std::abs(f.value(0.0)) > 1e-12)
      throw std::invalid_argument("ScalarFunction: psi(0) != 0");
    return f;
  }

  static ScalarFunction identity() {
    return {[](double t) { return t; }, [](double) { return 1.0; },
            [](double) { return 0.0; }};
  }
  static ScalarFunction positive_part() {
    return {[](double t) { return std::max(0.0, t); },
            [](double t) { return t > 0 ? 1.0 : 0.0; },
            [](double) { return 0.0; }};
  }
  /// -log(1 - t) on (-inf, 1); psi(0) = 0, psi'(0) = 1.
  static ScalarFunction modified_frisch() {
    ScalarFunction f{[](double t) { return -std::log1p(-t); },
                     [](double t) { return 1.0 / (1.0 - t); },
                     [](double t) { return 1.0 / ((1.0 - t) * (1.0 - t)); }};
    f.eps0 = 1.0;
    return f;
  }
  /// 1/(1 - t) - 1 on (-inf, 1); psi(0) = 0, psi'(0) = 1.
  static ScalarFunction modified_carroll() {
    ScalarFunction f{[](double t) { return 1.0 / (1.0 - t) - 1.0; },
                     [](double t) { return 1.0 / ((1.0 - t) * (1.0 - t)); },
                     [](double t) {
                       const double u = 1.0 - t;
                       return 2.0 / (u * u * u);
                     }};
    f.eps0 = 1.0;
    return f;
  }
  static ScalarFunction exp_minus_one() {
    return {[](double t) { return std::expm1(t); },
            [](double t) { return std::exp(t); },
            [](double t) { return std::exp(t); }};
  }
  /// 2(ln(1+e^t) - ln 2); psi(0) = 0, psi'(0) = 1.
  static ScalarFunction log_sigmoid() {
    return {[](double t) {
              // log(1+e^t) evaluated without overflow for large |t|
              const double lse = t > 0 ? t + std::log1p(std::exp(-t))
                                       : std::log1p(std::exp(t));
              return 2.0 * (lse - std::log(2.0));
            },
            [](double t) { return 2.0 / (1.0 + std::exp(-t)); },
            [](double t) {
              const double e = std::exp(-std::abs(t));
              return 2.0 * e / ((1.0 + e) * (1.0 + e));
            }};
  }
  static ScalarFunction cosh_minus_one() {
    return {[](double t) { return std::cosh(t) - 1.0; },
            [](double t) { return std::sinh(t); },
            [](double t) { return std::cosh(t); }};
  }
  /// max{0, t}^3, twice continuously differentiable.
  static ScalarFunction cubed_positive_part() {
    return {[](double t) { return t > 0 ? t * t * t : 0.0; },
            [](double t) { return t > 0 ? 3.0 * t * t : 0.0; },
            [](double t) { return t > 0 ? 6.0 * t : 0.0; }};
  }
};

/// Loewner operator on a symmetric matrix: apply psi to the eigenvalues.
/// Returns nullopt when some eigenvalue reaches psi's domain boundary
/// (the +inf case of the barrier families).
inline std::optional<Matrix> lowner_matrix(const ScalarFunction& psi,
                                           const Matrix& y) {
  EigDecomposition d = sym_eig(y);
  Vector mapped(d.eigenvalues.size());
  for (int i = 0; i < d.eigenvalues.size(); ++i) {
    if (!psi.in_domain(d.eigenvalues(i))) return std::nullopt;
    mapped(i) = psi.value(d.eigenvalues(i));
  }
  return d.eigenvectors * mapped.asDiagonal() * d.eigenvectors.transpose();
}

/// Loewner operator for a second order cone argument y = (y0, ybar):
/// spectral values y0 +- ||ybar|| are mapped through psi and reassembled.
inline std::optional<Vector> lowner_soc(const ScalarFunction& psi,
                                        const Vector& y) {
  if (y.size() < 2) throw std::invalid_argument("lowner_soc: dim < 2");
  const double y0 = y(0);
  const Vector ybar = y.tail(y.size() - 1);
  const double r = ybar.norm();
  if (r == 0.0) {
    if (!psi.in_domain(y0)) return std::nullopt;
    Vector out = Vector::Zero(y.size());
    out(0) = psi.value(y0);
    return out;
  }
  const double s1 = y0 + r, s2 = y0 - r;
  if (!psi.in_domain(s1) || !psi.in_domain(s2)) return std::nullopt;
  const double v1 = psi.value(s1), v2 = psi.value(s2);
  Vector out(y.size());
  out(0) = 0.5 * (v1 + v2);
  out.tail(y.size() - 1) = 0.5 * (v1 - v2) / r * ybar;
  return out;
}

}  // namespace conelag
