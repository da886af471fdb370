// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "conelag/spectral.hpp"

namespace conelag {

inline constexpr double kSqrt2 = 1.4142135623730951;

enum class ConeKind {
  NegativeOrthant,  // R_-^dim
  Zero,             // {0_dim}
  SecondOrder,      // Q_dim = { (y0, ybar) : y0 >= ||ybar|| }
  NegSemidefinite,  // S_order^- stored packed (svec, sqrt2 off-diagonals)
};

struct ConeBlock {
  ConeKind kind;
  int size;  // dim for vector blocks, matrix order for NegSemidefinite

  static ConeBlock orthant(int dim) { return make(ConeKind::NegativeOrthant, dim, 1); }
  static ConeBlock zero(int dim) { return make(ConeKind::Zero, dim, 1); }
  static ConeBlock second_order(int dim) { return make(ConeKind::SecondOrder, dim, 2); }
  static ConeBlock psd(int order) { return make(ConeKind::NegSemidefinite, order, 1); }

  /// Packed storage length of one block.
  int ambient_dim() const {
    return kind == ConeKind::NegSemidefinite ? size * (size + 1) / 2 : size;
  }

 private:
  static ConeBlock make(ConeKind k, int n, int min_n) {
    if (n < min_n) throw std::invalid_argument("ConeBlock: dimension too small");
    return ConeBlock{k, n};
  }
};

struct ConeSpec {
  std::vector<ConeBlock> blocks;

  ConeSpec() = default;
  ConeSpec(std::initializer_list<ConeBlock> bs) : blocks(bs) {}

  int ambient_dim() const {
    int n = 0;
    for (const auto& b : blocks) n += b.ambient_dim();
    return n;
  }
};

/// svec packing: lower triangle column-major, off-diagonals scaled by
/// sqrt(2), so that svec(A) . svec(B) = trace(AB).
inline Vector svec(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw std::invalid_argument("svec: not square");
  if ((a - a.transpose()).norm() > 1e-12 * std::max(1.0, a.norm()))
    throw std::invalid_argument("svec: not symmetric");
  Vector v(n * (n + 1) / 2);
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) v(k++) = (i == j) ? a(i, j) : kSqrt2 * a(i, j);
  return v;
}

inline Matrix smat(const Vector& v, int order) {
  if (v.size() != order * (order + 1) / 2)
    throw std::invalid_argument("smat: size mismatch");
  Matrix a(order, order);
  int k = 0;
  for (int j = 0; j < order; ++j)
    for (int i = j; i < order; ++i) {
      const double x = (i == j) ? v(k) : v(k) / kSqrt2;
      a(i, j) = a(j, i) = x;
      ++k;
    }
  return a;
}

/// Element of Y (or Y*): one packed array per cone block.
struct BlockVector {
  std::vector<Vector> blocks;

  BlockVector() = default;
  explicit BlockVector(std::vector<Vector> bs) : blocks(std::move(bs)) {}

  static BlockVector zeros(const ConeSpec& cone) {
    BlockVector v;
    v.blocks.reserve(cone.blocks.size());
    for (const auto& b : cone.blocks) v.blocks.push_back(Vector::Zero(b.ambient_dim()));
    return v;
  }
  static BlockVector from_flat(const ConeSpec& cone, const Vector& flat) {
    if (flat.size() != cone.ambient_dim())
      throw std::invalid_argument("BlockVector: flat size mismatch");
    BlockVector v;
    int off = 0;
    for (const auto& b : cone.blocks) {
      v.blocks.push_back(flat.segment(off, b.ambient_dim()));
      off += b.ambient_dim();
    }
    return v;
  }

  Vector flat() const {
    int n = 0;
    for (const auto& b : blocks) n += static_cast<int>(b.size());
    Vector out(n);
    int off = 0;
    for (const auto& b : blocks) {
      out.segment(off, b.size()) = b;
      off += static_cast<int>(b.size());
    }
    return out;
  }

  bool shaped_to(const ConeSpec& cone) const {
    if (blocks.size() != cone.blocks.size()) return false;
    for (size_t i = 0; i < blocks.size(); ++i)
      if (blocks[i].size() != cone.blocks[i].ambient_dim()) return false;
    return true;
  }

  BlockVector& operator+=(const BlockVector& o) {
    require_same_shape(o);
    for (size_t i = 0; i < blocks.size(); ++i) blocks[i] += o.blocks[i];
    return *this;
  }
  BlockVector& operator-=(const BlockVector& o) {
    require_same_shape(o);
    for (size_t i = 0; i < blocks.size(); ++i) blocks[i] -= o.blocks[i];
    return *this;
  }
  BlockVector& operator*=(double s) {
    for (auto& b : blocks) b *= s;
    return *this;
  }
  friend BlockVector operator+(BlockVector a, const BlockVector& b) { return a += b; }
  friend BlockVector operator-(BlockVector a, const BlockVector& b) { return a -= b; }
  friend BlockVector operator*(double s, BlockVector a) { return a *= s; }

  void require_same_shape(const BlockVector& o) const {
    if (blocks.size() != o.blocks.size())
      throw std::invalid_argument("BlockVector: block count mismatch");
    for (size_t i = 0; i < blocks.size(); ++i)
      if (blocks[i].size() != o.blocks[i].size())
        throw std::invalid_argument("BlockVector: block shape mismatch");
  }
};

inline void require_shaped(const ConeSpec& cone, const BlockVector& v,
                           const char* who) {
  if (!v.shaped_to(cone))
    throw std::invalid_argument(std::string(who) + ": vector not shaped to cone");
}

/// Inner product on Y: plain dot per block; the svec packing makes the
/// PSD-block contribution equal trace(AB).
inline double inner(const BlockVector& v, const BlockVector& w) {
  v.require_same_shape(w);
  double s = 0.0;
  for (size_t i = 0; i < v.blocks.size(); ++i) s += v.blocks[i].dot(w.blocks[i]);
  return s;
}

inline double norm(const BlockVector& v) { return std::sqrt(inner(v, v)); }

namespace detail {

inline Vector project_soc(const Vector& y) {
  const double y0 = y(0);
  const Vector ybar = y.tail(y.size() - 1);
  const double r = ybar.norm();
  if (r <= y0) return y;                     // inside Q
  if (r <= -y0) return Vector::Zero(y.size());  // in the polar -Q (apex case)
  Vector out(y.size());
  const double t = 0.5 * (1.0 + y0 / r);
  out(0) = t * r;
  out.tail(y.size() - 1) = t * ybar;
  return out;
}

inline Vector clip_eigs_packed(const Vector& packed, int order, bool keep_negative) {
  EigDecomposition d = sym_eig(smat(packed, order));
  Vector clipped = d.eigenvalues;
  for (int i = 0; i < clipped.size(); ++i)
    clipped(i) = keep_negative ? std::min(clipped(i), 0.0) : std::max(clipped(i), 0.0);
  return svec(d.eigenvectors * clipped.asDiagonal() * d.eigenvectors.transpose());
}

}  // namespace detail

/// Membership in K within additive tolerance tol, blockwise.
inline bool contains(const ConeSpec& cone, const BlockVector& v, double tol = 1e-8) {
  require_shaped(cone, v, "contains");
  for (size_t i = 0; i < cone.blocks.size(); ++i) {
    const ConeBlock& b = cone.blocks[i];
    const Vector& y = v.blocks[i];
    switch (b.kind) {
      case ConeKind::NegativeOrthant:
        if ((y.array() > tol).any()) return false;
        break;
      case ConeKind::Zero:
        if ((y.array().abs() > tol).any()) return false;
        break;
      case ConeKind::SecondOrder:
        if (y.tail(y.size() - 1).norm() - y(0) > tol) return false;
        break;
      case ConeKind::NegSemidefinite: {
        EigDecomposition d = sym_eig(smat(y, b.size));
        if (d.eigenvalues(0) > tol) return false;
        break;
      }
    }
  }
  return true;
}

/// Euclidean projection onto K, blockwise closed forms.
inline BlockVector project(const ConeSpec& cone, const BlockVector& v) {
  require_shaped(cone, v, "project");
  BlockVector out = v;
  for (size_t i = 0; i < cone.blocks.size(); ++i) {
    const ConeBlock& b = cone.blocks[i];
    Vector& y = out.blocks[i];
    switch (b.kind) {
      case ConeKind::NegativeOrthant:
        y = y.cwiseMin(0.0);
        break;
      case ConeKind::Zero:
        y.setZero();
        break;
      case ConeKind::SecondOrder:
        y = detail::project_soc(y);
        break;
      case ConeKind::NegSemidefinite:
        y = detail::clip_eigs_packed(y, b.size, /*keep_negative=*/true);
        break;
    }
  }
  return out;
}

/// Euclidean projection onto the polar cone K°, blockwise closed forms
/// (kept independent of project() so the Moreau identity is a real check).
inline BlockVector project_polar(const ConeSpec& cone, const BlockVector& v) {
  require_shaped(cone, v, "project_polar");
  BlockVector out = v;
  for (size_t i = 0; i < cone.blocks.size(); ++i) {
    const ConeBlock& b = cone.blocks[i];
    Vector& y = out.blocks[i];
    switch (b.kind) {
      case ConeKind::NegativeOrthant:
        y = y.cwiseMax(0.0);
        break;
      case ConeKind::Zero:
        break;  // polar of {0} is everything
      case ConeKind::SecondOrder:
        y = -detail::project_soc(-y);  // polar of Q is -Q
        break;
      case ConeKind::NegSemidefinite:
        y = detail::clip_eigs_packed(y, b.size, /*keep_negative=*/false);
        break;
    }
  }
  return out;
}

inline double distance(const ConeSpec& cone, const BlockVector& v) {
  return norm(v - project(cone, v));
}

inline double polar_distance(const ConeSpec& cone, const BlockVector& v) {
  return norm(v - project_polar(cone, v));
}

/// Membership in the polar cone K° = K* within additive tolerance.
inline bool polar_contains(const ConeSpec& cone, const BlockVector& w, double tol = 1e-8) {
  require_shaped(cone, w, "polar_contains");
  for (size_t i = 0; i < cone.blocks.size(); ++i) {
    const ConeBlock& b = cone.blocks[i];
    const Vector& y = w.blocks[i];
    switch (b.kind) {
      case ConeKind::NegativeOrthant:
        if ((y.array() < -tol).any()) return false;
        break;
      case ConeKind::Zero:
        break;
      case ConeKind::SecondOrder:
        if (y.tail(y.size() - 1).norm() + y(0) > tol) return false;
        break;
      case ConeKind::NegSemidefinite: {
        EigDecomposition d = sym_eig(smat(y, b.size));
        if (d.eigenvalues(d.eigenvalues.size() - 1) < -tol) return false;
        break;
      }
    }
  }
  return true;
}

}  // namespace conelag
