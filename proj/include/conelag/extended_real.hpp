// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#pragma once

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace conelag {

/// Value in R u {+inf}. +inf absorbs addition; NaN is rejected at
/// construction so it can never masquerade as a finite value.
class ExtendedReal {
 public:
  ExtendedReal() : value_(0.0), infinite_(false) {}
  ExtendedReal(double v) : value_(v), infinite_(false) {  // NOLINT(runtime/explicit)
    if (std::isnan(v)) throw std::domain_error("ExtendedReal: NaN");
    if (std::isinf(v)) {
      if (v < 0) throw std::domain_error("ExtendedReal: -inf");
      infinite_ = true;
      value_ = 0.0;
    }
  }

  static ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  bool is_finite() const { return !infinite_; }
  bool is_infinite() const { return infinite_; }

  /// Finite value; throws on +inf.
  double value() const {
    if (infinite_) throw std::domain_error("ExtendedReal: value() of +inf");
    return value_;
  }
  /// Finite value or +inf as an IEEE double (for printing / comparisons).
  double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  ExtendedReal& operator+=(const ExtendedReal& o) {
    if (o.infinite_) infinite_ = true;
    if (!infinite_) value_ += o.value_;
    return *this;
  }
  friend ExtendedReal operator+(ExtendedReal a, const ExtendedReal& b) {
    a += b;
    return a;
  }
  friend ExtendedReal operator*(double s, const ExtendedReal& a) {
    if (a.infinite_) {
      if (s <= 0) throw std::domain_error("ExtendedReal: nonpositive * inf");
      return infinity();
    }
    return ExtendedReal(s * a.value_);
  }

  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    return a.as_double() < b.as_double();
  }
  friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) {
    return a.as_double() <= b.as_double();
  }
  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.infinite_ == b.infinite_ && a.value_ == b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& a) {
    if (a.infinite_) return os << "inf";
    return os << a.value_;
  }

 private:
  double value_;
  bool infinite_;
};

}  // namespace conelag
