// radial: projection-free first-order methods for nonnegative maximization.
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace radial {

// Value in the extended ray [0, +inf]: either the tag `zero`, a strictly
// positive finite double, or the tag `infinite`. The tags are never stored as
// floating point values, so downstream arithmetic cannot silently produce
// 0.0 * inf. Objectives in this library evaluate into this type.
class ExtReal {
 public:
  enum class Tag { zero, finite, infinite };

  // Default-constructed value is the zero tag.
  constexpr ExtReal() : tag_(Tag::zero), value_(0.0) {}

  static constexpr ExtReal zero() { return ExtReal(); }
  static constexpr ExtReal infinity() { return ExtReal(Tag::infinite, 0.0); }

  // Wraps a strictly positive finite double. Anything else throws.
  static ExtReal finite(double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("ExtReal::finite requires 0 < v < inf, got " +
                                  std::to_string(v));
    }
    return ExtReal(Tag::finite, v);
  }

  // Clamps a real number into the type: v <= 0 maps to the zero tag, +inf to
  // the infinite tag. This is the natural constructor for (.)_+ objectives.
  static ExtReal from_value(double v) {
    if (std::isnan(v)) throw std::invalid_argument("ExtReal::from_value(nan)");
    if (v <= 0.0) return zero();
    if (std::isinf(v)) return infinity();
    return ExtReal(Tag::finite, v);
  }

  constexpr Tag tag() const { return tag_; }
  constexpr bool is_zero() const { return tag_ == Tag::zero; }
  constexpr bool is_finite() const { return tag_ == Tag::finite; }
  constexpr bool is_infinite() const { return tag_ == Tag::infinite; }

  // Finite payload; only valid on finite values.
  double value() const {
    if (tag_ != Tag::finite) {
      throw std::logic_error("ExtReal::value() on a non-finite value");
    }
    return value_;
  }

  // Collapses to a plain double (0.0 / v / +inf) for reporting.
  double as_double() const {
    switch (tag_) {
      case Tag::zero: return 0.0;
      case Tag::infinite: return std::numeric_limits<double>::infinity();
      default: return value_;
    }
  }

  // Scaling by a strictly positive real keeps the tags: t * 0 = 0 and
  // t * inf = inf for every t > 0.
  friend ExtReal operator*(double t, const ExtReal& a) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("ExtReal scaling requires 0 < t < inf");
    }
    if (a.tag_ == Tag::finite) return finite(t * a.value_);
    return a;
  }

  // Total order: zero < every finite < infinite, finites by payload.
  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.tag_ != b.tag_) {
      return rank(a.tag_) < rank(b.tag_);
    }
    return a.tag_ == Tag::finite && a.value_ < b.value_;
  }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }
  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.tag_ == b.tag_ && (a.tag_ != Tag::finite || a.value_ == b.value_);
  }
  friend bool operator!=(const ExtReal& a, const ExtReal& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const ExtReal& a) {
    switch (a.tag_) {
      case Tag::zero: return os << "0";
      case Tag::infinite: return os << "inf";
      default: return os << a.value_;
    }
  }

 private:
  constexpr ExtReal(Tag tag, double value) : tag_(tag), value_(value) {}
  static constexpr int rank(Tag t) {
    return t == Tag::zero ? 0 : (t == Tag::finite ? 1 : 2);
  }

  Tag tag_;
  double value_;
};

// True when a exceeds b by more than an additive slack (used by monotonicity
// checks). The slack only applies between two finite values; tag comparisons
// are exact.
inline bool exceeds_with_slack(const ExtReal& a, const ExtReal& b, double eps) {
  if (a.is_finite() && b.is_finite()) return a.value() > b.value() + eps;
  return a > b;
}

}  // namespace radial
