#pragma once

#include <boost/container/small_vector.hpp>
#include <cassert>
#include <cmath>
#include <cstddef>

namespace zigzag {

/// Forward-mode scalar: a value together with its directional derivatives
/// along a set of active directions (usually one tangent per coordinate of
/// the input point).  Arithmetic applies the chain rule exactly, so every
/// tangent equals the analytic derivative up to floating-point rounding.
///
/// An empty tangent vector means "constant": all derivatives are zero.
/// This keeps literals and data values allocation-free inside hot loops.
class Dual {
 public:
  using Tangents = boost::container::small_vector<double, 8>;

  Dual() = default;
  Dual(double v) : value_(v) {}  // NOLINT: implicit by design, constants mix in
  Dual(double v, Tangents t) : value_(v), dot_(std::move(t)) {}

  /// Variable seed: value v with unit tangent in `direction` of `width`.
  static Dual seeded(double v, std::size_t width, std::size_t direction) {
    Tangents t(width, 0.0);
    t[direction] = 1.0;
    return Dual(v, std::move(t));
  }

  double value() const { return value_; }
  const Tangents& tangents() const { return dot_; }
  std::size_t width() const { return dot_.size(); }
  double tangent(std::size_t i) const { return i < dot_.size() ? dot_[i] : 0.0; }

  Dual operator-() const {
    Dual r(*this);
    r.value_ = -r.value_;
    for (double& d : r.dot_) d = -d;
    return r;
  }

  Dual& operator+=(const Dual& o) {
    value_ += o.value_;
    combine(o, [](double& a, double b) { a += b; });
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    value_ -= o.value_;
    combine(o, [](double& a, double b) { a -= b; });
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    // d(ab) = a'b + ab'
    if (o.dot_.empty()) {
      for (double& d : dot_) d *= o.value_;
    } else if (dot_.empty()) {
      dot_ = o.dot_;
      for (double& d : dot_) d *= value_;
    } else {
      assert(dot_.size() == o.dot_.size());
      for (std::size_t i = 0; i < dot_.size(); ++i) {
        dot_[i] = dot_[i] * o.value_ + value_ * o.dot_[i];
      }
    }
    value_ *= o.value_;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    double inv = 1.0 / o.value_;
    if (o.dot_.empty()) {
      value_ *= inv;
      for (double& d : dot_) d *= inv;
    } else if (dot_.empty()) {
      dot_ = o.dot_;
      double s = -value_ * inv * inv;
      for (double& d : dot_) d *= s;
      value_ *= inv;
    } else {
      assert(dot_.size() == o.dot_.size());
      double v = value_ * inv;
      for (std::size_t i = 0; i < dot_.size(); ++i) {
        dot_[i] = (dot_[i] - v * o.dot_[i]) * inv;
      }
      value_ = v;
    }
    return *this;
  }

  Dual& operator+=(double b) {
    value_ += b;
    return *this;
  }
  Dual& operator-=(double b) {
    value_ -= b;
    return *this;
  }
  Dual& operator*=(double b) {
    value_ *= b;
    for (double& d : dot_) d *= b;
    return *this;
  }
  Dual& operator/=(double b) { return *this *= (1.0 / b); }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }

  friend Dual operator+(Dual a, double b) { return a += b; }
  friend Dual operator-(Dual a, double b) { return a -= b; }
  friend Dual operator*(Dual a, double b) { return a *= b; }
  friend Dual operator/(Dual a, double b) { return a /= b; }
  friend Dual operator+(double a, Dual b) { return b += a; }
  friend Dual operator*(double a, Dual b) { return b *= a; }
  friend Dual operator-(double a, const Dual& b) { return Dual(a) -= b; }
  friend Dual operator/(double a, const Dual& b) { return Dual(a) /= b; }

  // Ordering compares values only; used by max-style constructs such as
  // log-sum-exp stabilization.
  friend bool operator<(const Dual& a, const Dual& b) { return a.value_ < b.value_; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.value_ > b.value_; }
  friend bool operator<=(const Dual& a, const Dual& b) { return a.value_ <= b.value_; }
  friend bool operator>=(const Dual& a, const Dual& b) { return a.value_ >= b.value_; }

  /// Apply the chain rule for a scalar function with value `v` and inner
  /// derivative `dv` at this point.
  Dual chain(double v, double dv) const {
    Dual r;
    r.value_ = v;
    r.dot_ = dot_;
    for (double& d : r.dot_) d *= dv;
    return r;
  }

 private:
  template <class Op>
  void combine(const Dual& o, Op op) {
    if (o.dot_.empty()) return;
    if (dot_.empty()) {
      dot_.assign(o.dot_.size(), 0.0);
    }
    assert(dot_.size() == o.dot_.size());
    for (std::size_t i = 0; i < dot_.size(); ++i) op(dot_[i], o.dot_[i]);
  }

  double value_ = 0.0;
  Tangents dot_;
};

inline Dual exp(const Dual& x) {
  double e = std::exp(x.value());
  return x.chain(e, e);
}

inline Dual log(const Dual& x) { return x.chain(std::log(x.value()), 1.0 / x.value()); }

inline Dual sqrt(const Dual& x) {
  double s = std::sqrt(x.value());
  return x.chain(s, 0.5 / s);
}

inline Dual pow(const Dual& x, double e) {
  double v = std::pow(x.value(), e);
  return x.chain(v, e * std::pow(x.value(), e - 1.0));
}

/// Logistic transform 1 / (1 + e^{-x}).
inline Dual logistic(const Dual& x) {
  double s = 1.0 / (1.0 + std::exp(-x.value()));
  return x.chain(s, s * (1.0 - s));
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Plain-double counterparts so generic potential code compiles on both
// scalar types without qualification.
inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.value(); }

}  // namespace zigzag
