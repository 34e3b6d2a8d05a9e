#pragma once

// Second-order forward-mode jets over a fixed number of coordinates.
//
// A Jet carries a value, its gradient and its Hessian with respect to the
// coordinates of a chart. Every jet also records how many derivative orders
// are still valid: taking a partial derivative of a jet consumes one order,
// so quantities such as covariant derivatives of covariant derivatives can be
// formed by plain jet arithmetic and reading an order that is no longer
// available is reported instead of returning garbage.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qstat {

class Jet {
 public:
  static constexpr int kMaxOrder = 2;

  Jet() = default;

  // Constant jets have dimension zero and broadcast against any chart.
  Jet(double value) : value_(value) {}  // NOLINT(google-explicit-constructor)

  static Jet constant(double value, std::size_t dim) {
    Jet j(value);
    j.resize(dim);
    return j;
  }

  static Jet variable(double value, std::size_t dim, std::size_t index) {
    if (index >= dim) throw std::out_of_range("Jet::variable: index out of range");
    Jet j = constant(value, dim);
    j.grad_[index] = 1.0;
    return j;
  }

  double value() const { return value_; }
  std::size_t dim() const { return dim_; }
  int order() const { return order_; }

  double grad(std::size_t i) const {
    require_order(1, "gradient");
    return dim_ == 0 ? 0.0 : grad_.at(i);
  }
  double hess(std::size_t i, std::size_t j) const {
    require_order(2, "Hessian");
    return dim_ == 0 ? 0.0 : hess_.at(i * dim_ + j);
  }
  std::vector<double> gradient(std::size_t dim) const {
    require_order(1, "gradient");
    std::vector<double> g(dim, 0.0);
    for (std::size_t i = 0; i < std::min(dim, dim_); ++i) g[i] = grad_[i];
    return g;
  }

  // d/dx_i as a jet with one fewer valid order.
  Jet partial(std::size_t i) const {
    require_order(1, "partial derivative");
    if (dim_ == 0) {
      Jet z(0.0);
      z.order_ = order_ - 1;
      return z;
    }
    if (i >= dim_) throw std::out_of_range("Jet::partial: index out of range");
    Jet d = constant(grad_[i], dim_);
    if (order_ >= 2) {
      for (std::size_t j = 0; j < dim_; ++j) d.grad_[j] = hess_[i * dim_ + j];
    }
    d.order_ = order_ - 1;
    return d;
  }

  // Applies a scalar function given f(v), f'(v), f''(v).
  Jet apply(double f0, double f1, double f2) const {
    Jet r = constant(f0, dim_);
    r.order_ = order_;
    for (std::size_t i = 0; i < dim_; ++i) r.grad_[i] = f1 * grad_[i];
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = i; j < dim_; ++j) {
        const double h = f1 * hess_[i * dim_ + j] + f2 * grad_[i] * grad_[j];
        r.hess_[i * dim_ + j] = h;
        r.hess_[j * dim_ + i] = h;
      }
    }
    return r;
  }

  Jet operator-() const { return apply(-value_, -1.0, 0.0); }

  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(const Jet& a, const Jet& b) { return combine(a, b, 1.0); }
  friend Jet operator-(const Jet& a, const Jet& b) { return combine(a, b, -1.0); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const std::size_t n = std::max(a.dim_, b.dim_);
    const Jet x = a.widened(n);
    const Jet y = b.widened(n);
    Jet r = constant(x.value_ * y.value_, n);
    r.order_ = std::min(x.order_, y.order_);
    for (std::size_t i = 0; i < n; ++i) r.grad_[i] = x.grad_[i] * y.value_ + x.value_ * y.grad_[i];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double h = x.hess_[i * n + j] * y.value_ + x.value_ * y.hess_[i * n + j] +
                         x.grad_[i] * y.grad_[j] + x.grad_[j] * y.grad_[i];
        r.hess_[i * n + j] = h;
        r.hess_[j * n + i] = h;
      }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.value_ == 0.0) throw std::domain_error("division by zero");
    return a * reciprocal(b);
  }

  friend Jet reciprocal(const Jet& b) {
    const double v = b.value_;
    return b.apply(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
  }

 private:
  void resize(std::size_t dim) {
    dim_ = dim;
    grad_.assign(dim, 0.0);
    hess_.assign(dim * dim, 0.0);
  }

  Jet widened(std::size_t dim) const {
    if (dim_ == dim) return *this;
    if (dim_ != 0) throw std::invalid_argument("Jet: mismatched dimensions");
    Jet w = constant(value_, dim);
    w.order_ = order_;
    return w;
  }

  static Jet combine(const Jet& a, const Jet& b, double sign) {
    const std::size_t n = std::max(a.dim_, b.dim_);
    Jet r = a.widened(n);
    const Jet y = b.widened(n);
    r.value_ += sign * y.value_;
    r.order_ = std::min(r.order_, y.order_);
    for (std::size_t i = 0; i < n; ++i) r.grad_[i] += sign * y.grad_[i];
    for (std::size_t i = 0; i < n * n; ++i) r.hess_[i] += sign * y.hess_[i];
    return r;
  }

  void require_order(int needed, const char* what) const {
    if (order_ < needed) {
      throw std::logic_error(std::string("Jet: ") + what + " requested but only " +
                             std::to_string(order_) + " derivative order(s) are valid");
    }
  }

  double value_ = 0.0;
  std::size_t dim_ = 0;
  int order_ = kMaxOrder;
  std::vector<double> grad_;
  std::vector<double> hess_;
};

inline Jet sin(const Jet& a) {
  const double v = a.value();
  return a.apply(std::sin(v), std::cos(v), -std::sin(v));
}

inline Jet cos(const Jet& a) {
  const double v = a.value();
  return a.apply(std::cos(v), -std::sin(v), -std::cos(v));
}

inline Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.apply(e, e, e);
}

inline Jet log(const Jet& a) {
  const double v = a.value();
  if (!(v > 0.0)) throw std::domain_error("log of non-positive value");
  return a.apply(std::log(v), 1.0 / v, -1.0 / (v * v));
}

inline Jet sqrt(const Jet& a) {
  const double v = a.value();
  if (!(v > 0.0)) throw std::domain_error("sqrt of non-positive value");
  const double s = std::sqrt(v);
  return a.apply(s, 0.5 / s, -0.25 / (s * v));
}

// Integer powers accept any base except zero with a negative exponent.
inline Jet pow_int(const Jet& a, long exponent) {
  const double v = a.value();
  if (v == 0.0 && exponent < 0) throw std::domain_error("zero raised to a negative power");
  const double n = static_cast<double>(exponent);
  auto p = [v](long k) { return k == 0 ? 1.0 : std::pow(v, static_cast<double>(k)); };
  const double f0 = p(exponent);
  const double f1 = exponent == 0 ? 0.0 : n * p(exponent - 1);
  const double f2 = (exponent == 0 || exponent == 1) ? 0.0 : n * (n - 1.0) * p(exponent - 2);
  return a.apply(f0, f1, f2);
}

// Real powers require a positive base.
inline Jet pow_real(const Jet& a, double exponent) {
  const double v = a.value();
  if (!(v > 0.0)) throw std::domain_error("non-integer power of non-positive base");
  return a.apply(std::pow(v, exponent), exponent * std::pow(v, exponent - 1.0),
                 exponent * (exponent - 1.0) * std::pow(v, exponent - 2.0));
}

}  // namespace qstat
