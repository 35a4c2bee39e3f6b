#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "circlesim/rational.hpp"

namespace circlesim {

/// Univariate polynomial with exact rational coefficients, lowest degree
/// first. The zero polynomial has no coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }
  Polynomial(std::initializer_list<Rational> coefficients) : c_(coefficients) { trim(); }

  static Polynomial constant(const Rational& v) { return Polynomial({v}); }
  static Polynomial monomial(std::size_t degree, const Rational& coefficient = 1) {
    std::vector<Rational> c(degree + 1);
    c[degree] = coefficient;
    return Polynomial(std::move(c));
  }

  const std::vector<Rational>& coefficients() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// Degree; the zero polynomial reports 0.
  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  bool is_constant() const { return c_.size() <= 1; }
  Rational coefficient(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Rational& s) {
    for (auto& v : c_) v *= s;
    trim();
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  /// Antiderivative vanishing at 0.
  Polynomial antiderivative() const {
    std::vector<Rational> c(c_.size() + 1);
    for (std::size_t k = 0; k < c_.size(); ++k) c[k + 1] = c_[k] / Rational(static_cast<long>(k + 1));
    return Polynomial(std::move(c));
  }

  /// Integral over [a, b].
  Rational integral(const Rational& a, const Rational& b) const {
    auto F = antiderivative();
    return F(b) - F(a);
  }

  /// x -> p(scale * x + offset).
  Polynomial compose_affine(const Rational& scale, const Rational& offset) const {
    Polynomial result;
    Polynomial power = Polynomial::constant(1);
    Polynomial inner({offset, scale});
    for (std::size_t k = 0; k < c_.size(); ++k) {
      result += power * c_[k];
      power = power * inner;
    }
    return result;
  }

  /// x -> p(x + s).
  Polynomial shifted(const Rational& s) const { return compose_affine(1, s); }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

}  // namespace circlesim
