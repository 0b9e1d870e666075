#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace bilayer {

/// Truncated Taylor polynomial of a scalar function around a point, carried
/// through arithmetic so that every closed form in the library yields its
/// first four derivatives analytically (forward-mode differentiation).
///
/// Coefficients are stored as c[k] = f^(k)(x0) / k!.
class Jet {
 public:
  static constexpr std::size_t kOrder = 4;
  using Coeffs = std::array<double, kOrder + 1>;

  constexpr Jet() : c_{} {}
  constexpr Jet(double value) : c_{value, 0.0, 0.0, 0.0, 0.0} {}  // NOLINT

  static constexpr Jet variable(double x0) {
    Jet j(x0);
    j.c_[1] = 1.0;
    return j;
  }

  static Jet from_coeffs(const Coeffs& c) {
    Jet j;
    j.c_ = c;
    return j;
  }

  double value() const { return c_[0]; }
  double coeff(std::size_t k) const { return c_[k]; }

  /// k-th derivative, k <= kOrder.
  double d(std::size_t k) const {
    static constexpr std::array<double, kOrder + 1> fact{1.0, 1.0, 2.0, 6.0, 24.0};
    return c_[k] * fact[k];
  }

  Jet& operator+=(const Jet& o) {
    for (std::size_t k = 0; k <= kOrder; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t k = 0; k <= kOrder; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    Coeffs r{};
    for (std::size_t i = 0; i <= kOrder; ++i)
      for (std::size_t j = 0; i + j <= kOrder; ++j) r[i + j] += c_[i] * o.c_[j];
    c_ = r;
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator/=(const Jet& o);

  Jet operator-() const {
    Jet r = *this;
    r *= -1.0;
    return r;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }

 private:
  Coeffs c_;
};

/// f(u(x)) given f and its derivatives up to kOrder evaluated at u(x0).
inline Jet compose(const Jet::Coeffs& fderiv, const Jet& u) {
  Jet delta = u - Jet(u.value());
  Jet power(1.0);
  Jet out;
  double fact = 1.0;
  for (std::size_t k = 0; k <= Jet::kOrder; ++k) {
    if (k > 0) {
      power *= delta;
      fact *= static_cast<double>(k);
    }
    out += power * (fderiv[k] / fact);
  }
  return out;
}

inline Jet reciprocal(const Jet& u) {
  const double r = 1.0 / u.value();
  return compose({r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r, 24.0 * r * r * r * r * r}, u);
}

inline Jet& Jet::operator/=(const Jet& o) { return *this *= reciprocal(o); }

inline Jet exp(const Jet& u) {
  const double e = std::exp(u.value());
  return compose({e, e, e, e, e}, u);
}

inline Jet log(const Jet& u) {
  const double r = 1.0 / u.value();
  return compose({std::log(u.value()), r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r}, u);
}

/// u^p for u > 0 and real p.
inline Jet pow(const Jet& u, double p) {
  const double v = u.value();
  Jet::Coeffs f{};
  double coef = 1.0;
  for (std::size_t k = 0; k <= Jet::kOrder; ++k) {
    f[k] = coef * std::pow(v, p - static_cast<double>(k));
    coef *= p - static_cast<double>(k);
  }
  return compose(f, u);
}

inline Jet sin(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return compose({s, c, -s, -c, s}, u);
}

inline Jet cos(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return compose({c, -s, -c, s, c}, u);
}

inline Jet sinh(const Jet& u) {
  const double s = std::sinh(u.value()), c = std::cosh(u.value());
  return compose({s, c, s, c, s}, u);
}

inline Jet cosh(const Jet& u) {
  const double s = std::sinh(u.value()), c = std::cosh(u.value());
  return compose({c, s, c, s, c}, u);
}

namespace detail {
// Functions obeying f'' = -2 f f' (tanh, coth with f' = 1 - f^2; cot with
// f' = -(1 + f^2)) share the higher-derivative recurrence.
inline Jet::Coeffs riccati_derivs(double f0, double f1) {
  const double f2 = -2.0 * f0 * f1;
  const double f3 = -2.0 * (f1 * f1 + f0 * f2);
  const double f4 = -2.0 * (3.0 * f1 * f2 + f0 * f3);
  return {f0, f1, f2, f3, f4};
}

// Functions with g' = w, w' = w (1 - w): softplus (w = logistic) and
// log(expm1) (w = 1 / (1 - e^-u)). `wc` is 1 - w computed without cancellation.
inline Jet::Coeffs logistic_derivs(double g0, double w, double wc) {
  const double g2 = w * wc;
  return {g0, w, g2, g2 * (wc - w), g2 * (1.0 - 6.0 * w * wc)};
}
}  // namespace detail

inline Jet tanh(const Jet& u) {
  const double ch = std::cosh(u.value());
  return compose(detail::riccati_derivs(std::tanh(u.value()), 1.0 / (ch * ch)), u);
}

inline Jet coth(const Jet& u) {
  const double sh = std::sinh(u.value());
  return compose(detail::riccati_derivs(1.0 / std::tanh(u.value()), -1.0 / (sh * sh)), u);
}

inline Jet cot(const Jet& u) {
  const double c = std::cos(u.value()) / std::sin(u.value());
  return compose(detail::riccati_derivs(c, -(1.0 + c * c)), u);
}

/// log(1 + e^u), stable for large |u|.
inline double softplus(double u) { return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u))); }

inline Jet softplus(const Jet& u) {
  const double v = u.value();
  const double w = 1.0 / (1.0 + std::exp(-v));
  const double wc = 1.0 / (1.0 + std::exp(v));
  return compose(detail::logistic_derivs(softplus(v), w, wc), u);
}

/// log(e^u - 1) for u > 0, stable near 0 and for large u.
inline Jet log_expm1(const Jet& u) {
  const double v = u.value();
  const double g0 = v + std::log(-std::expm1(-v));
  const double w = -1.0 / std::expm1(-v);
  const double wc = -1.0 / std::expm1(v);
  return compose(detail::logistic_derivs(g0, w, wc), u);
}

// Plain-double overloads so closed forms can be written once as templates.
inline double coth(double u) { return 1.0 / std::tanh(u); }
inline double cot(double u) { return std::cos(u) / std::sin(u); }
inline double log_expm1(double u) { return u + std::log(-std::expm1(-u)); }

inline double value_of(double v) { return v; }
inline double value_of(const Jet& v) { return v.value(); }

}  // namespace bilayer
