#include "bilayer/orthopoly.hpp"

#include <sstream>

#include "bilayer/errors.hpp"

namespace bilayer::orthopoly {
namespace {

void require_degree(int n) {
  if (n < 0) throw DomainViolation("polynomial degree must be non-negative");
}

template <class T>
bool is_zero(const T& v) {
  return std::abs(v) == 0.0;
}

template <class T>
T jacobi_recurrence(int n, T a, T b, T x) {
  if (n == 0) return T(1.0);
  const T ab = a + b;
  T prev(1.0);
  T cur = (a - b) / 2.0 + (1.0 + ab / 2.0) * x;
  for (int m = 2; m <= n; ++m) {
    const double md = m;
    const T two_m_ab = 2.0 * md + ab;
    const T denom = 2.0 * md * (md + ab) * (two_m_ab - 2.0);
    if (is_zero(denom)) {
      std::ostringstream msg;
      msg << "Jacobi recurrence denominator vanishes at step " << m << " (a+b=" << ab << ")";
      throw DegenerateParameters(msg.str());
    }
    const T c_lin = (two_m_ab - 1.0) * (two_m_ab * (two_m_ab - 2.0) * x + a * a - b * b);
    const T c_prev = 2.0 * (md + a - 1.0) * (md + b - 1.0) * two_m_ab;
    const T next = (c_lin * cur - c_prev * prev) / denom;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

double hermite(int n, double x) {
  require_degree(n);
  if (n == 0) return 1.0;
  double prev = 1.0, cur = 2.0 * x;
  for (int m = 2; m <= n; ++m) {
    const double next = 2.0 * x * cur - 2.0 * (m - 1) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double jacobi(int n, double a, double b, double x) {
  require_degree(n);
  return jacobi_recurrence<double>(n, a, b, x);
}

double assoc_laguerre(int n, double a, double x) {
  require_degree(n);
  if (n == 0) return 1.0;
  double prev = 1.0, cur = 1.0 + a - x;
  for (int m = 2; m <= n; ++m) {
    const double next = ((2.0 * m - 1.0 + a - x) * cur - (m - 1.0 + a) * prev) / m;
    prev = cur;
    cur = next;
  }
  return cur;
}

double romanovski(int n, double s, double t, double x) {
  require_degree(n);
  if (n == 0) return 1.0;
  // Jacobi recurrence with a, b = -s-n -/+ it at argument ix, rescaled by
  // (-i)^m at every step; all coefficients end up real.
  const double c = -2.0 * (s + n);
  double prev = 1.0;
  double cur = -t + (1.0 - s - n) * x;
  for (int m = 2; m <= n; ++m) {
    const double two_m_c = 2.0 * m + c;
    const double denom = 2.0 * m * (m + c) * (two_m_c - 2.0);
    if (denom == 0.0) {
      std::ostringstream msg;
      msg << "Romanovski recurrence denominator vanishes at step " << m << " (s=" << s << ")";
      throw DegenerateParameters(msg.str());
    }
    const double shifted = m - 1.0 - s - n;
    const double c_lin = (two_m_c - 1.0) * (two_m_c * (two_m_c - 2.0) * x - 2.0 * t * c);
    const double c_prev = 2.0 * (shifted * shifted + t * t) * two_m_c;
    const double next = (c_lin * cur + c_prev * prev) / denom;
    prev = cur;
    cur = next;
  }
  return cur;
}

ValueAndDerivative hermite_eval(int n, double x) {
  return {hermite(n, x), n == 0 ? 0.0 : 2.0 * n * hermite(n - 1, x)};
}

ValueAndDerivative jacobi_eval(int n, double a, double b, double x) {
  const double value = jacobi(n, a, b, x);
  if (n == 0) return {value, 0.0};
  return {value, 0.5 * (n + a + b + 1.0) * jacobi(n - 1, a + 1.0, b + 1.0, x)};
}

ValueAndDerivative assoc_laguerre_eval(int n, double a, double x) {
  const double value = assoc_laguerre(n, a, x);
  if (n == 0) return {value, 0.0};
  return {value, -assoc_laguerre(n - 1, a + 1.0, x)};
}

ValueAndDerivative romanovski_eval(int n, double s, double t, double x) {
  const double value = romanovski(n, s, t, x);
  if (n == 0) return {value, 0.0};
  return {value, 0.5 * (1.0 - n - 2.0 * s) * romanovski(n - 1, s, t, x)};
}

std::complex<double> jacobi_complex(int n, std::complex<double> a, std::complex<double> b,
                                    std::complex<double> x) {
  require_degree(n);
  return jacobi_recurrence<std::complex<double>>(n, a, b, x);
}

std::complex<double> romanovski_complex(int n, double s, double t, double x) {
  using namespace std::complex_literals;
  const std::complex<double> a = -s - n - 1i * t;
  const std::complex<double> b = -s - n + 1i * t;
  return std::pow(-1i, n) * jacobi_complex(n, a, b, 1i * x);
}

double evaluate(const PolyFamily& family, int n, double x) {
  return std::visit(
      [&](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, Hermite>) return hermite(n, x);
        else if constexpr (std::is_same_v<F, Jacobi>) return jacobi(n, f.a, f.b, x);
        else if constexpr (std::is_same_v<F, AssocLaguerre>) return assoc_laguerre(n, f.a, x);
        else return romanovski(n, f.s, f.t, x);
      },
      family);
}

ValueAndDerivative evaluate_with_derivative(const PolyFamily& family, int n, double x) {
  const auto d = derivatives(family, n, x);
  return {d[0], d[1]};
}

Jet::Coeffs derivatives(const PolyFamily& family, int n, double x) {
  require_degree(n);
  Jet::Coeffs out{};
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        double scale = 1.0;
        for (int k = 0; k <= static_cast<int>(Jet::kOrder); ++k) {
          if (k > n || scale == 0.0) {
            out[k] = 0.0;
            continue;
          }
          const int m = n - k;
          if constexpr (std::is_same_v<F, Hermite>) {
            out[k] = scale * hermite(m, x);
            scale *= 2.0 * m;
          } else if constexpr (std::is_same_v<F, Jacobi>) {
            out[k] = scale * jacobi(m, f.a + k, f.b + k, x);
            scale *= 0.5 * (n + f.a + f.b + k + 1.0);
          } else if constexpr (std::is_same_v<F, AssocLaguerre>) {
            out[k] = scale * assoc_laguerre(m, f.a + k, x);
            scale = -scale;
          } else {
            out[k] = scale * romanovski(m, f.s, f.t, x);
            scale *= 0.5 * (1.0 - m - 2.0 * f.s);
          }
        }
      },
      family);
  return out;
}

Jet evaluate(const PolyFamily& family, int n, const Jet& u) {
  return compose(derivatives(family, n, u.value()), u);
}

}  // namespace bilayer::orthopoly
