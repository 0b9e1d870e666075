#pragma once

#include <complex>
#include <variant>

#include "bilayer/jet.hpp"

/// Classical orthogonal polynomials used by the closed-form eigenfunctions.
///
/// All families are evaluated by upward three-term recurrence; derivatives
/// come from the standard lowering identities, never from differencing.
///
/// Romanovski normalization: for degree n and parameters (s, t),
///
///   R_n^(s,t)(x) := (-i)^n P_n^(-s-n-it, -s-n+it)(ix),
///
/// which is real for real x. It is evaluated by a real recurrence derived
/// from the Jacobi one; `romanovski_complex` keeps the complex route for
/// cross-checking.
namespace bilayer::orthopoly {

struct ValueAndDerivative {
  double value;
  double derivative;
};

struct Hermite {};
struct Jacobi {
  double a;
  double b;
};
struct AssocLaguerre {
  double a;
};
struct Romanovski {
  double s;
  double t;
};

using PolyFamily = std::variant<Hermite, Jacobi, AssocLaguerre, Romanovski>;

/// Physicists' Hermite H_n(x).
ValueAndDerivative hermite_eval(int n, double x);

/// Jacobi P_n^(a,b)(x). Throws DegenerateParameters when a recurrence
/// denominator vanishes.
ValueAndDerivative jacobi_eval(int n, double a, double b, double x);

/// Associated (generalized) Laguerre L_n^a(x).
ValueAndDerivative assoc_laguerre_eval(int n, double a, double x);

/// Real Romanovski (pseudo-Jacobi) R_n^(s,t)(x), see the namespace comment.
ValueAndDerivative romanovski_eval(int n, double s, double t, double x);

double hermite(int n, double x);
double jacobi(int n, double a, double b, double x);
double assoc_laguerre(int n, double a, double x);
double romanovski(int n, double s, double t, double x);

/// Jacobi polynomial with complex parameters and argument.
std::complex<double> jacobi_complex(int n, std::complex<double> a, std::complex<double> b,
                                    std::complex<double> x);

/// (-i)^n P_n^(-s-n-it, -s-n+it)(ix) through complex arithmetic.
std::complex<double> romanovski_complex(int n, double s, double t, double x);

double evaluate(const PolyFamily& family, int n, double x);
ValueAndDerivative evaluate_with_derivative(const PolyFamily& family, int n, double x);

/// Derivatives of orders 0..Jet::kOrder at x via the lowering identities.
Jet::Coeffs derivatives(const PolyFamily& family, int n, double x);

/// p_n(u(x)) as a jet: polynomial derivatives composed with the inner jet.
Jet evaluate(const PolyFamily& family, int n, const Jet& u);

}  // namespace bilayer::orthopoly
