#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <string>

#include "bilayer/jet.hpp"
#include "bilayer/orthopoly.hpp"

/// The six solvable magnetic-field profiles.
///
/// Units are natural throughout: hbar = c = e = 1 and hbar^2/2m* = 1, so that
/// eta = 2(k + A), B = eta'/2 and the auxiliary Hamiltonians are
/// H_j = -d^2/dx^2 + V_j(x).
namespace bilayer {

enum class CaseKind { Constant, HyperbolicWell, TrigSingular, ExpDecay, HyperbolicSingular, Singular };

/// CLI spelling: constant, hyperbolic-well, trig-singular, exp-decay,
/// hyperbolic-singular, singular.
std::string to_string(CaseKind kind);
CaseKind case_kind_from_string(const std::string& name);

struct CaseParams {
  CaseKind kind = CaseKind::Constant;
  double omega = 1.0;  // Constant only
  double alpha = 1.0;  // HyperbolicWell .. HyperbolicSingular
  double D = 1.0;      // all but Constant
  double k = 0.0;
  double B0 = 0.0;     // echoed in metadata, not used in any formula
};

/// Open interval (lo, hi); infinite ends are +-inf. A singular end carries an
/// inverse-square wall of V_0.
struct Domain {
  double lo;
  double hi;
  bool singular_lo;
  bool singular_hi;

  bool contains(double x) const { return x > lo && x < hi; }
};

struct CaseDefinition {
  CaseParams params;
  double kappa;
  double epsilon1;  // aux level 1 of H_0
  double epsilon2;  // aux level 0 of H_0, always 0
  Domain domain;
};

/// Validates parameters and derives kappa, the factorization energies and
/// the domain. Throws NonPositiveParameter or ConstraintViolation.
CaseDefinition make_case(const CaseParams& params);

/// Number of bound levels of a branch, or nullopt for an infinite ladder.
/// A finite count N means levels 0..N-1 are bound.
using LevelCount = std::optional<int>;

Jet eta(const CaseDefinition& c, const Jet& x);
double eta(const CaseDefinition& c, double x);
double magnetic_field(const CaseDefinition& c, double x);
double vector_potential(const CaseDefinition& c, double x);

/// V_j for branch j in {0, 2}.
Jet potential(const CaseDefinition& c, int branch, const Jet& x);
double potential(const CaseDefinition& c, int branch, double x);

struct PartnerPotentials {
  double V0;
  double V2;
};
PartnerPotentials partner_potentials(const CaseDefinition& c, double x);

/// Bound-level test used by both branches; branch 2 level n is aux level
/// n + 2 of branch 0.
bool is_bound(const CaseDefinition& c, int branch, int n);
LevelCount bound_state_count(const CaseDefinition& c, int branch);

/// Branch-0 level formula at real n without any boundness check.
double aux_level_formula(const CaseDefinition& c, double n);

/// Closed-form auxiliary eigenvalue; throws LevelOutOfRange when unbound.
double aux_eigenvalue(const CaseDefinition& c, int branch, int n);

struct FunctionDerivs {
  double value;
  double d1;
  double d2;
};

/// Closed-form auxiliary eigenfunction psi_n^(j) = c_n * exp(log prefactor) * p_n(zeta(x)).
/// The prefactor is evaluated in log space so tails underflow cleanly to 0
/// instead of producing inf * 0.
class EigenfunctionSpec {
 public:
  EigenfunctionSpec(CaseDefinition c, int branch, int n);

  const CaseDefinition& case_def() const { return case_; }
  int branch() const { return branch_; }
  int level() const { return n_; }
  const orthopoly::PolyFamily& family() const { return family_; }

  /// Unset until normalized; evaluation then uses c_n = 1.
  std::optional<double> norm_constant() const { return c_n_; }
  EigenfunctionSpec with_norm_constant(double c_n) const;

  /// psi and its derivatives up to order four at x.
  Jet jet(double x) const;
  FunctionDerivs eval(double x) const;
  double value(double x) const;

  /// Trig-singular only: value through complex pseudo-Jacobi arithmetic.
  std::complex<double> value_complex(double x) const;

 private:
  Jet shape(const Jet& x) const;

  CaseDefinition case_;
  int branch_;
  int n_;
  orthopoly::PolyFamily family_;
  double s_ = 0.0;  // exponent data, meaning depends on the case
  double a_ = 0.0;
  double scale_ = 0.0;
  std::optional<double> c_n_;
};

/// Throws NotSquareIntegrable naming the violated exponent condition.
EigenfunctionSpec aux_eigenfunction(const CaseDefinition& c, int branch, int n);

}  // namespace bilayer
