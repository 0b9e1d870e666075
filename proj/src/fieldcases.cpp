#include "bilayer/fieldcases.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bilayer/errors.hpp"

namespace bilayer {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog2 = std::log(2.0);

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw NonPositiveParameter(std::string(name) + " must be positive and finite, got " + fmt(v));
}

int shift_of(int branch) {
  if (branch != 0 && branch != 2)
    throw DomainViolation("branch must be 0 or 2, got " + std::to_string(branch));
  return branch == 2 ? 2 : 0;
}

void require_interior(const CaseDefinition& c, double x) {
  if (!c.domain.contains(x) || !std::isfinite(x))
    throw DomainViolation("x = " + fmt(x) + " outside the open domain (" + fmt(c.domain.lo) + ", " +
                          fmt(c.domain.hi) + ") of the " + to_string(c.params.kind) + " case");
}

}  // namespace

double aux_level_formula(const CaseDefinition& c, double n) {
  const auto& p = c.params;
  const double K = c.kappa, D = p.D, a = p.alpha;
  switch (p.kind) {
    case CaseKind::Constant:
      return n * p.omega;
    case CaseKind::HyperbolicWell: {
      const double m = D - n * a;
      return D * D + K * K - m * m - K * K * D * D / (m * m);
    }
    case CaseKind::TrigSingular: {
      const double m = D + n * a;
      return K * K - D * D + m * m - K * K * D * D / (m * m);
    }
    case CaseKind::ExpDecay: {
      const double m = K - n * a;
      return K * K - m * m;
    }
    case CaseKind::HyperbolicSingular: {
      const double m = D + n * a;
      return K * K + D * D - m * m - K * K * D * D / (m * m);
    }
    case CaseKind::Singular: {
      const double m = n + D;
      return K * K * D * D * (1.0 / (D * D) - 1.0 / (m * m));
    }
  }
  return 0.0;
}

std::string to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::Constant: return "constant";
    case CaseKind::HyperbolicWell: return "hyperbolic-well";
    case CaseKind::TrigSingular: return "trig-singular";
    case CaseKind::ExpDecay: return "exp-decay";
    case CaseKind::HyperbolicSingular: return "hyperbolic-singular";
    case CaseKind::Singular: return "singular";
  }
  return "unknown";
}

CaseKind case_kind_from_string(const std::string& name) {
  for (auto k : {CaseKind::Constant, CaseKind::HyperbolicWell, CaseKind::TrigSingular,
                 CaseKind::ExpDecay, CaseKind::HyperbolicSingular, CaseKind::Singular})
    if (to_string(k) == name) return k;
  throw DomainViolation("unknown case '" + name + "'");
}

CaseDefinition make_case(const CaseParams& p) {
  CaseDefinition c{p, 0.0, 0.0, 0.0, {-kInf, kInf, false, false}};
  if (!std::isfinite(p.k)) throw DomainViolation("k must be finite");
  const double D = p.D, a = p.alpha;
  switch (p.kind) {
    case CaseKind::Constant:
      require_positive(p.omega, "omega");
      c.kappa = p.k;
      break;
    case CaseKind::HyperbolicWell:
      require_positive(a, "alpha");
      require_positive(D, "D");
      c.kappa = 2.0 * p.k * (D - a) / (2.0 * D - a);
      if (!(std::abs(c.kappa) < D))
        throw ConstraintViolation("|kappa| < D violated in hyperbolic-well case (kappa = " +
                                  fmt(c.kappa) + ", D = " + fmt(D) + ")");
      break;
    case CaseKind::TrigSingular:
      require_positive(a, "alpha");
      require_positive(D, "D");
      c.kappa = 2.0 * p.k * (D + a) / (2.0 * D + a);
      c.domain = {0.0, std::numbers::pi / a, true, true};
      break;
    case CaseKind::ExpDecay:
      require_positive(a, "alpha");
      require_positive(D, "D");
      c.kappa = p.k + a / 2.0;
      if (!(c.kappa > 0.0))
        throw ConstraintViolation("kappa > 0 violated in exp-decay case (kappa = " + fmt(c.kappa) +
                                  ")");
      break;
    case CaseKind::HyperbolicSingular:
      require_positive(a, "alpha");
      require_positive(D, "D");
      c.kappa = 2.0 * p.k * (D + a) / (2.0 * D + a);
      if (!(c.kappa > D))
        throw ConstraintViolation("kappa > D > 0 violated in hyperbolic-singular case (kappa = " +
                                  fmt(c.kappa) + ", D = " + fmt(D) + ")");
      c.domain = {0.0, kInf, true, false};
      break;
    case CaseKind::Singular:
      require_positive(D, "D");
      c.kappa = 2.0 * (1.0 + D) * p.k / (1.0 + 2.0 * D);
      if (!(c.kappa > 0.0))
        throw ConstraintViolation("kappa > 0 violated in singular case (kappa = " + fmt(c.kappa) +
                                  ")");
      c.domain = {0.0, kInf, true, false};
      break;
  }
  // Both seeds must be bound levels of H_0.
  if (!is_bound(c, 0, 1)) {
    std::string cond;
    switch (p.kind) {
      case CaseKind::HyperbolicWell: cond = "(D - alpha)^2 > D |kappa|"; break;
      case CaseKind::ExpDecay: cond = "kappa > alpha"; break;
      default: cond = "(D + alpha)^2 < kappa D"; break;
    }
    throw ConstraintViolation(cond + " violated in " + to_string(p.kind) +
                              " case: level 1 of H_0 is not bound (kappa = " + fmt(c.kappa) + ")");
  }
  c.epsilon2 = 0.0;
  c.epsilon1 = aux_level_formula(c, 1.0);
  return c;
}

Jet eta(const CaseDefinition& c, const Jet& x) {
  require_interior(c, x.value());
  const auto& p = c.params;
  const double K = c.kappa, D = p.D, a = p.alpha;
  switch (p.kind) {
    case CaseKind::Constant: return 2.0 * p.k + p.omega * x;
    case CaseKind::HyperbolicWell: return (2.0 * D - a) * (K / (D - a) + tanh(a * x));
    case CaseKind::TrigSingular: return (2.0 * D + a) * (K / (D + a) - cot(a * x));
    case CaseKind::ExpDecay: return 2.0 * K - a - 2.0 * D * exp(-a * x);
    case CaseKind::HyperbolicSingular: return (2.0 * D + a) * (K / (D + a) - coth(a * x));
    case CaseKind::Singular: return 2.0 * p.k - (1.0 + 2.0 * D) * reciprocal(x);
  }
  return Jet();
}

double eta(const CaseDefinition& c, double x) { return eta(c, Jet(x)).value(); }

double magnetic_field(const CaseDefinition& c, double x) {
  return 0.5 * eta(c, Jet::variable(x)).d(1);
}

double vector_potential(const CaseDefinition& c, double x) {
  return 0.5 * eta(c, x) - c.params.k;
}

Jet potential(const CaseDefinition& c, int branch, const Jet& x) {
  require_interior(c, x.value());
  const bool two = shift_of(branch) == 2;
  const auto& p = c.params;
  const double K = c.kappa, D = p.D, a = p.alpha;
  switch (p.kind) {
    case CaseKind::Constant: {
      const double w = p.omega;
      const Jet u = x + 2.0 * p.k / w;
      return (w * w / 4.0) * u * u + (two ? 1.5 * w : -0.5 * w);
    }
    case CaseKind::HyperbolicWell: {
      const double co = two ? (D - a) * (D - 2.0 * a) : D * (D + a);
      const Jet ch = cosh(a * x);
      return D * D + K * K - co * reciprocal(ch * ch) + 2.0 * K * D * tanh(a * x);
    }
    case CaseKind::TrigSingular: {
      const double co = two ? (D + 2.0 * a) * (D + a) : D * (D - a);
      const Jet sn = sin(a * x);
      return K * K - D * D + co * reciprocal(sn * sn) - 2.0 * K * D * cot(a * x);
    }
    case CaseKind::ExpDecay: {
      const double co = two ? K - 1.5 * a : K + 0.5 * a;
      const Jet e = exp(-a * x);
      return K * K + D * D * e * e - 2.0 * D * co * e;
    }
    case CaseKind::HyperbolicSingular: {
      const double co = two ? (D + 2.0 * a) * (D + a) : D * (D - a);
      const Jet sh = sinh(a * x);
      return K * K + D * D + co * reciprocal(sh * sh) - 2.0 * K * D * coth(a * x);
    }
    case CaseKind::Singular: {
      const double co = two ? (D + 2.0) * (D + 1.0) : D * (D - 1.0);
      const Jet r = reciprocal(x);
      return K * K + co * r * r - 2.0 * K * D * r;
    }
  }
  return Jet();
}

double potential(const CaseDefinition& c, int branch, double x) {
  return potential(c, branch, Jet(x)).value();
}

PartnerPotentials partner_potentials(const CaseDefinition& c, double x) {
  return {potential(c, 0, x), potential(c, 2, x)};
}

bool is_bound(const CaseDefinition& c, int branch, int n) {
  if (n < 0) return false;
  const double m = n + shift_of(branch);
  const auto& p = c.params;
  switch (p.kind) {
    case CaseKind::HyperbolicWell: {
      const double g = p.D - m * p.alpha;
      return g > 0.0 && g * g > p.D * std::abs(c.kappa);
    }
    case CaseKind::ExpDecay:
      return c.kappa > m * p.alpha;
    case CaseKind::HyperbolicSingular: {
      const double g = p.D + m * p.alpha;
      return g * g < c.kappa * p.D;
    }
    default:
      return true;
  }
}

LevelCount bound_state_count(const CaseDefinition& c, int branch) {
  const int shift = shift_of(branch);
  switch (c.params.kind) {
    case CaseKind::Constant:
    case CaseKind::TrigSingular:
    case CaseKind::Singular:
      return std::nullopt;
    default:
      break;
  }
  int count = 0;
  while (is_bound(c, 0, count)) ++count;
  return std::max(count - shift, 0);
}

double aux_eigenvalue(const CaseDefinition& c, int branch, int n) {
  const int shift = shift_of(branch);
  if (!is_bound(c, branch, n))
    throw LevelOutOfRange("level " + std::to_string(n) + " of branch " + std::to_string(branch) +
                          " is not bound in the " + to_string(c.params.kind) + " case");
  return aux_level_formula(c, n + shift);
}

EigenfunctionSpec::EigenfunctionSpec(CaseDefinition c, int branch, int n)
    : case_(std::move(c)), branch_(branch), n_(n), family_(orthopoly::Hermite{}) {
  const int shift = shift_of(branch);
  if (n < 0) throw LevelOutOfRange("level must be non-negative");
  const auto& p = case_.params;
  const double K = case_.kappa, D = p.D, al = p.alpha;
  auto fail = [&](const std::string& what) {
    throw NotSquareIntegrable(what + " violated for level " + std::to_string(n) + " of branch " +
                              std::to_string(branch) + " in the " + to_string(p.kind) + " case");
  };
  switch (p.kind) {
    case CaseKind::Constant:
      scale_ = std::sqrt(p.omega / 2.0);
      family_ = orthopoly::Hermite{};
      break;
    case CaseKind::HyperbolicWell: {
      const double s = D / al - shift;
      const double a = D * K / (al * (D - (n + shift) * al));
      s_ = s - n + a;  // exponent pair of (1 - tanh), (1 + tanh), times 2
      a_ = s - n - a;
      if (!(s_ > 0.0)) fail("s - n + a > 0");
      if (!(a_ > 0.0)) fail("s - n - a > 0");
      family_ = orthopoly::Jacobi{s_, a_};
      break;
    }
    case CaseKind::TrigSingular: {
      s_ = D / al + shift;
      a_ = -K * D / (al * (D + (n + shift) * al));
      family_ = orthopoly::Romanovski{s_, a_};
      break;
    }
    case CaseKind::ExpDecay: {
      s_ = K / al - shift - n;  // power of zeta
      if (!(s_ > 0.0)) fail("kappa > n alpha");
      scale_ = 2.0 * D / al;
      family_ = orthopoly::AssocLaguerre{2.0 * s_};
      break;
    }
    case CaseKind::HyperbolicSingular: {
      const double s = D / al + shift;
      const double a = K * D / (al * (D + (n + shift) * al));
      if (!(a > s + n)) fail("a > s + n");
      s_ = -(s + n - a) / 2.0;  // power of (coth - 1)
      a_ = -(s + n + a) / 2.0;  // power of (coth + 1)
      family_ = orthopoly::Jacobi{-s - n + a, -s - n - a};
      break;
    }
    case CaseKind::Singular: {
      s_ = D + shift;
      scale_ = 2.0 * K * D / (n + shift + D);
      family_ = orthopoly::AssocLaguerre{shift == 0 ? 2.0 * D - 1.0 : 2.0 * D + 3.0};
      break;
    }
  }
}

EigenfunctionSpec EigenfunctionSpec::with_norm_constant(double c_n) const {
  require_positive(c_n, "normalization constant");
  EigenfunctionSpec out = *this;
  out.c_n_ = c_n;
  return out;
}

Jet EigenfunctionSpec::shape(const Jet& x) const {
  const auto& p = case_.params;
  const double al = p.alpha;
  const int n = n_;
  switch (p.kind) {
    case CaseKind::Constant: {
      const Jet z = scale_ * (x + 2.0 * p.k / p.omega);
      return exp(-0.5 * z * z) * orthopoly::evaluate(family_, n, z);
    }
    case CaseKind::HyperbolicWell: {
      const Jet y = al * x;
      const Jet log_minus = kLog2 - softplus(2.0 * y);
      const Jet log_plus = kLog2 - softplus(-2.0 * y);
      return exp(0.5 * s_ * log_minus + 0.5 * a_ * log_plus) *
             orthopoly::evaluate(family_, n, tanh(y));
    }
    case CaseKind::TrigSingular: {
      const Jet y = al * x;
      return exp((s_ + n) * log(sin(y)) + a_ * y) * orthopoly::evaluate(family_, n, cot(y));
    }
    case CaseKind::ExpDecay: {
      const Jet log_z = std::log(scale_) - al * x;
      const Jet z = exp(log_z);
      return exp(s_ * log_z - 0.5 * z) * orthopoly::evaluate(family_, n, z);
    }
    case CaseKind::HyperbolicSingular: {
      const Jet y = al * x;
      const Jet lem = log_expm1(2.0 * y);
      const Jet log_minus = kLog2 - lem;
      const Jet log_plus = kLog2 + 2.0 * y - lem;
      return exp(s_ * log_minus + a_ * log_plus) * orthopoly::evaluate(family_, n, coth(y));
    }
    case CaseKind::Singular: {
      const Jet z = scale_ * x;
      return exp(s_ * log(z) - 0.5 * z) * orthopoly::evaluate(family_, n, z);
    }
  }
  return Jet();
}

Jet EigenfunctionSpec::jet(double x) const {
  require_interior(case_, x);
  return shape(Jet::variable(x)) * c_n_.value_or(1.0);
}

FunctionDerivs EigenfunctionSpec::eval(double x) const {
  const Jet j = jet(x);
  return {j.d(0), j.d(1), j.d(2)};
}

double EigenfunctionSpec::value(double x) const {
  require_interior(case_, x);
  return shape(Jet(x)).value() * c_n_.value_or(1.0);
}

std::complex<double> EigenfunctionSpec::value_complex(double x) const {
  if (case_.params.kind != CaseKind::TrigSingular)
    throw DomainViolation("complex evaluation exists only for the trig-singular case");
  require_interior(case_, x);
  const double y = case_.params.alpha * x;
  const double pref = std::exp((s_ + n_) * std::log(std::sin(y)) + a_ * y);
  return pref * orthopoly::romanovski_complex(n_, s_, a_, cot(y)) * c_n_.value_or(1.0);
}

EigenfunctionSpec aux_eigenfunction(const CaseDefinition& c, int branch, int n) {
  return EigenfunctionSpec(c, branch, n);
}

}  // namespace bilayer
