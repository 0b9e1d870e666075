#include "bilayer/susy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bilayer/errors.hpp"

namespace bilayer {
namespace {

constexpr double kEdgeRatio = 1e-14;  // |psi(edge)|^2 / peak^2 for auto windows
constexpr double kTailLimit = 1e-12;
constexpr int kScanPoints = 2001;
constexpr int kMaxExpansions = 80;

struct Seed {
  double center;
  double lo;
  double hi;
};

Seed initial_window(const CaseDefinition& c, int max_level, double delta) {
  const auto& p = c.params;
  const double n = max_level;
  switch (p.kind) {
    case CaseKind::Constant: {
      const double center = -2.0 * p.k / p.omega;
      const double half = (3.0 + std::sqrt(2.0 * n + 1.0)) * std::sqrt(2.0 / p.omega);
      return {center, center - half, center + half};
    }
    case CaseKind::HyperbolicWell:
      return {0.0, -4.0 / p.alpha, 4.0 / p.alpha};
    case CaseKind::ExpDecay: {
      const double center = -std::log((c.kappa + 0.5 * p.alpha) / p.D) / p.alpha;
      return {center, center - 4.0 / p.alpha, center + 4.0 / p.alpha};
    }
    case CaseKind::TrigSingular:
      return {0.5 * (c.domain.lo + c.domain.hi), c.domain.lo + delta, c.domain.hi - delta};
    case CaseKind::HyperbolicSingular:
      return {c.domain.lo + delta, c.domain.lo + delta, 4.0 / p.alpha};
    case CaseKind::Singular:
      return {c.domain.lo + delta, c.domain.lo + delta, 4.0 * (n + p.D + 2.0) / (c.kappa * p.D)};
  }
  return {0.0, -1.0, 1.0};
}

}  // namespace

Jet derivative(const Jet& f) {
  Jet::Coeffs c{};
  for (std::size_t k = 0; k < Jet::kOrder; ++k) c[k] = (k + 1) * f.coeff(k + 1);
  return Jet::from_coeffs(c);
}

Jet IntertwinerData::eta(double x) const { return bilayer::eta(case_def, Jet::variable(x)); }

Jet IntertwinerData::gamma(double x) const {
  const Jet h = eta(x);
  return 0.5 * h * h - 0.5 * derivative(h) - potential(case_def, 0, Jet::variable(x)) +
         0.5 * (epsilon1 + epsilon2);
}

IntertwinerData make_intertwiner(const CaseDefinition& c) { return {c, c.epsilon1, c.epsilon2}; }

double gamma_fn(const CaseDefinition& c, double x) { return make_intertwiner(c).gamma(x).value(); }

double apply_L_minus(const IntertwinerData& iw, const FunctionDerivs& f, double x) {
  return f.d2 + iw.eta(x).value() * f.d1 + iw.gamma(x).value() * f.value;
}

double apply_L_plus(const IntertwinerData& iw, const FunctionDerivs& f, double x) {
  const Jet h = iw.eta(x);
  return f.d2 - h.value() * f.d1 + (iw.gamma(x).value() - h.d(1)) * f.value;
}

Jet apply_L_minus(const IntertwinerData& iw, const Jet& f, double x) {
  const Jet df = derivative(f);
  return derivative(df) + iw.eta(x) * df + iw.gamma(x) * f;
}

Jet apply_L_plus(const IntertwinerData& iw, const Jet& f, double x) {
  const Jet h = iw.eta(x);
  const Jet df = derivative(f);
  return derivative(df) - h * df + (iw.gamma(x) - derivative(h)) * f;
}

Jet apply_hamiltonian(const CaseDefinition& c, int branch, const Jet& f, double x) {
  return -derivative(derivative(f)) + potential(c, branch, Jet::variable(x)) * f;
}

double default_delta(const CaseDefinition& c) {
  if (c.params.kind == CaseKind::Singular) return 1e-6;
  return 1e-6 / c.params.alpha;
}

UniformGrid auto_grid(const std::vector<EigenfunctionSpec>& specs, const GridPolicy& policy) {
  if (specs.empty()) throw DomainViolation("auto_grid needs at least one eigenfunction");
  const CaseDefinition& c = specs.front().case_def();
  const double delta = policy.delta.value_or(default_delta(c));
  if (!(delta > 0.0)) throw NonPositiveParameter("wall offset delta must be positive");

  int max_level = 0;
  for (const auto& s : specs) max_level = std::max(max_level, s.level() + s.branch());
  const Seed seed = initial_window(c, max_level, delta);

  double lo = policy.lo.value_or(seed.lo);
  double hi = policy.hi.value_or(seed.hi);
  const bool grow_lo = !policy.lo && !std::isfinite(c.domain.lo);
  const bool grow_hi = !policy.hi && !std::isfinite(c.domain.hi);
  if (!c.domain.contains(lo) || !c.domain.contains(hi) || !(lo < hi))
    throw DomainViolation("window must lie strictly inside the case domain with lo < hi");

  for (int iter = 0; (grow_lo || grow_hi) && iter < kMaxExpansions; ++iter) {
    const UniformGrid scan = make_grid(lo, hi, kScanPoints);
    bool lo_ok = true, hi_ok = true;
    for (const auto& s : specs) {
      double peak = 0.0;
      for (int i = 0; i < scan.n; ++i) peak = std::max(peak, std::abs(s.value(scan.x(i))));
      const double floor = kEdgeRatio * peak * peak;
      const double vlo = s.value(lo), vhi = s.value(hi);
      lo_ok = lo_ok && vlo * vlo <= floor;
      hi_ok = hi_ok && vhi * vhi <= floor;
    }
    if ((lo_ok || !grow_lo) && (hi_ok || !grow_hi)) return make_grid(lo, hi, policy.n);
    if (grow_lo && !lo_ok) lo = seed.center - 1.5 * (seed.center - lo);
    if (grow_hi && !hi_ok) hi = seed.center + 1.5 * (hi - seed.center);
  }
  if (grow_lo || grow_hi)
    throw TailMassTooLarge("automatic window failed to capture the eigenfunction tails");
  return make_grid(lo, hi, policy.n);
}

double tail_mass_fraction(const EigenfunctionSpec& spec, const UniformGrid& grid) {
  std::vector<double> sq(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double v = spec.value(grid.x(i));
    sq[i] = v * v;
  }
  const double inside = trapezoid(grid, sq);
  if (!(inside > 0.0)) return std::numeric_limits<double>::infinity();

  // psi ~ psi(e) exp(-r |x - e|) beyond the edge gives mass psi(e)^2 / (2r).
  auto tail = [&](double edge, double outward) {
    const auto d = spec.eval(edge);
    if (d.value == 0.0) return 0.0;
    const double rate = -outward * d.d1 / d.value;
    if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
    return d.value * d.value / (2.0 * rate);
  };
  return (tail(grid.lo, -1.0) + tail(grid.hi, 1.0)) / inside;
}

SampledFunction sample(const EigenfunctionSpec& spec, const UniformGrid& grid) {
  SampledFunction out{grid, std::vector<double>(grid.n), std::vector<double>(grid.n)};
  for (int i = 0; i < grid.n; ++i) {
    const auto d = spec.eval(grid.x(i));
    out.values[i] = d.value;
    out.d1[i] = d.d1;
  }
  return out;
}

EigenfunctionSpec normalize(const EigenfunctionSpec& spec, const UniformGrid& grid) {
  const double tail = tail_mass_fraction(spec, grid);
  if (!(tail <= kTailLimit))
    throw TailMassTooLarge("estimated tail mass " + std::to_string(tail) + " outside [" +
                           std::to_string(grid.lo) + ", " + std::to_string(grid.hi) +
                           "] exceeds 1e-12 for level " + std::to_string(spec.level()) +
                           " of branch " + std::to_string(spec.branch()));
  const double norm = sample(spec, grid).l2_norm();
  return spec.with_norm_constant(spec.norm_constant().value_or(1.0) / norm);
}

EigenfunctionSpec normalize(const EigenfunctionSpec& spec, const GridPolicy& policy) {
  return normalize(spec, auto_grid({spec}, policy));
}

double intertwining_residual(const CaseDefinition& c, int n, const UniformGrid& grid) {
  if (!is_bound(c, 0, n))
    throw LevelOutOfRange("level " + std::to_string(n) + " of H_0 is not bound");
  if (n <= 1) return 0.0;
  const auto psi = aux_eigenfunction(c, 0, n);
  const auto iw = make_intertwiner(c);
  std::vector<double> r2(grid.n), g2(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const Jet f = psi.jet(x);
    const Jet g = apply_L_minus(iw, f, x);
    const double lhs = apply_hamiltonian(c, 2, g, x).value();
    const double rhs = apply_L_minus(iw, apply_hamiltonian(c, 0, f, x), x).value();
    r2[i] = (lhs - rhs) * (lhs - rhs);
    g2[i] = g.value() * g.value();
  }
  return std::sqrt(trapezoid(grid, r2) / trapezoid(grid, g2));
}

double intertwining_residual(const CaseDefinition& c, int n) {
  if (!is_bound(c, 0, n))
    throw LevelOutOfRange("level " + std::to_string(n) + " of H_0 is not bound");
  if (n <= 1) return 0.0;
  return intertwining_residual(c, n, auto_grid({aux_eigenfunction(c, 0, n)}));
}

SampledFunction intertwined_partner(const CaseDefinition& c, int n, const UniformGrid& grid) {
  const auto psi = normalize(aux_eigenfunction(c, 0, n + 2), grid);
  const double e = aux_eigenvalue(c, 0, n + 2);
  const double scale = 1.0 / std::sqrt((e - aux_eigenvalue(c, 0, 0)) * (e - aux_eigenvalue(c, 0, 1)));
  const auto iw = make_intertwiner(c);
  SampledFunction out{grid, std::vector<double>(grid.n), {}};
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    out.values[i] = scale * apply_L_minus(iw, psi.eval(x), x);
  }
  return out;
}

std::string to_string(Branch b) { return b == Branch::Electron ? "electron" : "hole"; }

double bilayer_energy(const CaseDefinition& c, int n) {
  if (n < 1) throw LevelOutOfRange("bilayer energy needs aux index n >= 1");
  const double e = aux_eigenvalue(c, 0, n);
  if (n == 1) return 0.0;
  return std::sqrt((e - aux_eigenvalue(c, 0, 0)) * (e - aux_eigenvalue(c, 0, 1)));
}

double bilayer_energy_gamma_form(const CaseDefinition& c, int n) {
  if (n < 1) throw LevelOutOfRange("bilayer energy needs aux index n >= 1");
  const double e = aux_eigenvalue(c, 0, n);
  if (n == 1) return 0.0;
  return e * std::sqrt(1.0 - aux_eigenvalue(c, 0, 1) / e);
}

SpectrumResult spectrum(const CaseDefinition& c, int n_max) {
  if (n_max < 1) throw DomainViolation("n_max must be at least 1");
  int top = n_max;
  if (const auto count = bound_state_count(c, 0)) top = std::min(top, *count - 1);
  SpectrumResult out{c, {}};
  out.levels.push_back({0, 0.0, 2, Branch::Electron, aux_eigenvalue(c, 0, 0), std::nullopt});
  for (int n = 2; n <= top; ++n) {
    const double e = bilayer_energy(c, n);
    const double aux0 = aux_eigenvalue(c, 0, n);
    const double aux2 = aux_eigenvalue(c, 2, n - 2);
    out.levels.push_back({n - 1, e, 1, Branch::Electron, aux0, aux2});
    out.levels.push_back({n - 1, -e, 1, Branch::Hole, aux0, aux2});
  }
  return out;
}

double to_physical_units(double e_natural, double length_scale) {
  if (!(length_scale > 0.0) || !std::isfinite(length_scale))
    throw NonPositiveParameter("length scale must be positive");
  constexpr double hbar = 1.054571817e-34;       // J s
  constexpr double m_e = 9.1093837015e-31;       // kg
  constexpr double electron_volt = 1.602176634e-19;  // J
  constexpr double m_star = 0.054 * m_e;
  return e_natural * hbar * hbar / (2.0 * m_star * length_scale * length_scale) / electron_volt;
}

double current_to_physical_units(double j_natural, double length_scale) {
  constexpr double hbar = 1.054571817e-34;
  constexpr double electron_volt = 1.602176634e-19;
  return to_physical_units(j_natural, length_scale) * electron_volt / hbar;
}

}  // namespace bilayer
