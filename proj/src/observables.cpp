#include "bilayer/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "bilayer/errors.hpp"

namespace bilayer {
namespace {

void require_level(const CaseDefinition& c, int level) {
  if (level < 0) throw LevelOutOfRange("level index must be non-negative");
  if (!is_bound(c, 0, level + 1))
    throw LevelOutOfRange("level " + std::to_string(level) + " is not bound for " +
                          to_string(c.params.kind));
}

std::vector<EigenfunctionSpec> level_specs(const CaseDefinition& c, int level) {
  if (level == 0) return {aux_eigenfunction(c, 0, 0), aux_eigenfunction(c, 0, 1)};
  return {aux_eigenfunction(c, 0, level + 1), aux_eigenfunction(c, 2, level - 1)};
}

void require_envelope(const CaseDefinition& c) {
  switch (c.params.kind) {
    case CaseKind::HyperbolicWell:
    case CaseKind::ExpDecay:
    case CaseKind::HyperbolicSingular:
      return;
    default:
      throw EnvelopeUndefined("envelope undefined for " + to_string(c.params.kind) + " field");
  }
}

// kappa as a function of k for the envelope cases.
double kappa_of_k(const CaseParams& p, double k) {
  switch (p.kind) {
    case CaseKind::HyperbolicWell:
      return 2.0 * k * (p.D - p.alpha) / (2.0 * p.D - p.alpha);
    case CaseKind::ExpDecay:
      return k + 0.5 * p.alpha;
    default:
      return 2.0 * k * (p.D + p.alpha) / (2.0 * p.D + p.alpha);
  }
}

// Positive while aux level n is bound; kappa > 0 side only.
double bound_margin(const CaseParams& p, int n, double kappa) {
  switch (p.kind) {
    case CaseKind::HyperbolicWell: {
      const double g = p.D - n * p.alpha;
      return g * g - p.D * kappa;
    }
    case CaseKind::ExpDecay:
      return kappa - n * p.alpha;
    default: {
      const double g = p.D + n * p.alpha;
      return p.D * kappa - g * g;
    }
  }
}

}  // namespace

UniformGrid level_grid(const CaseDefinition& c, int level, const GridPolicy& policy) {
  require_level(c, level);
  return auto_grid(level_specs(c, level), policy);
}

DensityProfile probability_density(const CaseDefinition& c, int level, const UniformGrid& grid,
                                   int ground_component) {
  require_level(c, level);
  DensityProfile out{grid, std::vector<double>(grid.n), level, -1};
  if (level == 0) {
    if (ground_component != 0 && ground_component != 1)
      throw DomainViolation("ground component must be 0 or 1");
    out.ground_component = ground_component;
    const auto psi = normalize(aux_eigenfunction(c, 0, ground_component), grid);
    for (int i = 0; i < grid.n; ++i) {
      const double v = psi.value(grid.x(i));
      out.rho[i] = v * v;
    }
    return out;
  }
  const auto specs = level_specs(c, level);
  const auto psi0 = normalize(specs[0], grid);
  const auto psi2 = normalize(specs[1], grid);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const double a = psi0.value(x);
    const double b = psi2.value(x);
    out.rho[i] = 0.5 * (a * a + b * b);
  }
  return out;
}

CurrentProfile current_density(const CaseDefinition& c, int level, const UniformGrid& grid,
                               Branch branch) {
  require_level(c, level);
  CurrentProfile out{grid, std::vector<double>(grid.n, 0.0), std::vector<double>(grid.n, 0.0),
                     level, branch};
  if (level == 0) return out;

  const auto specs = level_specs(c, level);
  const auto psi0 = normalize(specs[0], grid);
  const auto psi2 = normalize(specs[1], grid);
  const auto iw = make_intertwiner(c);

  // Fix the sign of psi^(2) to that of L2- psi^(0).
  double overlap = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    overlap += apply_L_minus(iw, psi0.eval(x), x) * psi2.value(x);
  }
  const double sign = (overlap < 0.0 ? -1.0 : 1.0) * (branch == Branch::Electron ? -1.0 : 1.0);

  const double k = c.params.k;
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    const auto f = psi0.eval(x);
    const auto g = psi2.eval(x);
    const std::complex<double> p(f.value), dp(f.d1);
    const std::complex<double> u(sign * g.value), du(sign * g.d1);
    // W(p*, u) + 2k p u* for J_x, W(p*, u) - 2k p u* for J_y.
    const std::complex<double> w = std::conj(p) * du - std::conj(dp) * u;
    out.jx[i] = 0.5 * (w + 2.0 * k * p * std::conj(u)).imag();
    out.jy[i] = 0.5 * (w - 2.0 * k * p * std::conj(u)).real();
  }
  return out;
}

EnvelopeQuadratic envelope(const CaseDefinition& c) {
  require_envelope(c);
  const double D = c.params.D;
  const double al = c.params.alpha;
  switch (c.params.kind) {
    case CaseKind::HyperbolicWell: {
      const double s = 2.0 * D - al;
      return {4.0 * D * (D - al) / (s * s), 2.0 * al - 4.0 * D * D / s, D * (D - al)};
    }
    case CaseKind::ExpDecay:
      return {1.0, 0.0, -0.25 * al * al};
    default: {
      const double s = 2.0 * D + al;
      return {4.0 * D * (D + al) / (s * s), -2.0 * al - 4.0 * D * D / s, D * (D + al)};
    }
  }
}

TouchReport envelope_touch_check(const CaseDefinition& c, int n) {
  require_envelope(c);
  const auto& p = c.params;
  if (n < 1) throw LevelOutOfRange("touch check needs aux index n >= 1");
  if (p.kind == CaseKind::HyperbolicWell && !(p.D - n * p.alpha > 0.0))
    throw LevelOutOfRange("level " + std::to_string(n) + " has no boundary with kappa > 0");

  const double k0 = p.kind == CaseKind::ExpDecay ? -0.5 * p.alpha : 0.0;
  const double dir = kappa_of_k(p, k0 + 1.0) > kappa_of_k(p, k0) ? 1.0 : -1.0;
  auto margin = [&](double k) { return bound_margin(p, n, kappa_of_k(p, k)); };

  const bool start_bound = margin(k0) > 0.0;
  double inner = k0;
  double step = 1.0 / p.alpha;
  double outer = k0 + dir * step;
  for (int i = 0; (margin(outer) > 0.0) == start_bound; ++i) {
    if (i > 200) throw LevelOutOfRange("no boundary found for level " + std::to_string(n));
    inner = outer;
    step *= 2.0;
    outer = k0 + dir * step;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (inner + outer);
    if (mid == inner || mid == outer) break;
    ((margin(mid) > 0.0) == start_bound ? inner : outer) = mid;
  }
  const double kb = 0.5 * (inner + outer);

  auto at = p;
  at.k = kb;
  auto cb = c;
  cb.params = at;
  cb.kappa = kappa_of_k(p, kb);
  const double e = aux_level_formula(cb, n);
  const double e0 = aux_level_formula(cb, 0);
  const double e1 = aux_level_formula(cb, 1);
  const double energy = std::sqrt(std::max(0.0, (e - e0) * (e - e1)));
  const double env = envelope(c)(kb);
  return {n, kb, cb.kappa, energy, env, std::abs(energy - env) / std::max(std::abs(env), 1.0)};
}

std::vector<int> touch_levels(const CaseDefinition& c, int max_level) {
  require_envelope(c);
  std::vector<int> out;
  for (int n = 1; n <= max_level; ++n) {
    if (c.params.kind == CaseKind::HyperbolicWell && !(c.params.D - n * c.params.alpha > 0.0)) break;
    out.push_back(n);
  }
  return out;
}

double structure_factor_abs(double kx, double ky, double lattice_a) {
  using std::numbers::sqrt3;
  const std::complex<double> s =
      2.0 * std::exp(std::complex<double>(0.0, kx * lattice_a / (2.0 * sqrt3))) *
          std::cos(ky * lattice_a / 2.0) +
      std::exp(std::complex<double>(0.0, -kx * lattice_a / sqrt3));
  return std::abs(s);
}

std::array<double, 4> tight_binding_bands(double kx, double ky, double lattice_a) {
  const double s = structure_factor_abs(kx, ky, lattice_a);
  const double h = 0.5 * kGamma1;
  const double r = std::sqrt(h * h + kGamma0 * kGamma0 * s * s);
  return {-h + r, h - r, h + r, -h - r};
}

std::array<double, 2> k_point(double lattice_a) {
  return {0.0, 4.0 * std::numbers::pi / (3.0 * lattice_a)};
}

double parabolic_band(double q, double lattice_a) {
  return 3.0 * kGamma0 * kGamma0 * lattice_a * lattice_a * q * q / (4.0 * kGamma1);
}

double parabola_worst_error(double qa_max, int radial, int angular) {
  const auto kp = k_point(1.0);
  double worst = 0.0;
  for (int i = 1; i <= radial; ++i) {
    const double q = qa_max * i / radial;
    const double want = parabolic_band(q, 1.0);
    for (int j = 0; j < angular; ++j) {
      const double th = 2.0 * std::numbers::pi * j / angular;
      const auto b = tight_binding_bands(kp[0] + q * std::cos(th), kp[1] + q * std::sin(th), 1.0);
      worst = std::max(worst, std::abs(b[0] - want) / want);
      worst = std::max(worst, std::abs(b[1] + want) / want);
    }
  }
  return worst;
}

}  // namespace bilayer
