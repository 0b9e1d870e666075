#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bilayer/fieldcases.hpp"
#include "bilayer/grid.hpp"
#include "bilayer/jet.hpp"

/// Second-order intertwining between H_0 and H_2:
///
///   L2- = d^2 + eta d + gamma,   L2+ = d^2 - eta d + gamma - eta',
///   gamma = eta^2/2 - eta'/2 - V_0 + (eps1 + eps2)/2,
///
/// with H_2 L2- = L2- H_0 and L2+ L2- = (H_0 - eps1)(H_0 - eps2).
namespace bilayer {

/// Derivative of a jet; the top coefficient is lost.
Jet derivative(const Jet& f);

struct IntertwinerData {
  CaseDefinition case_def;
  double epsilon1;
  double epsilon2;

  Jet eta(double x) const;
  Jet gamma(double x) const;
};

IntertwinerData make_intertwiner(const CaseDefinition& c);

double gamma_fn(const CaseDefinition& c, double x);

/// Value forms take (f, f', f'') at x.
double apply_L_minus(const IntertwinerData& iw, const FunctionDerivs& f, double x);
double apply_L_plus(const IntertwinerData& iw, const FunctionDerivs& f, double x);

/// Jet forms: f expanded around x; the result is exact through order
/// (valid order of f) - 2.
Jet apply_L_minus(const IntertwinerData& iw, const Jet& f, double x);
Jet apply_L_plus(const IntertwinerData& iw, const Jet& f, double x);

/// -f'' + V_j f as a jet around x.
Jet apply_hamiltonian(const CaseDefinition& c, int branch, const Jet& f, double x);

/// Default singular-wall offset: 1e-6/alpha, or 1e-6 for the singular case.
double default_delta(const CaseDefinition& c);

/// Window on which every spec's |psi|^2 at an infinite end has dropped below
/// 1e-14 of its peak; singular walls are offset by delta. Explicit bounds in
/// the policy are used as given.
UniformGrid auto_grid(const std::vector<EigenfunctionSpec>& specs, const GridPolicy& policy = {});

/// Estimated probability mass of psi outside [grid.lo, grid.hi] relative to
/// the mass inside, from the logarithmic decay rate at each edge.
double tail_mass_fraction(const EigenfunctionSpec& spec, const UniformGrid& grid);

/// Sets c_n so the trapezoid norm on grid is 1. Throws TailMassTooLarge when
/// the tail estimate exceeds 1e-12.
EigenfunctionSpec normalize(const EigenfunctionSpec& spec, const UniformGrid& grid);
EigenfunctionSpec normalize(const EigenfunctionSpec& spec, const GridPolicy& policy = {});

SampledFunction sample(const EigenfunctionSpec& spec, const UniformGrid& grid);

/// ||(H_2 L2- - L2- H_0) psi_n^(0)|| / ||L2- psi_n^(0)||; zero for the seeds n = 0, 1.
double intertwining_residual(const CaseDefinition& c, int n, const UniformGrid& grid);
double intertwining_residual(const CaseDefinition& c, int n);

/// L2- psi_{n+2}^(0) / sqrt((E_{n+2} - E_0)(E_{n+2} - E_1)) on grid, using the
/// normalized psi_{n+2}^(0).
SampledFunction intertwined_partner(const CaseDefinition& c, int n, const UniformGrid& grid);

enum class Branch { Electron, Hole };
std::string to_string(Branch b);

/// Excited index m >= 1 pairs psi_{m+1}^(0) with psi_{m-1}^(2); m = 0 is the
/// doubly degenerate ground level built from psi_0^(0), psi_1^(0).
struct SpectrumLevel {
  int index;
  double energy;
  int multiplicity;
  Branch branch;
  double aux_level_0;                 // E_{m+1}^(0), or E_0^(0) at m = 0
  std::optional<double> aux_level_2;  // E_{m-1}^(2) for m >= 1

  bool operator==(const SpectrumLevel&) const = default;
};

struct SpectrumResult {
  CaseDefinition case_def;
  std::vector<SpectrumLevel> levels;  // by index, electron before hole
};

/// sqrt((E_n - E_0)(E_n - E_1)) for aux index n >= 1.
double bilayer_energy(const CaseDefinition& c, int n);
/// The per-case form E_n sqrt(1 - E_1/E_n).
double bilayer_energy_gamma_form(const CaseDefinition& c, int n);

/// Levels from aux indices 0..n_max, clipped to the bound range; n_max >= 1.
SpectrumResult spectrum(const CaseDefinition& c, int n_max);

/// E_natural * hbar^2 / (2 m* L^2) in eV, m* = 0.054 m_e, L in meters.
double to_physical_units(double e_natural, double length_scale);

/// Current density J_natural * hbar / (2 m* L^2), in 1/s.
double current_to_physical_units(double j_natural, double length_scale);

}  // namespace bilayer
