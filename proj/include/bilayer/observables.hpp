#pragma once

#include <array>
#include <vector>

#include "bilayer/fieldcases.hpp"
#include "bilayer/grid.hpp"
#include "bilayer/susy.hpp"

namespace bilayer {

/// rho for level m. m = 0 carries the ground component j in {0, 1}:
/// rho = |psi_j^(0)|^2. m >= 1: rho = (|psi_{m-1}^(2)|^2 + |psi_{m+1}^(0)|^2) / 2.
struct DensityProfile {
  UniformGrid grid;
  std::vector<double> rho;
  int level;
  int ground_component;  // j for m = 0, -1 otherwise
};

/// Natural units with hbar/2m* = 1 and the 1/sqrt(2) spinor normalization:
///   J_y = (1/2) [W(psi_{m+1}^(0), u) - 2k psi_{m+1}^(0) u],   W(f, g) = f g' - f' g,
/// where u is the upper spinor component. From L2- psi^(0) = -E psi^(2), u is
/// -psi_{m-1}^(2) for electrons and +psi_{m-1}^(2) for holes, with psi^(2) in
/// the sign of L2- psi^(0). J_x comes from the complex form and vanishes for
/// real eigenfunctions.
struct CurrentProfile {
  UniformGrid grid;
  std::vector<double> jx;
  std::vector<double> jy;
  int level;
  Branch branch;
};

/// Window covering every eigenfunction that level m uses.
UniformGrid level_grid(const CaseDefinition& c, int level, const GridPolicy& policy = {});

DensityProfile probability_density(const CaseDefinition& c, int level, const UniformGrid& grid,
                                   int ground_component = 0);

CurrentProfile current_density(const CaseDefinition& c, int level, const UniformGrid& grid,
                               Branch branch = Branch::Electron);

/// Envelope a k^2 + b k + c through the endpoints of the finite spectra.
/// effective_mass_22 is in units of m*; group_velocity in units of v_F^2 hbar / gamma_1.
struct EnvelopeQuadratic {
  double a;
  double b;
  double c;

  double effective_mass_22() const { return 1.0 / a; }
  double group_velocity(double k) const { return 2.0 * a * k + b; }
  double operator()(double k) const { return (a * k + b) * k + c; }
};

/// Throws EnvelopeUndefined outside hyperbolic-well, exp-decay and hyperbolic-singular.
EnvelopeQuadratic envelope(const CaseDefinition& c);

struct TouchReport {
  int level;          // aux index n of H_0; the bilayer level is n - 1
  double k_boundary;  // k at which level n stops being bound, kappa > 0 side
  double kappa_boundary;
  double energy;    // bilayer energy at k_boundary
  double envelope;  // a k^2 + b k + c at k_boundary
  double residual;  // |energy - envelope| / max(|envelope|, 1)
};

/// Locates the boundary by bisection on the bound-state inequality of level n.
/// Throws EnvelopeUndefined for cases without an envelope and LevelOutOfRange
/// when n < 1 or the boundary is unreachable. At n = 1 both sides vanish.
TouchReport envelope_touch_check(const CaseDefinition& c, int n);

/// Aux indices n >= 1 with a reachable boundary, capped at max_level.
std::vector<int> touch_levels(const CaseDefinition& c, int max_level);

// Tight-binding parameters in eV.
inline constexpr double kGamma0 = 2.97;
inline constexpr double kGamma1 = 0.4;

/// Four bands in eV, ordered (-g1/2 + r, g1/2 - r, g1/2 + r, -g1/2 - r) with
/// r = sqrt(g1^2/4 + g0^2 |S|^2); k in units of 1/a when lattice_a = 1.
std::array<double, 4> tight_binding_bands(double kx, double ky, double lattice_a = 1.0);

/// |S(k)|.
double structure_factor_abs(double kx, double ky, double lattice_a = 1.0);

/// The K point (0, 4 pi / 3a).
std::array<double, 2> k_point(double lattice_a = 1.0);

/// hbar^2 q^2 / 2m* = 3 g0^2 a^2 q^2 / (4 g1) in eV.
double parabolic_band(double q, double lattice_a = 1.0);

/// Worst relative deviation of the two middle bands from +-parabolic_band over
/// |q| a <= qa_max around K, sampled on `radial` radii times `angular` directions.
double parabola_worst_error(double qa_max, int radial = 50, int angular = 72);

}  // namespace bilayer
