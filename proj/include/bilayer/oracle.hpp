#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bilayer/fieldcases.hpp"
#include "bilayer/grid.hpp"

/// Finite-difference eigenvalues of H_0 and H_2 on Dirichlet boxes. Nothing
/// here touches the intertwining operators or the closed-form spectra except
/// cross_validate, which compares against them.
namespace bilayer::oracle {

using Potential = std::function<double(double)>;

/// -d^2/dx^2 + V by second-order central differences. grid covers the box
/// including both walls; the unknowns are the grid.n - 2 interior points.
struct DiscretizedHamiltonian {
  UniformGrid grid;
  std::vector<double> diagonal;  // 2/h^2 + V(x_i), interior points
  double off_diagonal;           // -1/h^2

  int size() const { return static_cast<int>(diagonal.size()); }
};

/// Throws DomainViolation when n < 100, the box is degenerate or V is not
/// finite inside, and WindowTooSmall when V next to either wall is below
/// energy_ceiling.
DiscretizedHamiltonian discretize(const Potential& v, double lo, double hi, int n,
                                  double energy_ceiling = -std::numeric_limits<double>::infinity());

/// Same, for branch j of a case; the box must lie inside the case domain.
DiscretizedHamiltonian discretize(const CaseDefinition& c, int branch, double lo, double hi, int n,
                                  double energy_ceiling = -std::numeric_limits<double>::infinity());

/// Throws WindowTooSmall when V next to a wall of h is below energy.
void check_window(const DiscretizedHamiltonian& h, double energy);

struct Eigenpair {
  double value;
  std::vector<double> vector;  // grid.n entries, zero at both walls, sum v^2 h = 1
};

/// The `count` smallest eigenpairs, ascending, by Sturm bisection and inverse
/// iteration. Requires 1 <= count <= grid.n / 10. Throws ConvergenceFailure.
std::vector<Eigenpair> lowest_eigenpairs(const DiscretizedHamiltonian& h, int count);

/// Number of eigenvalues strictly below lambda (Sturm count).
int count_below(const DiscretizedHamiltonian& h, double lambda);

struct LevelRecord {
  int branch;
  int n;
  double closed_form;
  double oracle;
  double rel_error;  // |oracle - closed| / max(|closed|, eps1)
  double tolerance;
  std::optional<double> delta_sensitivity;  // |E(delta) - E(delta/2)| / max(|closed|, eps1)
  double overlap_defect;                    // 1 - |<oracle, closed form>|
  double l2_distance;                       // after sign alignment
  bool passed;
};

/// Oracle-only comparison of level n of H_2 with level n + 2 of H_0.
struct DeletionRecord {
  int n;
  double oracle_h0;
  double oracle_h2;
  double rel_diff;
  bool passed;
};

struct GridMetadata {
  double lo;
  double hi;
  int n;
  double h;
  std::optional<double> delta;  // singular cases only
  bool extrapolated;            // Richardson between n and (n + 1)/2 points
};

struct ValidationReport {
  CaseParams params;
  GridMetadata grid;
  double eigenvalue_tolerance;
  std::optional<double> overlap_tolerance;  // nonsingular cases only
  std::vector<LevelRecord> levels;
  std::vector<DeletionRecord> deletion;
  bool passed;
};

/// Singular cases compare to 1e-3, the others to 1e-4 and additionally
/// require 1 - |<oracle, closed form>| <= 1e-5.
bool is_singular(const CaseDefinition& c);

/// Compares levels 0..n_max of both branches, clipped to the bound counts.
/// When the grid size allows, eigenvalues are Richardson-extrapolated from
/// n and (n + 1)/2 points. Singular cases are rerun at delta/2.
ValidationReport cross_validate(const CaseDefinition& c, int n_max = 5, const GridPolicy& policy = {});

nlohmann::json to_json(const ValidationReport& r);

}  // namespace bilayer::oracle
