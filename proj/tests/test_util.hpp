#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bilayer/fieldcases.hpp"

namespace bilayer::testing {

inline double rel_err(double got, double want, double floor = 0.0) {
  return std::abs(got - want) / std::max({std::abs(want), floor, 1e-300});
}

/// Central difference of a callable at x.
template <class F>
double central_diff(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20260517);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

/// Parameter sets of the published figures; constant field uses omega = 1, k = 1.
inline CaseParams figure_params(CaseKind kind) {
  CaseParams p;
  p.kind = kind;
  switch (kind) {
    case CaseKind::Constant: p.omega = 1.0; p.k = 1.0; break;
    case CaseKind::HyperbolicWell: p.D = 8.0; p.alpha = 1.0; p.k = 1.1; break;
    case CaseKind::TrigSingular: p.D = 4.0; p.alpha = 1.0; p.k = 1.8; break;
    case CaseKind::ExpDecay: p.D = 1.0; p.alpha = 1.0; p.k = 5.5; break;
    case CaseKind::HyperbolicSingular: p.D = 3.0; p.alpha = 1.0; p.k = 26.25; break;
    case CaseKind::Singular: p.D = 3.0; p.k = 17.5; break;
  }
  return p;
}

inline CaseDefinition figure_case(CaseKind kind) { return make_case(figure_params(kind)); }

inline const std::vector<CaseKind>& all_kinds() {
  static const std::vector<CaseKind> kinds{CaseKind::Constant,     CaseKind::HyperbolicWell,
                                           CaseKind::TrigSingular, CaseKind::ExpDecay,
                                           CaseKind::HyperbolicSingular, CaseKind::Singular};
  return kinds;
}

/// Interior sample points away from singular walls, spanning where the low
/// levels live.
inline std::vector<double> interior_points(const CaseDefinition& c, int count) {
  double lo = c.domain.lo, hi = c.domain.hi;
  switch (c.params.kind) {
    case CaseKind::Constant: lo = -8.0; hi = 4.0; break;
    case CaseKind::HyperbolicWell: lo = -12.0; hi = 6.0; break;
    case CaseKind::TrigSingular: lo += 0.05; hi -= 0.05; break;
    case CaseKind::ExpDecay: lo = -2.0; hi = 8.0; break;
    case CaseKind::HyperbolicSingular: lo = 0.02; hi = 4.0; break;
    case CaseKind::Singular: lo = 0.01; hi = 2.0; break;
  }
  std::vector<double> xs;
  for (int i = 0; i < count; ++i) xs.push_back(lo + (hi - lo) * (i + 0.5) / count);
  return xs;
}

}  // namespace bilayer::testing
