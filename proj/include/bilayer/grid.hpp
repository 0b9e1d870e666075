#pragma once

#include <optional>
#include <vector>

namespace bilayer {

/// n equally spaced points covering [lo, hi] inclusive.
struct UniformGrid {
  double lo;
  double hi;
  int n;

  double h() const { return (hi - lo) / (n - 1); }
  double x(int i) const { return i == n - 1 ? hi : lo + i * h(); }
  std::vector<double> points() const;
};

/// Throws DomainViolation unless n >= 3 and lo < hi, both finite.
UniformGrid make_grid(double lo, double hi, int n);

/// Composite trapezoid rule of samples f on g.
double trapezoid(const UniformGrid& g, const std::vector<double>& f);

struct SampledFunction {
  UniformGrid grid;
  std::vector<double> values;
  std::vector<double> d1;  // empty when not sampled

  /// sqrt(integral of values^2) by trapezoid.
  double l2_norm() const;
};

/// L2 distance between two samplings on the same grid.
double l2_distance(const SampledFunction& a, const SampledFunction& b);

/// Grid overrides shared by quadrature and the finite-difference oracle.
/// Unset fields fall back to the automatic policy.
struct GridPolicy {
  std::optional<double> lo;
  std::optional<double> hi;
  int n = 4001;
  std::optional<double> delta;  // offset from singular walls
};

}  // namespace bilayer
