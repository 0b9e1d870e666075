#include "bilayer/grid.hpp"

#include <cmath>
#include <string>

#include "bilayer/errors.hpp"

namespace bilayer {

std::vector<double> UniformGrid::points() const {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = x(i);
  return xs;
}

UniformGrid make_grid(double lo, double hi, int n) {
  if (n < 3) throw DomainViolation("grid needs at least 3 points, got " + std::to_string(n));
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw DomainViolation("grid window must be finite with lo < hi");
  return {lo, hi, n};
}

double trapezoid(const UniformGrid& g, const std::vector<double>& f) {
  if (static_cast<int>(f.size()) != g.n) throw DomainViolation("sample count does not match grid");
  double acc = 0.5 * (f.front() + f.back());
  for (int i = 1; i + 1 < g.n; ++i) acc += f[i];
  return acc * g.h();
}

double SampledFunction::l2_norm() const {
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = values[i] * values[i];
  return std::sqrt(trapezoid(grid, sq));
}

double l2_distance(const SampledFunction& a, const SampledFunction& b) {
  if (a.grid.n != b.grid.n || a.grid.lo != b.grid.lo || a.grid.hi != b.grid.hi)
    throw DomainViolation("l2_distance needs identical grids");
  std::vector<double> sq(a.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    sq[i] = d * d;
  }
  return std::sqrt(trapezoid(a.grid, sq));
}

}  // namespace bilayer
