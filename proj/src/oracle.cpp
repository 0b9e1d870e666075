#include "bilayer/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "bilayer/errors.hpp"
#include "bilayer/susy.hpp"

namespace bilayer::oracle {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxInverseIterations = 40;

double matrix_norm(const DiscretizedHamiltonian& h) {
  double m = 0.0;
  for (double d : h.diagonal) m = std::max(m, std::abs(d));
  return m + 2.0 * std::abs(h.off_diagonal);
}

// (T - shift) x = b for the symmetric tridiagonal T, Gaussian elimination
// with partial pivoting. b is overwritten with x.
void shifted_solve(const DiscretizedHamiltonian& h, double shift, std::vector<double>& b) {
  const int n = h.size();
  const double e = h.off_diagonal;
  const double tiny = kEps * matrix_norm(h);
  // Upper factor has up to two superdiagonals after pivoting.
  std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0), l(n, 0.0);
  std::vector<char> swapped(n, 0);
  double diag = h.diagonal[0] - shift;
  double sup = n > 1 ? e : 0.0;
  for (int i = 0; i < n - 1; ++i) {
    const double below = e;
    const double next_diag = h.diagonal[i + 1] - shift;
    const double next_sup = i + 2 < n ? e : 0.0;
    if (std::abs(diag) >= std::abs(below)) {
      const double piv = diag != 0.0 ? diag : tiny;
      u0[i] = piv;
      u1[i] = sup;
      u2[i] = 0.0;
      l[i] = below / piv;
      diag = next_diag - l[i] * sup;
      sup = next_sup;
    } else {
      swapped[i] = 1;
      u0[i] = below;
      u1[i] = next_diag;
      u2[i] = next_sup;
      l[i] = diag / below;
      diag = sup - l[i] * next_diag;
      sup = -l[i] * next_sup;
    }
  }
  u0[n - 1] = diag != 0.0 ? diag : tiny;

  for (int i = 0; i < n - 1; ++i) {
    if (swapped[i]) std::swap(b[i], b[i + 1]);
    b[i + 1] -= l[i] * b[i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    if (i + 1 < n) s -= u1[i] * b[i + 1];
    if (i + 2 < n) s -= u2[i] * b[i + 2];
    b[i] = s / u0[i];
  }
}

double kth_eigenvalue(const DiscretizedHamiltonian& h, int k, double lo, double hi) {
  const double abs_tol = kEps * matrix_norm(h);
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + abs_tol) return mid;
    if (mid <= lo || mid >= hi) return mid;
    (count_below(h, mid) > k ? hi : lo) = mid;
  }
  throw ConvergenceFailure("bisection did not converge for eigenvalue " + std::to_string(k) +
                           " in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

struct BranchSolve {
  std::vector<Eigenpair> fine;
  std::vector<Eigenpair> coarse;  // empty unless extrapolated
  std::vector<double> values;     // extrapolated when available
};

// Eigenvector on the grid it is compared on: the fine vector, or the
// Richardson combination on the coarse points, renormalized.
std::vector<double> comparison_vector(const BranchSolve& s, int n, const UniformGrid& grid) {
  if (s.coarse.empty()) return s.fine[n].vector;
  const auto& f = s.fine[n].vector;
  const auto& c = s.coarse[n].vector;
  double dot = 0.0;
  for (int i = 0; i < grid.n; ++i) dot += f[2 * i] * c[i];
  const double sign = dot < 0.0 ? -1.0 : 1.0;
  std::vector<double> v(grid.n), sq(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    v[i] = (4.0 * f[2 * i] - sign * c[i]) / 3.0;
    sq[i] = v[i] * v[i];
  }
  const double norm = std::sqrt(trapezoid(grid, sq));
  for (double& x : v) x /= norm;
  return v;
}

BranchSolve solve_branch(const CaseDefinition& c, int branch, const UniformGrid& box, int count,
                         bool extrapolate) {
  const auto fine_h = discretize(c, branch, box.lo, box.hi, box.n);
  BranchSolve out{lowest_eigenpairs(fine_h, count), {}, {}};
  for (const auto& p : out.fine) out.values.push_back(p.value);
  check_window(fine_h, out.values.back());
  if (extrapolate) {
    out.coarse = lowest_eigenpairs(discretize(c, branch, box.lo, box.hi, (box.n + 1) / 2), count);
    for (int i = 0; i < count; ++i) out.values[i] = (4.0 * out.values[i] - out.coarse[i].value) / 3.0;
  }
  return out;
}

}  // namespace

DiscretizedHamiltonian discretize(const Potential& v, double lo, double hi, int n,
                                  double energy_ceiling) {
  if (n < 100) throw DomainViolation("finite-difference grid needs at least 100 points");
  const UniformGrid grid = make_grid(lo, hi, n);
  const double h = grid.h();
  DiscretizedHamiltonian out{grid, std::vector<double>(n - 2), -1.0 / (h * h)};
  for (int i = 1; i + 1 < n; ++i) {
    const double x = grid.x(i);
    const double vx = v(x);
    if (!std::isfinite(vx))
      throw DomainViolation("potential is not finite at x = " + std::to_string(x));
    out.diagonal[i - 1] = 2.0 / (h * h) + vx;
  }
  check_window(out, energy_ceiling);
  return out;
}

DiscretizedHamiltonian discretize(const CaseDefinition& c, int branch, double lo, double hi, int n,
                                  double energy_ceiling) {
  if (branch != 0 && branch != 2) throw DomainViolation("branch must be 0 or 2");
  if (!(lo >= c.domain.lo && hi <= c.domain.hi))
    throw DomainViolation("box [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] leaves the case domain");
  return discretize([&](double x) { return potential(c, branch, x); }, lo, hi, n, energy_ceiling);
}

void check_window(const DiscretizedHamiltonian& h, double energy) {
  const double inv_h2 = 2.0 / (h.grid.h() * h.grid.h());
  const double v_lo = h.diagonal.front() - inv_h2;
  const double v_hi = h.diagonal.back() - inv_h2;
  if (v_lo < energy || v_hi < energy)
    throw WindowTooSmall("V at the box edges (" + std::to_string(v_lo) + ", " +
                         std::to_string(v_hi) + ") is below the compared level " +
                         std::to_string(energy) + " on [" + std::to_string(h.grid.lo) + ", " +
                         std::to_string(h.grid.hi) + "]");
}

int count_below(const DiscretizedHamiltonian& h, double lambda) {
  const double e2 = h.off_diagonal * h.off_diagonal;
  const double tiny = kEps * kEps * matrix_norm(h);
  int count = 0;
  double q = 1.0;
  for (int i = 0; i < h.size(); ++i) {
    q = (h.diagonal[i] - lambda) - (i > 0 ? e2 / q : 0.0);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<Eigenpair> lowest_eigenpairs(const DiscretizedHamiltonian& h, int count) {
  const int n = h.size();
  if (count < 1 || count > h.grid.n / 10)
    throw DomainViolation("eigenpair count must be in [1, N/10]");

  double lower = h.diagonal[0], upper = h.diagonal[0];
  for (double d : h.diagonal) {
    lower = std::min(lower, d);
    upper = std::max(upper, d);
  }
  lower -= 2.0 * std::abs(h.off_diagonal);
  upper += 2.0 * std::abs(h.off_diagonal);

  std::vector<double> values(count);
  double lo = lower;
  for (int k = 0; k < count; ++k) {
    values[k] = kth_eigenvalue(h, k, lo, upper);
    lo = values[k] - 4.0 * kEps * (std::abs(values[k]) + 1.0);
    lo = std::max(lo, lower);
  }

  const double step = h.grid.h();
  std::vector<Eigenpair> out;
  for (int k = 0; k < count; ++k) {
    // Shift slightly off the eigenvalue so the factorization stays regular.
    const double shift = values[k] + 1e3 * kEps * (std::abs(values[k]) + std::abs(h.off_diagonal));
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * std::sin(0.37 * i + k);
    double change = 1.0;
    int iter = 0;
    for (; iter < kMaxInverseIterations && change > 1e-13; ++iter) {
      std::vector<double> y = v;
      shifted_solve(h, shift, y);
      for (const auto& prev : out) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += y[i] * prev.vector[i + 1] * std::sqrt(step);
        for (int i = 0; i < n; ++i) y[i] -= dot * prev.vector[i + 1] * std::sqrt(step);
      }
      double norm = 0.0;
      for (double x : y) norm += x * x;
      norm = std::sqrt(norm);
      if (!(norm > 0.0) || !std::isfinite(norm))
        throw ConvergenceFailure("inverse iteration broke down for eigenvalue " +
                                 std::to_string(k) + " at iteration " + std::to_string(iter));
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += y[i] * v[i];
      const double sign = dot < 0.0 ? -1.0 : 1.0;
      double vnorm = 0.0;
      for (double x : v) vnorm += x * x;
      vnorm = std::sqrt(vnorm);
      change = 0.0;
      for (int i = 0; i < n; ++i) {
        const double next = sign * y[i] / norm;
        change = std::max(change, std::abs(next - v[i] / vnorm));
        v[i] = next;
      }
    }
    if (change > 1e-13)
      throw ConvergenceFailure("inverse iteration for eigenvalue " + std::to_string(k) +
                               " stalled after " + std::to_string(iter) +
                               " iterations, last change " + std::to_string(change));
    // Fix the sign so the largest entry is positive, then weight by h.
    const auto big = std::max_element(v.begin(), v.end(),
                                      [](double a, double b) { return std::abs(a) < std::abs(b); });
    const double s = (*big < 0.0 ? -1.0 : 1.0) / std::sqrt(step);
    Eigenpair p{values[k], std::vector<double>(h.grid.n, 0.0)};
    for (int i = 0; i < n; ++i) p.vector[i + 1] = s * v[i];
    out.push_back(std::move(p));
  }
  return out;
}

bool is_singular(const CaseDefinition& c) {
  const auto k = c.params.kind;
  return k == CaseKind::TrigSingular || k == CaseKind::HyperbolicSingular || k == CaseKind::Singular;
}

ValidationReport cross_validate(const CaseDefinition& c, int n_max, const GridPolicy& policy) {
  if (n_max < 0) throw LevelOutOfRange("n_max must be non-negative");
  const bool singular = is_singular(c);
  const auto clip = [&](int branch) {
    const auto count = bound_state_count(c, branch);
    return count ? std::min(n_max, *count - 1) : n_max;
  };
  const int top0 = clip(0);
  const int top2 = clip(2);
  const int count0 = std::max(top0, top2 + 2) + 1;
  const int count2 = top2 + 1;

  std::vector<EigenfunctionSpec> specs;
  for (int n = 0; n < count0; ++n) specs.push_back(aux_eigenfunction(c, 0, n));
  for (int n = 0; n < count2; ++n) specs.push_back(aux_eigenfunction(c, 2, n));
  const double delta = policy.delta.value_or(default_delta(c));
  GridPolicy p = policy;
  p.delta = delta;
  const UniformGrid box = auto_grid(specs, p);
  const bool extrapolate = box.n % 2 == 1 && (box.n + 1) / 2 >= 100;
  const UniformGrid coarse_grid{box.lo, box.hi, extrapolate ? (box.n + 1) / 2 : box.n};

  const BranchSolve s0 = solve_branch(c, 0, box, count0, extrapolate);
  const BranchSolve s2 = count2 > 0 ? solve_branch(c, 2, box, count2, extrapolate) : BranchSolve{};

  std::optional<BranchSolve> h0, h2;
  if (singular) {
    GridPolicy half = p;
    half.delta = 0.5 * delta;
    const UniformGrid box_half = auto_grid(specs, half);
    h0 = solve_branch(c, 0, box_half, count0, extrapolate);
    if (count2 > 0) h2 = solve_branch(c, 2, box_half, count2, extrapolate);
  }

  ValidationReport r;
  r.params = c.params;
  r.grid = {box.lo, box.hi, box.n, box.h(), singular ? std::optional<double>(delta) : std::nullopt,
            extrapolate};
  r.eigenvalue_tolerance = singular ? 1e-3 : 1e-4;
  if (!singular) r.overlap_tolerance = 1e-5;
  r.passed = true;

  const auto add_levels = [&](int branch, int top, const BranchSolve& s,
                              const std::optional<BranchSolve>& half) {
    for (int n = 0; n <= top; ++n) {
      LevelRecord rec;
      rec.branch = branch;
      rec.n = n;
      rec.closed_form = aux_eigenvalue(c, branch, n);
      rec.oracle = s.values[n];
      const double scale = std::max(std::abs(rec.closed_form), c.epsilon1);
      rec.rel_error = std::abs(rec.oracle - rec.closed_form) / scale;
      rec.tolerance = r.eigenvalue_tolerance;
      if (half) rec.delta_sensitivity = std::abs(s.values[n] - half->values[n]) / scale;

      const auto& g = extrapolate ? coarse_grid : box;
      const auto psi = sample(normalize(aux_eigenfunction(c, branch, n), g), g);
      const auto v = comparison_vector(s, n, g);
      std::vector<double> prod(g.n);
      for (int i = 0; i < g.n; ++i) prod[i] = v[i] * psi.values[i];
      const double overlap = trapezoid(g, prod);
      const double sign = overlap < 0.0 ? -1.0 : 1.0;
      for (int i = 0; i < g.n; ++i) prod[i] = std::pow(v[i] - sign * psi.values[i], 2);
      rec.overlap_defect = std::max(0.0, 1.0 - std::abs(overlap));
      rec.l2_distance = std::sqrt(trapezoid(g, prod));

      rec.passed = rec.rel_error <= rec.tolerance &&
                   (!r.overlap_tolerance || rec.overlap_defect <= *r.overlap_tolerance);
      r.passed = r.passed && rec.passed;
      r.levels.push_back(rec);
    }
  };
  add_levels(0, top0, s0, h0);
  if (count2 > 0) add_levels(2, top2, s2, h2);

  // Oracle data only: level n of H_2 against level n + 2 of H_0.
  const double oracle_eps1 = s0.values.size() > 1 ? s0.values[1] : 0.0;
  for (int n = 0; n < count2; ++n) {
    DeletionRecord d;
    d.n = n;
    d.oracle_h0 = s0.values[n + 2];
    d.oracle_h2 = s2.values[n];
    d.rel_diff = std::abs(d.oracle_h2 - d.oracle_h0) / std::max(std::abs(d.oracle_h0), oracle_eps1);
    d.passed = d.rel_diff <= r.eigenvalue_tolerance;
    r.passed = r.passed && d.passed;
    r.deletion.push_back(d);
  }
  return r;
}

nlohmann::json to_json(const ValidationReport& r) {
  using nlohmann::json;
  const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"branch", l.branch},
                      {"n", l.n},
                      {"closed_form", l.closed_form},
                      {"oracle", l.oracle},
                      {"rel_error", l.rel_error},
                      {"tolerance", l.tolerance},
                      {"delta_sensitivity", opt(l.delta_sensitivity)},
                      {"overlap_defect", l.overlap_defect},
                      {"l2_distance", l.l2_distance},
                      {"passed", l.passed}});
  json deletion = json::array();
  for (const auto& d : r.deletion)
    deletion.push_back({{"n", d.n},
                        {"oracle_h0", d.oracle_h0},
                        {"oracle_h2", d.oracle_h2},
                        {"rel_diff", d.rel_diff},
                        {"passed", d.passed}});
  return {{"case", to_string(r.params.kind)},
          {"params",
           {{"omega", r.params.omega},
            {"alpha", r.params.alpha},
            {"D", r.params.D},
            {"k", r.params.k},
            {"B0", r.params.B0}}},
          {"grid",
           {{"lo", r.grid.lo},
            {"hi", r.grid.hi},
            {"n", r.grid.n},
            {"h", r.grid.h},
            {"delta", opt(r.grid.delta)},
            {"extrapolated", r.grid.extrapolated}}},
          {"eigenvalue_tolerance", r.eigenvalue_tolerance},
          {"overlap_tolerance", opt(r.overlap_tolerance)},
          {"levels", levels},
          {"deletion", deletion},
          {"passed", r.passed}};
}

}  // namespace bilayer::oracle
