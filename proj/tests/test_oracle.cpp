#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "bilayer/errors.hpp"
#include "bilayer/oracle.hpp"
#include "bilayer/susy.hpp"
#include "test_util.hpp"

using namespace bilayer;
using namespace bilayer::oracle;
using bilayer::testing::all_kinds;
using bilayer::testing::figure_case;
using bilayer::testing::rel_err;

TEST_CASE("infinite square well") {
  const auto h = discretize([](double) { return 0.0; }, 0.0, std::numbers::pi, 2001);
  const auto p = lowest_eigenpairs(h, 4);
  for (int n = 0; n < 4; ++n) CHECK(rel_err(p[n].value, (n + 1.0) * (n + 1.0)) < 1e-5);
  // Exact discrete spectrum (4/h^2) sin^2(j pi / 2(N-1)).
  const double step = h.grid.h();
  for (int n = 0; n < 4; ++n) {
    const double want = 4.0 / (step * step) * std::pow(std::sin((n + 1) * std::numbers::pi / (2.0 * 2000)), 2);
    CHECK(rel_err(p[n].value, want) < 1e-9);
  }
}

TEST_CASE("eigenvectors are orthonormal with weight h") {
  const auto c = figure_case(CaseKind::Constant);
  const auto h = discretize(c, 0, -10.0, 6.0, 1601);
  const auto p = lowest_eigenpairs(h, 6);
  double worst = 0.0;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      double dot = 0.0;
      for (int i = 0; i < h.grid.n; ++i) dot += p[a].vector[i] * p[b].vector[i];
      dot *= h.grid.h();
      worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
    }
  CHECK(worst <= 1e-8);
  CHECK(p[0].vector.front() == 0.0);
  CHECK(p[0].vector.back() == 0.0);
  CHECK(count_below(h, p[2].value + 1e-6) == 3);
}

TEST_CASE("oscillator ladder and second-order convergence") {
  const auto c = figure_case(CaseKind::Constant);  // omega = 1
  double err_coarse = 0.0, err_fine = 0.0;
  for (int n : {801, 1601}) {
    const auto p = lowest_eigenpairs(discretize(c, 0, -10.0, 6.0, n), 4);
    double worst = 0.0;
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(p[j].value - p[0].value - j) < 1e-3);
      worst = std::max(worst, std::abs(p[j].value - j));
    }
    (n == 801 ? err_coarse : err_fine) = worst;
  }
  CHECK(err_coarse / err_fine == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("singular case VI, three levels") {
  const auto c = figure_case(CaseKind::Singular);  // D = 3, kappa = 20
  const auto h = discretize(c, 0, 1e-6, 3.0, 4001);
  const auto p = lowest_eigenpairs(h, 3);
  for (int n = 0; n < 3; ++n) {
    const double want = aux_eigenvalue(c, 0, n);
    CHECK(rel_err(p[n].value, want, c.epsilon1) <= 1e-3);
  }
}

TEST_CASE("discretization errors") {
  const auto zero = [](double) { return 0.0; };
  CHECK_THROWS_AS(discretize(zero, 0.0, 1.0, 99), DomainViolation);
  CHECK_THROWS_AS(discretize(zero, 1.0, 0.0, 200), DomainViolation);
  CHECK_THROWS_AS(discretize([](double x) { return 1.0 / x; }, -1.0, 1.0, 201), DomainViolation);
  CHECK_THROWS_AS(discretize(zero, 0.0, 1.0, 200, 5.0), WindowTooSmall);
  const auto osc = figure_case(CaseKind::Constant);
  CHECK_THROWS_AS(discretize(osc, 0, -2.5, 0.5, 401, 3.0), WindowTooSmall);
  CHECK_THROWS_AS(discretize(figure_case(CaseKind::Singular), 0, -1.0, 2.0, 401), DomainViolation);
  CHECK_THROWS_AS(lowest_eigenpairs(discretize(zero, 0.0, 1.0, 200), 21), DomainViolation);
}

TEST_CASE("cross validation at figure parameters") {
  const auto start = std::chrono::steady_clock::now();
  for (auto kind : all_kinds()) {
    const auto c = figure_case(kind);
    const auto r = cross_validate(c, 5);
    INFO(to_string(kind));
    CHECK(r.grid.n == 4001);
    CHECK(r.grid.extrapolated);
    CHECK(r.grid.delta.has_value() == is_singular(c));
    for (const auto& l : r.levels) {
      INFO("branch ", l.branch, " n=", l.n, " rel ", l.rel_error, " overlap ", l.overlap_defect);
      CHECK(l.rel_error >= 0.0);
      CHECK(l.rel_error <= (is_singular(c) ? 1e-3 : 1e-4));
      if (!is_singular(c)) CHECK(l.overlap_defect <= 1e-5);
      CHECK(l.delta_sensitivity.has_value() == is_singular(c));
      CHECK(l.passed);
    }
    for (const auto& d : r.deletion) {
      INFO("deletion n=", d.n, " diff ", d.rel_diff);
      CHECK(d.passed);
    }
    const auto count0 = bound_state_count(c, 0);
    const int want0 = count0 ? std::min(6, *count0) : 6;
    int seen0 = 0;
    for (const auto& l : r.levels) seen0 += l.branch == 0;
    CHECK(seen0 == want0);
    CHECK(r.passed);
  }
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(30));
}

TEST_CASE("coarse grids can fail and the report says so") {
  // Even sizes skip extrapolation; N = 200 sits just inside 1e-3, N = 150 does not.
  const auto edge = cross_validate(figure_case(CaseKind::TrigSingular), 5, {.n = 200});
  CHECK_FALSE(edge.grid.extrapolated);
  const auto r = cross_validate(figure_case(CaseKind::TrigSingular), 5, {.n = 150});
  CHECK_FALSE(r.grid.extrapolated);
  bool any_failed = false;
  for (const auto& l : r.levels) any_failed = any_failed || !l.passed;
  CHECK(any_failed == !r.passed);
  CHECK_FALSE(r.passed);
}

TEST_CASE("report JSON") {
  const auto r = cross_validate(figure_case(CaseKind::HyperbolicSingular), 2);
  const auto j = to_json(r);
  CHECK(j["case"] == "hyperbolic-singular");
  CHECK(j["grid"]["n"] == 4001);
  CHECK(j["grid"]["delta"].is_number());
  CHECK(j["levels"].size() == r.levels.size());
  CHECK(j["levels"][0]["delta_sensitivity"].is_number());
  CHECK(j["overlap_tolerance"].is_null());
  CHECK(j["deletion"].size() == 3);
  CHECK(j["passed"] == r.passed);
}
