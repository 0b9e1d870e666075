#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bilayer/errors.hpp"
#include "bilayer/fieldcases.hpp"
#include "test_util.hpp"

using namespace bilayer;
using bilayer::testing::all_kinds;
using bilayer::testing::figure_case;
using bilayer::testing::figure_params;
using bilayer::testing::interior_points;
using bilayer::testing::rel_err;

TEST_CASE("make_case derives kappa and validates constraints") {
  const auto well = figure_case(CaseKind::HyperbolicWell);
  CHECK(rel_err(well.kappa, 2.2 * 7.0 / 15.0) < 1e-15);
  CHECK(well.epsilon2 == 0.0);
  CHECK(well.epsilon1 == doctest::Approx(14.677333333333333).epsilon(1e-14));

  const auto sing = figure_case(CaseKind::Singular);
  CHECK(rel_err(sing.kappa, 20.0) < 1e-15);
  CHECK(rel_err(figure_case(CaseKind::TrigSingular).kappa, 2.0) < 1e-15);
  CHECK(rel_err(figure_case(CaseKind::ExpDecay).kappa, 6.0) < 1e-15);
  CHECK(rel_err(figure_case(CaseKind::HyperbolicSingular).kappa, 30.0) < 1e-15);

  CaseParams bad{CaseKind::HyperbolicWell, 1.0, 1.0, 3.0, 10.0, 0.0};
  try {
    make_case(bad);
    FAIL("expected ConstraintViolation");
  } catch (const ConstraintViolation& e) {
    CHECK(std::string(e.what()).find("|kappa| < D") != std::string::npos);
  }
  // D = alpha forces kappa = 0 but leaves level 1 unbound.
  bad = {CaseKind::HyperbolicWell, 1.0, 1.0, 1.0, 10.0, 0.0};
  CHECK_THROWS_AS(make_case(bad), ConstraintViolation);
  bad = {CaseKind::HyperbolicWell, 1.0, 1.0, 8.0, 7.0, 0.0};
  CHECK_THROWS_AS(make_case(bad), ConstraintViolation);
  CHECK_THROWS_AS(make_case({CaseKind::ExpDecay, 1.0, 1.0, 1.0, 0.4, 0.0}), ConstraintViolation);

  CHECK_THROWS_AS(make_case({CaseKind::Constant, -1.0, 1.0, 1.0, 0.0, 0.0}), NonPositiveParameter);
  CHECK_THROWS_AS(make_case({CaseKind::ExpDecay, 1.0, 0.0, 1.0, 0.0, 0.0}), NonPositiveParameter);
  CHECK_THROWS_AS(make_case({CaseKind::Singular, 1.0, 1.0, -2.0, 1.0, 0.0}), NonPositiveParameter);
  CHECK_THROWS_AS(make_case({CaseKind::ExpDecay, 1.0, 1.0, 1.0, -3.0, 0.0}), ConstraintViolation);
  CHECK_THROWS_AS(make_case({CaseKind::HyperbolicSingular, 1.0, 1.0, 3.0, 1.0, 0.0}),
                  ConstraintViolation);
  CHECK_THROWS_AS(make_case({CaseKind::Singular, 1.0, 1.0, 3.0, -1.0, 0.0}), ConstraintViolation);
}

TEST_CASE("case names round-trip") {
  for (auto k : all_kinds()) CHECK(case_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(case_kind_from_string("bogus"), DomainViolation);
}

TEST_CASE("eta values") {
  const auto one = make_case({CaseKind::Constant, 1.0, 1.0, 1.0, 1.0, 0.0});
  CHECK(eta(one, 0.0) == 2.0);
  CHECK(eta(figure_case(CaseKind::ExpDecay), 0.0) == doctest::Approx(9.0).epsilon(1e-15));

  const auto well = figure_case(CaseKind::HyperbolicWell);
  const double limit = 15.0 * (well.kappa / 7.0 + 1.0);
  CHECK(rel_err(eta(well, 40.0), limit) < 1e-14);
}

TEST_CASE("magnetic field and vector potential") {
  const auto one = make_case({CaseKind::Constant, 1.0, 1.0, 1.0, 1.0, 0.0});
  for (double x : {-3.0, 0.0, 2.5}) CHECK(magnetic_field(one, x) == doctest::Approx(0.5));

  const auto well = figure_case(CaseKind::HyperbolicWell);
  const double b0 = magnetic_field(well, 0.0);
  for (double x : {-2.0, -0.3, 0.1, 1.7}) CHECK(magnetic_field(well, x) < b0);
  CHECK(rel_err(b0, 0.5 * 15.0) < 1e-14);

  for (auto kind : all_kinds()) {
    const auto c = figure_case(kind);
    for (double x : interior_points(c, 40)) {
      const double fd = bilayer::testing::central_diff(
          [&](double y) { return vector_potential(c, y); }, x, 1e-6 * std::max(1.0, std::abs(x)));
      const double b = magnetic_field(c, x);
      CHECK(std::abs(fd - b) <= 1e-6 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST_CASE("partner potential values") {
  const auto zero_k = make_case({CaseKind::Constant, 1.0, 1.0, 1.0, 0.0, 0.0});
  CHECK(partner_potentials(zero_k, 0.0).V0 == doctest::Approx(-0.5).epsilon(1e-15));

  const auto sing = figure_case(CaseKind::Singular);
  CHECK(rel_err(partner_potentials(sing, 1e7).V0, 400.0) < 1e-5);

  const auto well = figure_case(CaseKind::HyperbolicWell);
  const double K = well.kappa;
  CHECK(rel_err(partner_potentials(well, 0.0).V0, 64.0 + K * K - 72.0) < 1e-14);
}

TEST_CASE("shape invariance offset V2 - V0 = 2 eta'") {
  for (auto kind : all_kinds()) {
    const auto c = figure_case(kind);
    for (double x : interior_points(c, 200)) {
      const auto v = partner_potentials(c, x);
      const double eta_p = eta(c, Jet::variable(x)).d(1);
      CHECK(std::abs(v.V2 - v.V0 - 2.0 * eta_p) <= 1e-10 * (1.0 + std::abs(v.V0)));
    }
  }
}

TEST_CASE("closed-form V0 agrees with the eta reconstruction") {
  for (auto kind : all_kinds()) {
    const auto c = figure_case(kind);
    const double e1 = c.epsilon1, e2 = c.epsilon2;
    for (double x : interior_points(c, 200)) {
      const Jet h = eta(c, Jet::variable(x));
      const double e = h.d(0), ep = h.d(1), epp = h.d(2);
      if (std::abs(e) < 1e-3) continue;
      const double q = (e1 - e2) / (2.0 * e);
      const double rebuilt = epp / (2.0 * e) - ep * ep / (4.0 * e * e) - ep + e * e / 4.0 +
                             (e1 + e2) / 2.0 + q * q;
      const double v0 = potential(c, 0, x);
      CHECK(std::abs(rebuilt - v0) <= 1e-8 * std::max(1.0, std::abs(v0)));
    }
  }
}

TEST_CASE("auxiliary eigenvalues") {
  for (auto kind : all_kinds()) CHECK(aux_eigenvalue(figure_case(kind), 0, 0) == doctest::Approx(0.0));

  const auto osc = make_case({CaseKind::Constant, 1.7, 1.0, 1.0, 0.3, 0.0});
  for (int n = 0; n < 10; ++n) CHECK(rel_err(aux_eigenvalue(osc, 0, n), n * 1.7, 1.0) < 1e-15);

  const auto morse = figure_case(CaseKind::ExpDecay);
  for (int n = 0; n <= 5; ++n)
    CHECK(rel_err(aux_eigenvalue(morse, 0, n), 36.0 - (6.0 - n) * (6.0 - n), 1.0) < 1e-14);
  CHECK_THROWS_AS(aux_eigenvalue(morse, 0, 6), LevelOutOfRange);
  CHECK_THROWS_AS(aux_eigenvalue(morse, 2, 4), LevelOutOfRange);

  const std::vector<std::pair<CaseKind, std::vector<double>>> frozen{
      {CaseKind::HyperbolicWell,
       {0.0, 14.677333333333333, 27.180187654320988, 37.355690666666667, 44.837866666666667,
        48.558617283950617}},
      {CaseKind::TrigSingular,
       {0.0, 10.44, 22.222222222222222, 35.693877551020408, 51.0, 68.209876543209877}},
      {CaseKind::HyperbolicSingular,
       {0.0, 386.75, 560.0, 648.0, 694.69387755102041, 718.4375, 728.0}},
      {CaseKind::Singular, {0.0, 175.0, 256.0, 300.0, 326.53061224489796, 343.75}},
  };
  for (const auto& [kind, values] : frozen) {
    const auto c = figure_case(kind);
    for (std::size_t n = 0; n < values.size(); ++n) {
      CHECK(rel_err(aux_eigenvalue(c, 0, int(n)), values[n], 1.0) < 1e-13);
      if (n >= 2) CHECK(aux_eigenvalue(c, 2, int(n) - 2) == aux_eigenvalue(c, 0, int(n)));
    }
  }
}

TEST_CASE("auxiliary eigenvalues increase over the bound range") {
  for (auto kind : all_kinds()) {
    const auto c = figure_case(kind);
    const int top = bound_state_count(c, 0).value_or(12);
    for (int n = 1; n < top; ++n) CHECK(aux_eigenvalue(c, 0, n) > aux_eigenvalue(c, 0, n - 1));
  }
}

TEST_CASE("bound state counts") {
  CHECK_FALSE(bound_state_count(figure_case(CaseKind::Constant), 0).has_value());
  CHECK_FALSE(bound_state_count(figure_case(CaseKind::TrigSingular), 2).has_value());
  CHECK_FALSE(bound_state_count(figure_case(CaseKind::Singular), 0).has_value());

  // (D - n alpha)^2 > D |kappa| holds for n <= 5 at D = 8, kappa = 1.0267.
  CHECK(bound_state_count(figure_case(CaseKind::HyperbolicWell), 0) == 6);
  CHECK(bound_state_count(figure_case(CaseKind::HyperbolicWell), 2) == 4);
  CHECK(bound_state_count(figure_case(CaseKind::ExpDecay), 0) == 6);
  CHECK(bound_state_count(figure_case(CaseKind::ExpDecay), 2) == 4);
  // (D + n alpha)^2 < kappa D = 90 holds for n <= 6.
  CHECK(bound_state_count(figure_case(CaseKind::HyperbolicSingular), 0) == 7);

  // kappa = 5.13 leaves exactly the two seed levels; branch 2 is then empty.
  const auto shallow = make_case({CaseKind::HyperbolicWell, 1.0, 1.0, 8.0, 5.5, 0.0});
  CHECK(bound_state_count(shallow, 0) == 2);
  CHECK(bound_state_count(shallow, 2) == 0);
}

TEST_CASE("eigenfunction closed forms") {
  const auto osc = make_case({CaseKind::Constant, 2.0, 1.0, 1.0, 0.5, 0.0});
  const auto g = aux_eigenfunction(osc, 0, 0);
  CHECK_FALSE(g.norm_constant().has_value());
  for (double x : {-2.0, -0.5, 0.0, 1.0}) {
    const double z = std::sqrt(1.0) * (x + 0.5);
    CHECK(rel_err(g.value(x), std::exp(-z * z / 2.0)) < 1e-14);
  }

  const auto morse = figure_case(CaseKind::ExpDecay);
  CHECK_THROWS_AS(aux_eigenfunction(morse, 0, 6), NotSquareIntegrable);
  CHECK_THROWS_AS(aux_eigenfunction(morse, 2, 4), NotSquareIntegrable);
  CHECK_NOTHROW(aux_eigenfunction(morse, 0, 5));

  const auto well = figure_case(CaseKind::HyperbolicWell);
  const double s2 = 8.0 - 2.0, a2 = 8.0 * well.kappa / (8.0 - 2.0);
  const auto w0 = aux_eigenfunction(well, 2, 0);
  for (double x : {-1.5, 0.0, 0.8}) {
    const double t = std::tanh(x);
    const double want = std::pow(1.0 - t, (s2 + a2) / 2.0) * std::pow(1.0 + t, (s2 - a2) / 2.0);
    CHECK(rel_err(w0.value(x), want) < 1e-13);
  }
  CHECK_THROWS_AS(aux_eigenfunction(well, 0, 6), NotSquareIntegrable);

  const auto normed = g.with_norm_constant(3.0);
  CHECK(rel_err(normed.value(0.2), 3.0 * g.value(0.2)) < 1e-15);
  CHECK_THROWS_AS(g.with_norm_constant(0.0), NonPositiveParameter);
}

TEST_CASE("eigenfunction derivatives agree with central differences") {
  for (auto kind : all_kinds()) {
    const auto c = figure_case(kind);
    for (int j : {0, 2}) {
      for (int n = 0; n <= 3; ++n) {
        const auto psi = aux_eigenfunction(c, j, n);
        double peak = 0.0;
        const auto xs = interior_points(c, 60);
        for (double x : xs) peak = std::max(peak, std::abs(psi.value(x)));
        for (double x : xs) {
          const auto d = psi.eval(x);
          const double h = 1e-5 * std::min(1.0, x - c.domain.lo);
          const double fd1 = bilayer::testing::central_diff([&](double y) { return psi.value(y); }, x, h);
          const double fd2 = bilayer::testing::central_diff([&](double y) { return psi.eval(y).d1; }, x, h);
          const double s1 = std::max(std::abs(d.d1), 1e-3 * peak);
          CHECK(std::abs(fd1 - d.d1) <= 1e-5 * std::max(s1, std::abs(d.value)));
          const double s2 = std::max(std::abs(d.d2), 1e-3 * peak);
          CHECK(std::abs(fd2 - d.d2) <= 1e-5 * std::max(s2, std::abs(d.d1)));
        }
      }
    }
  }
}

TEST_CASE("trig-singular real path matches the complex pseudo-Jacobi path") {
  const auto c = figure_case(CaseKind::TrigSingular);
  for (int j : {0, 2})
    for (int n = 0; n <= 6; ++n) {
      const auto psi = aux_eigenfunction(c, j, n);
      for (double x : interior_points(c, 25)) {
        const auto z = psi.value_complex(x);
        CHECK(std::abs(z.imag()) <= 1e-10 * std::abs(z) + 1e-300);
        CHECK(std::abs(z.real() - psi.value(x)) <= 1e-10 * std::abs(z) + 1e-300);
      }
    }
  CHECK_THROWS_AS(aux_eigenfunction(figure_case(CaseKind::Singular), 0, 1).value_complex(1.0),
                  DomainViolation);
}

TEST_CASE("domain enforcement") {
  const auto trig = figure_case(CaseKind::TrigSingular);
  CHECK_THROWS_AS(eta(trig, 0.0), DomainViolation);
  CHECK_THROWS_AS(potential(trig, 0, std::numbers::pi), DomainViolation);
  CHECK_THROWS_AS(aux_eigenfunction(trig, 0, 1).value(0.0), DomainViolation);
  CHECK(std::isfinite(potential(trig, 0, 1e-4)));
  CHECK(std::isfinite(aux_eigenfunction(trig, 0, 2).value(std::numbers::pi - 1e-4)));

  for (auto kind : {CaseKind::HyperbolicSingular, CaseKind::Singular}) {
    const auto c = figure_case(kind);
    CHECK_THROWS_AS(eta(c, 0.0), DomainViolation);
    CHECK_THROWS_AS(magnetic_field(c, -1.0), DomainViolation);
    CHECK(std::isfinite(aux_eigenfunction(c, 0, 1).value(1e-6)));
  }
  CHECK_THROWS_AS(potential(figure_case(CaseKind::ExpDecay), 1, 0.0), DomainViolation);
}

TEST_CASE("far tails underflow to zero rather than NaN") {
  const auto well = figure_case(CaseKind::HyperbolicWell);
  const auto psi = aux_eigenfunction(well, 0, 5);
  for (double x : {-800.0, -100.0, 100.0, 800.0}) {
    const auto d = psi.eval(x);
    CHECK(std::isfinite(d.value));
    CHECK(std::isfinite(d.d2));
  }
  const auto hs = aux_eigenfunction(figure_case(CaseKind::HyperbolicSingular), 2, 4);
  for (double x : {1e-8, 50.0, 400.0}) CHECK(std::isfinite(hs.eval(x).d2));
}
