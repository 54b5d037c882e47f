#include <cmath>

#include "doctest.h"
#include "ucp/error.hpp"
#include "ucp/scenarios.hpp"
#include "ucp/vanishing.hpp"

using namespace ucp;

TEST_CASE("vanishing order of homogeneous and two-term data") {
  const std::vector<double> r = log_space(1e-3, 1e-1, 21);
  std::vector<double> cubic, constant;
  for (double x : r) {
    cubic.push_back(x * x * x);
    constant.push_back(1.0);
  }
  CHECK(fit_vanishing_order(r, cubic).order == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(fit_vanishing_order(r, constant).order) < 1e-12);

  // Re z³ + 1e-6 Re z: sup over B_r is r³ + 1e-6 r (attained on the real axis)
  const auto mag = [](Point p) { return std::abs(p.x * p.x * p.x - 3 * p.x * p.y * p.y + 1e-6 * p.x); };
  const std::vector<double> low = log_space(1e-5, 1e-4, 11), high = log_space(1e-2, 1e-1, 11);
  CHECK(measure_vanishing_order(mag, low).order == doctest::Approx(1.0).epsilon(0.02));
  CHECK(measure_vanishing_order(mag, high).order == doctest::Approx(3.0).epsilon(0.02));
  const VanishingOrder mixed = measure_vanishing_order(mag, log_space(1e-5, 1e-1, 41));
  CHECK(mixed.r_hi / mixed.r_lo == doctest::Approx(10.0).epsilon(1e-9));
  CHECK((std::abs(mixed.order - 1) < 0.05 || std::abs(mixed.order - 3) < 0.05));

  std::vector<double> zeros(r.size(), 0.0);
  CHECK_THROWS_AS(fit_vanishing_order(r, zeros), ValidationError);
}

TEST_CASE("harmonic(3) pipeline") {
  const Scenario sc = builtin("harmonic", {{"n", 3.0}});
  VanishingConfig cfg;
  cfg.n = 128;
  const VanishingReport rep = vanishing_pipeline(sc.op, sc.u, sc.phi, cfg);
  CHECK(rep.order.order == doctest::Approx(3.0).epsilon(0.05 / 3));
  CHECK(rep.pass);
  for (const VanishingRow& row : rep.rows) CHECK(row.bound <= row.u_norm);
  CHECK(verify_oofv_bound(rep, rep.config).pass);

  // flat vanishing: replace the measured norms by exp(−1/r)
  VanishingReport flat = rep;
  for (VanishingRow& row : flat.rows) row.u_norm = std::exp(-1.0 / row.r);
  CHECK_FALSE(verify_oofv_bound(flat, flat.config).pass);
}

TEST_CASE("sinh over cosh vanishes simply") {
  const Scenario sc = builtin("cosh", {{"k", 1.0}});
  VanishingConfig cfg;
  cfg.n = 128;
  const VanishingReport rep = vanishing_pipeline(sc.op, sc.u, sc.phi, cfg);
  CHECK(rep.order.order == doctest::Approx(1.0).epsilon(0.05));
  CHECK(rep.pass);
}

TEST_CASE("solution equal to the multiplier is degenerate") {
  const Scenario sc = builtin("cosh", {{"k", 1.0}});
  VanishingConfig cfg;
  cfg.n = 128;
  const VanishingReport rep = vanishing_pipeline(sc.op, sc.phi, sc.phi, cfg);
  CHECK(rep.degenerate);
  CHECK(verify_oofv_bound(rep, rep.config).pass);
}

TEST_CASE("stream function of harmonic data") {
  const Grid2D g = make_grid({0, 0}, 1.0, 129);
  const ScalarField one = ScalarField::sample(g, [](Point) { return 1.0; });
  const StreamFunction sx = stream_function(one, ScalarField::sample(g, [](Point p) { return p.x; }));
  double e1 = 0;
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i) e1 = std::max(e1, std::abs(sx.f(i, j) - cplx(g.x(i), g.y(j))));
  CHECK(e1 < 1e-12);

  const StreamFunction s2 =
      stream_function(one, ScalarField::sample(g, [](Point p) { return p.x * p.x - p.y * p.y; }));
  // the outer ring carries first-order one-sided derivatives
  double e2 = 0;
  for (int j = 1; j < g.n() - 1; ++j)
    for (int i = 1; i < g.n() - 1; ++i) e2 = std::max(e2, std::abs(s2.f(i, j) - std::pow(cplx(g.x(i), g.y(j)), 2)));
  CHECK(e2 < 1e-3);
  CHECK(s2.path_residual < 2 * g.h());
}

TEST_CASE("stream and Beltrami orders differ by one") {
  const Grid2D g = make_grid({0, 0}, 1.0, 257);
  const ComplexField z3 = ComplexField::sample(g, [](Point p) { return std::pow(cplx(p.x, p.y), 3); });
  const ComplexField z2 = ComplexField::sample(g, [](Point p) { return 3.0 * std::pow(cplx(p.x, p.y), 2); });
  const OrderCrossCheck c = cross_check_orders(z3, z2, log_space(0.1, 0.8, 9));
  CHECK(c.pass);
  CHECK(c.stream_order == doctest::Approx(3.0).epsilon(0.05));
}
