#include <cmath>

#include "doctest.h"
#include "ucp/multiplier.hpp"

using namespace ucp;

namespace {

double max_rel_error(const ScalarField& f, double m, const std::function<double(Point)>& exact) {
  const Grid2D& g = f.grid();
  double worst = 0;
  for (std::size_t k : nodes_in_region(g, Disk{{0, 0}, m})) {
    const Point p = g.node(static_cast<int>(k % g.n()), static_cast<int>(k / g.n()));
    worst = std::max(worst, std::abs(f[k] - exact(p)) / std::abs(exact(p)));
  }
  return worst;
}

}  // namespace

TEST_CASE("subsolution rate is the positive root of c(λc − 3) − 1") {
  CHECK(subsolution_rate(1.0) == doctest::Approx((3 + std::sqrt(13.0)) / 2).epsilon(1e-14));
  CHECK(subsolution_rate(0.5) == doctest::Approx(3 + std::sqrt(11.0)).epsilon(1e-14));
  for (double l : {0.2, 0.7, 1.0}) {
    const double c = subsolution_rate(l);
    CHECK(std::abs(c * (l * c - 3) - 1) < 1e-12);
  }
}

TEST_CASE("subsolution of −Δ + 1") {
  const Grid2D g = make_grid({0, 0}, 1.5, 129);
  const EllipticOperator op = EllipticOperator().with_V([](Point) { return 1.0; });
  const SubsolutionResult r = subsolution(op, g, 1.0, 1.0, 1.4);
  CHECK(r.pass);
  // 𝓛φ₁ = (1 − c²)e^{cx} < 0 at the origin
  CHECK(r.max_value < 0);
}

TEST_CASE("supersolution") {
  const Grid2D g = make_grid({0, 0}, 1.5, 129);
  const SupersolutionResult lap = supersolution(EllipticOperator(), g, 1.4);
  CHECK(lap.pass);
  CHECK(lap.min_value == doctest::Approx(4.0).epsilon(1e-9));

  const double m = 1.4, vm = 1.0 / (m * m + 1);
  const SupersolutionResult pot =
      supersolution(EllipticOperator().with_V([vm](Point) { return -0.99 * vm; }), g, m);
  CHECK(pot.pass);
  CHECK(pot.min_value >= 3.0);

  const SupersolutionResult drift =
      supersolution(EllipticOperator().with_W([m](Point) { return Vec2{0.99 / (2 * m), 0}; }), g, m);
  CHECK(drift.pass);
  CHECK(drift.min_value >= 0);
}

TEST_CASE("positive solution matches closed forms") {
  const Grid2D g = make_grid({0, 0}, 1.5, 257);
  const EllipticOperator helm = EllipticOperator().with_V([](Point) { return 1.0; });
  const PositiveSolutionResult c1 = positive_solution(helm, g, 1.4, [](Point p) { return std::cosh(p.x); });
  CHECK(max_rel_error(c1.phi, 1.4, [](Point p) { return std::cosh(p.x); }) <= 1e-3);

  const PositiveSolutionResult one = positive_solution(EllipticOperator(), g, 1.4, [](Point) { return 1.0; });
  CHECK(max_rel_error(one.phi, 1.4, [](Point) { return 1.0; }) <= 1e-8);

  const EllipticOperator k2 = EllipticOperator().with_V([](Point) { return 4.0; });
  const PositiveSolutionResult c2 = positive_solution(k2, g, 1.4, [](Point p) { return std::cosh(2 * p.x); });
  CHECK(max_rel_error(c2.phi, 1.4, [](Point p) { return std::cosh(2 * p.x); }) <= 1e-3);
}

TEST_CASE("log-gradient bound and pointwise bracket") {
  const Grid2D g = make_grid({0, 0}, 1.5, 257);
  const double b = 1.2;
  const ScalarField ch = ScalarField::sample(g, [](Point p) { return std::cosh(p.x); });
  CHECK(log_gradient_bound(ch, b, 1.0) == doctest::Approx(std::tanh(b)).epsilon(1e-3));
  const ScalarField one = ScalarField::sample(g, [](Point) { return 1.0; });
  CHECK(log_gradient_bound(one, b, 1.0) == 0.0);
  const double c = subsolution_rate(1.0);
  const ScalarField ex = ScalarField::sample(g, [c](Point p) { return std::exp(c * p.x); });
  CHECK(log_gradient_bound(ex, b, 1.0) == doctest::Approx(c).epsilon(1e-3));

  const PointwiseBounds pb1 = pointwise_bounds(one, b, 1.0);
  CHECK(pb1.pass);
  CHECK(pb1.min == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pb1.max == doctest::Approx(1.0).epsilon(1e-14));
  const ScalarField e1 = ScalarField::sample(g, [](Point p) { return std::exp(p.x); });
  const PointwiseBounds pbe = pointwise_bounds(e1, b, 1.0);
  CHECK(pbe.pass);
  CHECK(pbe.min == doctest::Approx(std::exp(-b)).epsilon(1e-4));
  CHECK(pbe.max == doctest::Approx(std::exp(b)).epsilon(1e-4));
  const PointwiseBounds pbc = pointwise_bounds(ch, b, 1.0);
  CHECK(pbc.max == doctest::Approx(std::cosh(b)).epsilon(1e-4));
  CHECK(pbc.max <= std::exp(b));
}
