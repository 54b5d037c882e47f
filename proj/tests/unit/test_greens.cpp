#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ucp/greens.hpp"
#include "ucp/scenarios.hpp"

using namespace ucp;
constexpr double kPi = std::numbers::pi;

TEST_CASE("ellipse perimeter against the complete elliptic integral") {
  CHECK(ellipse_perimeter(1, 1) == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(ellipse_perimeter(4, 4) == doctest::Approx(4 * kPi).epsilon(1e-12));
  // semi-axes 2, 1: 4a E(e), e² = 1 − b²/a²
  const double oracle = 8.0 * std::comp_ellint_2(std::sqrt(0.75));
  CHECK(ellipse_perimeter(4, 1) == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(std::abs(ellipse_perimeter(4, 1) - 9.688448) < 1e-6);
}

TEST_CASE("constant-coefficient fundamental solution") {
  const ConstantGamma id(Mat2::identity());
  CHECK(id({1, 0}) == 0.0);
  CHECK(id({std::exp(1.0), 0}) == doctest::Approx(-1 / (2 * kPi)).epsilon(1e-14));
  const ConstantGamma d(Mat2::diag(4, 1));
  CHECK(std::abs(d({2, 0})) < 1e-15);
  CHECK(d({0, 1}) == doctest::Approx(0.0));
  // gradient against central differences
  const Point z{0.7, -0.4};
  const double e = 1e-6;
  const Vec2 gr = d.gradient(z);
  CHECK(gr.x == doctest::Approx((d({z.x + e, z.y}) - d({z.x - e, z.y})) / (2 * e)).epsilon(1e-7));
  CHECK(gr.y == doctest::Approx((d({z.x, z.y + e}) - d({z.x, z.y - e})) / (2 * e)).epsilon(1e-7));
}

TEST_CASE("numerical fundamental solution of the Laplacian") {
  const Grid2D g = make_grid({0, 0}, 2.0, 513);
  const GreensField gf = variable_gamma(EllipticOperator(), {0, 0}, g);
  double worst = 0;
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i) {
      const Point p = g.node(i, j);
      const double r = norm(p);
      if (r >= 0.1 && r <= 1.0) worst = std::max(worst, std::abs(gf.gamma(i, j) + std::log(r) / (2 * kPi)));
    }
  CHECK(worst < 1e-3);

  // translation invariance: shifting the pole translates Γ
  const Point z0 = g.node(256 + 32, 256 - 16);
  const GreensField shifted = variable_gamma(EllipticOperator(), z0, g);
  CHECK(std::abs(shifted(z0 + Point{0.3, 0.2}) - gf({0.3, 0.2})) < 1e-6);
}

TEST_CASE("perturbation study") {
  const Grid2D g = builtin("bump").grid.make();
  const std::vector<double> zero{0.0};
  const PerturbationStudy p0 =
      check_fs_perturbation([](double d) { return builtin("bump", {{"delta", d}}).op; }, zero, g);
  CHECK(p0.sup_diffs[0] < 1e-9);

  // constant A ≠ I: Γ is exactly Γ₀ of that matrix, independent of δ
  const std::vector<double> deltas{0.01, 0.02};
  const PerturbationStudy pc = check_fs_perturbation(
      [](double d) { return EllipticOperator::constant(Mat2::diag(1 + d, 1)); }, deltas, g);
  for (double s : pc.sup_diffs) CHECK(s < 1e-9);
}

TEST_CASE("variable_gamma rejects a pole off the nodes") {
  const Grid2D g = make_grid({0, 0}, 2.0, 65);
  CHECK_THROWS(variable_gamma(EllipticOperator(), {0.01, 0}, g));
  CHECK_THROWS(variable_gamma(EllipticOperator(), g.node(2, 32), g));
}
