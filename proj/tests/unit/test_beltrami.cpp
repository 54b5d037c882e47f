#include <cmath>

#include "doctest.h"
#include "ucp/beltrami.hpp"
#include "ucp/transforms.hpp"

using namespace ucp;

namespace {

double interior_max(const ComplexField& f, const std::function<cplx(Point)>& expected) {
  const Grid2D& g = f.grid();
  double worst = 0;
  for (int j = 1; j < g.n() - 1; ++j)
    for (int i = 1; i < g.n() - 1; ++i) worst = std::max(worst, std::abs(f(i, j) - expected(g.node(i, j))));
  return worst;
}

}  // namespace

TEST_CASE("Beltrami coefficient") {
  const Grid2D g = make_grid({0, 0}, 1.0, 33);
  const CoefficientTables id = CoefficientTables::sample(EllipticOperator(), g);
  CHECK(interior_max(beltrami_coefficient(id, 1.0), [](Point) { return cplx(0); }) == 0.0);

  const CoefficientTables d = CoefficientTables::sample(EllipticOperator::constant(Mat2::diag(2, 0.5)), g);
  const ComplexField eta = beltrami_coefficient(d, 0.5);
  CHECK(std::abs(eta(5, 5) - cplx(1.0 / 3, 0)) < 1e-15);
  CHECK(std::norm(eta(5, 5)) == doctest::Approx((2.5 - 2) / (2.5 + 2)).epsilon(1e-14));
  CHECK(std::abs(eta(5, 5)) <= k_bound(0.5));

  const CoefficientTables bad = CoefficientTables::sample(EllipticOperator::constant(Mat2::diag(2, 1)), g);
  CHECK_THROWS(beltrami_coefficient(bad, 0.5));
}

TEST_CASE("D and D-tilde") {
  const Grid2D g = make_grid({0, 0}, 1.0, 33);
  const ComplexField zero = ComplexField::sample(g, [](Point) { return cplx(0); });
  const ComplexField z = ComplexField::sample(g, [](Point p) { return cplx(p.x, p.y); });
  CHECK(interior_max(d_operator(z, zero), [](Point) { return cplx(0); }) < 1e-12);

  const CoefficientTables id = CoefficientTables::sample(EllipticOperator(), g);
  const ScalarField x = ScalarField::sample(g, [](Point p) { return p.x; });
  CHECK(interior_max(dtilde_operator(x, id), [](Point) { return cplx(2, 0); }) < 1e-12);
  const ScalarField rz2 = ScalarField::sample(g, [](Point p) { return p.x * p.x - p.y * p.y; });
  CHECK(interior_max(dtilde_operator(rz2, id), [](Point p) { return 4.0 * cplx(p.x, p.y); }) < 1e-12);
}

TEST_CASE("W-tilde and Upsilon") {
  const Grid2D g = make_grid({0, 0}, 1.0, 33);
  const CoefficientTables c = CoefficientTables::sample(EllipticOperator::constant(Mat2::diag(2, 0.5)), g);
  CHECK(interior_max(wtilde(c), [](Point) { return cplx(0); }) < 1e-12);

  const CoefficientTables id = CoefficientTables::sample(EllipticOperator(), g);
  const ScalarField x = ScalarField::sample(g, [](Point p) { return p.x; });
  const ComplexField w0 = ComplexField::sample(g, [](Point) { return cplx(0); });
  CHECK(interior_max(upsilon(w0, x, id), [](Point) { return cplx(0); }) == 0.0);
  const ComplexField w1 = ComplexField::sample(g, [](Point) { return cplx(1, 0); });
  CHECK(interior_max(upsilon(w1, x, id), [](Point) { return cplx(0.5, 0); }) < 1e-12);
}

TEST_CASE("factorization is first-order accurate for a normalized sinusoidal matrix") {
  // Ā = (I + 0.1 sin x diag(1, −1)) / √det
  const auto a = [](Point p) {
    const double s = 0.1 * std::sin(p.x), r = std::sqrt((1 + s) * (1 - s));
    return Mat2{(1 + s) / r, 0, 0, (1 - s) / r};
  };
  const EllipticOperator op = EllipticOperator().with_A([a](Point p) { return a(p).a11; }, [](Point) { return 0.0; },
                                                        [a](Point p) { return a(p).a22; });
  const auto v = [](Point p) { return std::exp(0.5 * p.x) * std::cos(p.y); };
  const auto residual = [&](int n) {
    const Grid2D g = make_grid({0, 0}, 1.0, n);
    const CoefficientTables t = CoefficientTables::sample(op, g);
    const ComplexField dv = dtilde_operator(ScalarField::sample(g, v), t);
    const ComplexField lhs = d_operator(dv, beltrami_coefficient(t, 0.8));
    const ComplexField wt = wtilde(t);
    const ScalarField ref = apply_operator(op, ScalarField::sample(g, v));
    double worst = 0;
    for (std::size_t k : nodes_in_region(g, Disk{{0, 0}, 0.5}))
      worst = std::max(worst, std::abs(lhs[k] + wt[k] * dv[k] + ref[k]));
    return worst;
  };
  const double r1 = residual(33), r2 = residual(65);
  CHECK(r2 < 0.6 * r1);
  CHECK(r2 < 1e-2);
}

TEST_CASE("Cauchy and Beurling transforms of simple densities") {
  const Grid2D g = make_grid({0, 0}, 4.0, 256);
  const ComplexField zero = ComplexField::sample(g, [](Point) { return cplx(0); });
  CHECK(interior_max(cauchy_transform(zero), [](Point) { return cplx(0); }) == 0.0);
  CHECK(interior_max(beurling_transform(zero), [](Point) { return cplx(0); }) == 0.0);

  // smooth radial density c(1 − r²)² on B₁: Tω = c(1 − (1 − r²)³)/(3z), so Tω(2) = c/6
  const ComplexField w = ComplexField::sample(g, [](Point p) {
    const double r2 = p.x * p.x + p.y * p.y;
    return r2 < 1 ? cplx(std::pow(1 - r2, 2), 0) : cplx(0);
  });
  const ComplexField t = cauchy_transform(w);
  CHECK(std::abs(t.at({2, 0}) - cplx(1.0 / 6, 0)) < 1e-3);
  CHECK(std::abs(t.at({0, 0})) < 1e-3);
  // S = ∂T: outside the support Sω = −c/(3z²), so Sω(2) = −1/12
  const ComplexField s = beurling_transform(w);
  CHECK(std::abs(s.at({2, 0}) - cplx(-1.0 / 12, 0)) < 1e-3);

  const ComplexField wide = ComplexField::sample(g, [](Point) { return cplx(1, 0); });
  CHECK_THROWS(cauchy_transform(wide));
}

TEST_CASE("similarity principle in the trivial cases") {
  const Grid2D g = make_grid({0, 0}, 4.0, 256);
  const ComplexField zero = ComplexField::sample(g, [](Point) { return cplx(0); });
  const ComplexField w = ComplexField::sample(g, [](Point p) { return std::pow(cplx(p.x, p.y), 2) + 1.0; });
  const Disk region{{0, 0}, 1.5};
  const SimilarityFactors s0 = similarity_decompose(w, zero, zero, region);
  CHECK(interior_max(s0.g, [](Point) { return cplx(1, 0); }) < 1e-14);
  CHECK(interior_max(s0.f, [](Point p) { return std::pow(cplx(p.x, p.y), 2) + 1.0; }) < 1e-14);

  // A ≡ 1 on B₁ (anti-aliased), η = 0: ω = χ_{B₁} and g = e^{z̄} inside
  const double h = g.h();
  const ComplexField chi = ComplexField::sample(g, [h](Point p) {
    int in = 0;
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        const double x = p.x + h * ((a + 0.5) / 8 - 0.5), y = p.y + h * ((b + 0.5) / 8 - 0.5);
        in += x * x + y * y < 1;
      }
    return cplx(in / 64.0, 0);
  });
  const SimilarityFactors s1 = similarity_decompose(w, zero, chi, Disk{{0, 0}, 0.9});
  CHECK(s1.iterations <= 1);
  double worst = 0;
  for (std::size_t k : nodes_in_region(g, Disk{{0, 0}, 0.9})) {
    const Point p = g.node(static_cast<int>(k % g.n()), static_cast<int>(k / g.n()));
    worst = std::max(worst, std::abs(s1.g[k] - std::exp(cplx(p.x, -p.y))));
  }
  CHECK(worst < 1e-2);
}

TEST_CASE("three-circle inequality") {
  const Grid2D g = make_grid({0, 0}, 2.5, 257);
  const GeometrySource geo = GeometrySource::analytic(ConstantGamma(Mat2::identity()));
  for (int n = 1; n <= 5; ++n) {
    const ThreeCircleResult r =
        three_circle_check([n](Point p) { return std::pow(cplx(p.x, p.y), n); }, g, geo, 0.5, 1, 2, 1e-6);
    CHECK(r.theta == 0.5);
    CHECK(r.pass);
    CHECK(std::abs(r.lhs - r.rhs) <= 1e-6 * r.rhs);
  }
  const ThreeCircleResult strict = three_circle_check(
      [](Point p) { return std::pow(cplx(p.x, p.y), 3) + 10.0; }, g, geo, 0.5, 1, 2, 1e-6);
  CHECK(strict.pass);
  CHECK(strict.lhs < strict.rhs * (1 - 1e-6));
}
