#include <cmath>

#include "doctest.h"
#include "ucp/error.hpp"
#include "ucp/field.hpp"

using namespace ucp;

TEST_CASE("grid spacing and node placement") {
  const Grid2D g16 = make_grid({0, 0}, 1.0, 16);
  CHECK(g16.h() == doctest::Approx(2.0 / 15).epsilon(1e-15));
  CHECK(g16.node_at({0, 0}).first == -1);

  const Grid2D g17 = make_grid({0, 0}, 1.0, 17);
  CHECK(g17.node_at({0, 0}) == std::pair<int, int>{8, 8});

  CHECK(make_grid({0, 0}, 2.0, 257).h() == 0.015625);
  CHECK_THROWS_AS(make_grid({0, 0}, 1.0, 8), ValidationError);
  CHECK_THROWS_AS(make_grid({0, 0}, 0.0, 32), ValidationError);
}

TEST_CASE("Wirtinger derivatives of z, conj z and |z|^2") {
  const Grid2D g = make_grid({0, 0}, 1.0, 65);
  const auto interior_max = [&g](const ComplexField& f, auto expected) {
    double worst = 0;
    for (int j = 1; j < g.n() - 1; ++j)
      for (int i = 1; i < g.n() - 1; ++i) worst = std::max(worst, std::abs(f(i, j) - expected(g.node(i, j))));
    return worst;
  };
  const auto zero = [](Point) { return cplx(0); };
  const auto one = [](Point) { return cplx(1); };

  const WirtingerPair z = wirtinger(ComplexField::sample(g, [](Point p) { return cplx(p.x, p.y); }));
  CHECK(interior_max(z.d, one) < 1e-12);
  CHECK(interior_max(z.dbar, zero) < 1e-12);

  const WirtingerPair zb = wirtinger(ComplexField::sample(g, [](Point p) { return cplx(p.x, -p.y); }));
  CHECK(interior_max(zb.d, zero) < 1e-12);
  CHECK(interior_max(zb.dbar, one) < 1e-12);

  // centered differences are exact on quadratics
  const WirtingerPair q =
      wirtinger(ComplexField::sample(g, [](Point p) { return cplx(p.x * p.x + p.y * p.y, 0); }));
  CHECK(interior_max(q.d, [](Point p) { return cplx(p.x, -p.y); }) < 1e-12);
  CHECK(interior_max(q.dbar, [](Point p) { return cplx(p.x, p.y); }) < 1e-12);
}

TEST_CASE("sup norms over regions") {
  const Grid2D g = make_grid({0, 0}, 2.0, 129);
  const double h = g.h();
  const ScalarField x = ScalarField::sample(g, [](Point p) { return p.x; });
  CHECK(std::abs(sup_norm_region(x, Disk{{0, 0}, 1.0}) - 1.0) <= h);

  const ScalarField q = ScalarField::sample(g, [](Point p) { return p.x * p.x - p.y * p.y; });
  CHECK(std::abs(sup_norm_region(q, Disk{{0, 0}, 0.5}) - 0.25) <= 2 * h);

  const ScalarField three = ScalarField::sample(g, [](Point) { return 3.0; });
  CHECK(sup_norm_region(three, Disk{{0.3, -0.2}, 0.7}) == doctest::Approx(3.0).epsilon(1e-14));
  const Polygon square{{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}};
  CHECK(sup_norm_region(three, square) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("bilinear interpolation is exact on bilinear functions") {
  const Grid2D g = make_grid({0, 0}, 1.0, 33);
  const ScalarField f = ScalarField::sample(g, [](Point p) { return 1 + 2 * p.x - p.y + 0.5 * p.x * p.y; });
  const Point p{0.123, -0.456};
  CHECK(f.at(p) == doctest::Approx(1 + 2 * p.x - p.y + 0.5 * p.x * p.y).epsilon(1e-13));
  CHECK_THROWS_AS(f.at({1.5, 0}), ValidationError);
}
