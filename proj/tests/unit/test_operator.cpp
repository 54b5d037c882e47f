#include <cmath>

#include "doctest.h"
#include "ucp/operator.hpp"

using namespace ucp;

namespace {

double interior_max_abs_diff(const ScalarField& f, double expected, int skip = 1) {
  const Grid2D& g = f.grid();
  double worst = 0;
  for (int j = skip; j < g.n() - skip; ++j)
    for (int i = skip; i < g.n() - skip; ++i) worst = std::max(worst, std::abs(f(i, j) - expected));
  return worst;
}

}  // namespace

TEST_CASE("apply_operator on closed-form solutions") {
  const Grid2D g = make_grid({0, 0}, 1.0, 65);
  const EllipticOperator lap;
  const ScalarField r2 = ScalarField::sample(g, [](Point p) { return p.x * p.x + p.y * p.y; });
  CHECK(interior_max_abs_diff(apply_operator(lap, r2), -4.0) < 1e-10);

  const ScalarField z3 = ScalarField::sample(g, [](Point p) { return p.x * p.x * p.x - 3 * p.x * p.y * p.y; });
  CHECK(interior_max_abs_diff(apply_operator(lap, z3), 0.0) < 1e-10);

  const EllipticOperator helm = lap.with_V([](Point) { return 1.0; });
  const ScalarField sh = ScalarField::sample(g, [](Point p) { return std::sinh(p.x); });
  CHECK(interior_max_abs_diff(apply_operator(helm, sh), 0.0) < 10 * g.h() * g.h());
}

TEST_CASE("structural conditions") {
  const Grid2D g = make_grid({0, 0}, 2.0, 65);
  const Disk region{{0, 0}, 1.5};
  const StructureReport lap = verify_structure(EllipticOperator(), g, region);
  CHECK(lap.pass);
  CHECK(lap.condition("ellipticity").margin >= 0);

  StructureParams half;
  half.lambda = 0.5;
  CHECK(verify_structure(EllipticOperator::constant(Mat2::diag(2, 0.5), half), g, region).pass);
  StructureParams strict;
  strict.lambda = 0.6;
  const StructureReport bad = verify_structure(EllipticOperator::constant(Mat2::diag(2, 0.5), strict), g, region);
  const ConditionReport& e = bad.condition("ellipticity");
  CHECK_FALSE(e.pass);
  CHECK(e.failing_nodes == e.nodes);

  StructureParams vp;
  vp.mu1 = 1.0;
  vp.eps1 = 1.0;
  const EllipticOperator decaying = EllipticOperator().with_params(vp).with_V([](Point z) {
    const double b = bracket(z);
    return -1.0 / (b * b * b * b);
  });
  CHECK(verify_structure(decaying, g, region).condition("v_minus").pass);
}

TEST_CASE("symmetrize moves the antisymmetric part into the drift") {
  const Point p{0.3, -0.7};
  const EllipticOperator sym = EllipticOperator::constant({2, 0.5, 0.5, 1});
  const EllipticOperator s1 = symmetrize(sym);
  CHECK(s1.A(p).a12 == 0.5);
  CHECK(s1.W(p).x == 0.0);

  const EllipticOperator c = EllipticOperator().with_general_A([](Point) { return 1.0; }, [](Point) { return 1.0; },
                                                            [](Point) { return 0.0; }, [](Point) { return 1.0; });
  const EllipticOperator s2 = symmetrize(c);
  CHECK(s2.A(p).a12 == doctest::Approx(0.5));
  CHECK(s2.A(p).a21 == doctest::Approx(0.5));
  CHECK(std::abs(s2.W(p).x) < 1e-9);
  CHECK(std::abs(s2.W(p).y) < 1e-9);

  // a12 − a21 = 2x: ǎ = x, so Ŵ = W + (∂_y ǎ, −∂_x ǎ) = (0, −1)
  const EllipticOperator lin = EllipticOperator().with_general_A(
      [](Point) { return 1.0; }, [](Point z) { return z.x; }, [](Point z) { return -z.x; },
      [](Point) { return 1.0; });
  const EllipticOperator s3 = symmetrize(lin);
  CHECK(s3.W(p).x == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(s3.W(p).y == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("determinant normalization") {
  const Grid2D g = make_grid({0, 0}, 1.0, 33);
  const Point p{0.25, 0.5};

  const EllipticOperator four = EllipticOperator::constant(Mat2::diag(4, 4));
  const EllipticOperator n4 = normalize_determinant(four, g);
  CHECK(n4.A(p).a11 == doctest::Approx(1.0));
  CHECK(n4.A(p).a22 == doctest::Approx(1.0));
  CHECK(norm(n4.W(p)) < 1e-12);

  const ScalarField ex = ScalarField::sample(g, [](Point z) { return std::exp(z.x); });
  const EllipticOperator ne = normalize_determinant(EllipticOperator(), ex);
  CHECK(ne.W(p).x == doctest::Approx(-2.0).epsilon(1e-3));
  CHECK(std::abs(ne.W(p).y) < 1e-3);
}

TEST_CASE("frozen frame") {
  const Grid2D g = make_grid({0, 0}, 4.0, 33);
  const FrozenFrame f = freeze_frame(EllipticOperator::constant(Mat2::diag(4, 1)), 1.0, g);
  CHECK(f.Q.a11 == doctest::Approx(2.0));
  CHECK(f.Q.a22 == doctest::Approx(1.0));
  const Mat2 at = f.op.A({0.3, 0.1});
  CHECK(at.a11 == doctest::Approx(1.0));
  CHECK(at.a22 == doctest::Approx(1.0));
  CHECK(std::abs(at.a12) < 1e-14);

  // eigenvalues {2, ½} at the anchor become {1, 1}
  const double c = std::cos(0.4), s = std::sin(0.4);
  const EllipticOperator rot = EllipticOperator().with_A(
      [=](Point z) { return (2 * c * c + 0.5 * s * s) * (1 + 0.1 * z.y); },
      [=](Point z) { return (1.5 * c * s) * (1 + 0.1 * z.y); },
      [=](Point z) { return (2 * s * s + 0.5 * c * c) * (1 + 0.1 * z.y); });
  const FrozenFrame fr = freeze_frame(rot, 1.0, g);
  const SymEigen e = sym_eigen(fr.op.A(fr.frozen_point));
  CHECK(std::abs(e.d1 - 1) < 1e-10);
  CHECK(std::abs(e.d2 - 1) < 1e-10);
}

TEST_CASE("non-divergence form") {
  const Point p{0.2, 0.4};
  const NonDivergenceForm c = to_nondivergence(EllipticOperator::constant(Mat2::diag(2, 3)));
  CHECK(norm(c.wn(p)) < 1e-10);
  const NonDivergenceForm lin = to_nondivergence(
      EllipticOperator().with_A([](Point z) { return 1 + z.x; }, [](Point) { return 0.0; }, [](Point) { return 1.0; }));
  CHECK(lin.wn(p).x == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(lin.wn(p).y) < 1e-8);

  // both forms agree on u = sin x sin y: to rounding for A = (1 + 0.1x)I, and with a discrepancy
  // shrinking under refinement for A = (1 + 0.1x²)I
  const EllipticOperator lin_op = EllipticOperator().with_A(
      [](Point z) { return 1 + 0.1 * z.x; }, [](Point) { return 0.0; }, [](Point z) { return 1 + 0.1 * z.x; });
  const EllipticOperator quad_op = EllipticOperator().with_A(
      [](Point z) { return 1 + 0.1 * z.x * z.x; }, [](Point) { return 0.0; },
      [](Point z) { return 1 + 0.1 * z.x * z.x; });
  const auto gap = [](const EllipticOperator& op, int n) {
    const Grid2D g = make_grid({0, 0}, 1.0, n);
    const ScalarField u = ScalarField::sample(g, [](Point z) { return std::sin(z.x) * std::sin(z.y); });
    const ScalarField a = apply_operator(op, u), b = apply_nondivergence(to_nondivergence(op), u);
    double worst = 0;
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
  };
  CHECK(gap(lin_op, 33) < 1e-9);
  CHECK(gap(lin_op, 65) < 1e-9);
  const double coarse = gap(quad_op, 33), fine = gap(quad_op, 65);
  CHECK(fine < coarse / 3);
}
