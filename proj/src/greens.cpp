#include "ucp/greens.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "ucp/error.hpp"
#include "ucp/linear_solve.hpp"

namespace ucp {

double ellipse_perimeter(double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw ValidationError("ellipse_perimeter: inputs must be positive");
  const double a = std::sqrt(d1), b = std::sqrt(d2);
  auto speed = [a, b](double t) {
    const double s = std::sin(t), c = std::cos(t);
    return std::sqrt(a * a * s * s + b * b * c * c);
  };
  double err = 0.0;
  const double quarter = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      speed, 0.0, std::numbers::pi / 2, 20, 1e-14, &err);
  return 4.0 * quarter;
}

ConstantGamma::ConstantGamma(const Mat2& a0, Point pole) : a0_(a0), pole_(pole) {
  if (std::abs(a0.a12 - a0.a21) > 1e-12 * (std::abs(a0.a12) + 1.0))
    throw ValidationError("constant_gamma: A0 must be symmetric");
  eig_ = sym_eigen(a0);
  if (!(eig_.d2 > 0.0) || !std::isfinite(eig_.d1))
    throw ValidationError("constant_gamma: A0 is singular or indefinite");
  inv_ = a0.inverse();
  p_ = ellipse_perimeter(eig_.d1, eig_.d2);
}

double ConstantGamma::operator()(Point z) const {
  const Vec2 d = z - pole_;
  const Vec2 t = inv_ * d;
  return -std::log(d.x * t.x + d.y * t.y) / (2.0 * p_);
}

Vec2 ConstantGamma::gradient(Point z) const {
  const Vec2 d = z - pole_;
  const Vec2 t = inv_ * d;
  const double q = d.x * t.x + d.y * t.y;
  return (-1.0 / (p_ * q)) * t;
}

double ConstantGamma::level(double s) { return -std::log(s) / (2.0 * std::numbers::pi); }

double ConstantGamma::outer_radius(double s) const {
  return std::sqrt(eig_.d1) * std::pow(s, p_ / (2.0 * std::numbers::pi));
}

double ConstantGamma::inner_radius(double s) const {
  return std::sqrt(eig_.d2) * std::pow(s, p_ / (2.0 * std::numbers::pi));
}

double ConstantGamma::s_for_outer_radius(double r) const {
  return std::pow(r / std::sqrt(eig_.d1), 2.0 * std::numbers::pi / p_);
}

std::vector<Point> ConstantGamma::level_ellipse(double s, int vertices) const {
  const double ra = outer_radius(s), rb = inner_radius(s);
  const double c = std::cos(eig_.angle), sn = std::sin(eig_.angle);
  std::vector<Point> out;
  out.reserve(vertices);
  for (int k = 0; k < vertices; ++k) {
    const double t = 2.0 * std::numbers::pi * k / vertices;
    const double u = ra * std::cos(t), v = rb * std::sin(t);
    out.push_back({pole_.x + c * u - sn * v, pole_.y + sn * u + c * v});
  }
  return out;
}

double GreensField::operator()(Point z) const { return frozen(z) + remainder.at(z); }

GreensField variable_gamma(const EllipticOperator& op_in, Point pole, const Grid2D& grid) {
  if (!op_in.symmetric()) throw ValidationError("variable_gamma: operator must be symmetric");
  const auto [pi, pj] = grid.node_at(pole);
  const int margin = 8;
  if (pi < margin || pj < margin || pi > grid.n() - 1 - margin || pj > grid.n() - 1 - margin)
    throw ValidationError("variable_gamma: pole must be a grid node at least 8h inside the grid");
  const EllipticOperator op = op_in.without_lower_order();
  const Mat2 a0 = op.A(pole);
  ConstantGamma frozen(a0, pole);

  const ScalarFn a11 = op.a11_fn(), a12 = op.a12_fn(), a22 = op.a22_fn();
  const EllipticOperator diff = op.with_A([=](Point z) { return a11(z) - a0.a11; },
                                          [=](Point z) { return a12(z) - a0.a12; },
                                          [=](Point z) { return a22(z) - a0.a22; });
  const VectorFn grad = [&frozen](Point z) { return frozen.gradient(z); };
  // flux_divergence returns −div(B∇Γ₀); the remainder's forcing is its negative.
  const ScalarField g = flux_divergence(diff, grad, grid);
  const ScalarField rhs = map_field<double>(g, [](double v) { return -v; });

  std::vector<char> unknown(grid.size(), 0);
  for (int j = 1; j < grid.n() - 1; ++j)
    for (int i = 1; i < grid.n() - 1; ++i) unknown[grid.index(i, j)] = 1;
  const StencilOperator stencil(op, grid);
  const ScalarField zero(grid, std::vector<double>(grid.size(), 0.0));
  DirichletSolution sol = solve_dirichlet(stencil, unknown, rhs, zero, "variable_gamma");

  const double h = grid.h();
  const double pole_value =
      frozen({pole.x + 0.5 * h * std::cos(frozen.rotation()), pole.y + 0.5 * h * std::sin(frozen.rotation())});
  std::vector<double> gv(grid.size());
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i) {
      const std::size_t k = grid.index(i, j);
      gv[k] = (i == pi && j == pj ? pole_value : frozen(grid.node(i, j))) + sol.u[k];
    }
  ScalarField gamma(grid, std::move(gv));

  const double hw = grid.half_width();
  const double r_in = std::max(3 * h, 0.25 * hw), r_out = 0.5 * hw;
  const ScalarField lg = stencil.apply(gamma);
  double res = 0.0;
  for (int j = 1; j < grid.n() - 1; ++j)
    for (int i = 1; i < grid.n() - 1; ++i) {
      const double r = norm(grid.node(i, j) - pole);
      if (r >= r_in && r <= r_out) res = std::max(res, std::abs(lg(i, j)));
    }

  double offset = 0.0;
  const int samples = 256;
  for (int k = 0; k < samples; ++k) {
    const double t = 2 * std::numbers::pi * k / samples;
    offset += sol.u.at({pole.x + r_out * std::cos(t), pole.y + r_out * std::sin(t)});
  }
  offset /= samples;

  GreensField out{std::move(gamma), sol.u, frozen, op, sol.iterations, sol.relative_residual,
                  offset, res,
                  "remainder = 0 on the grid square of half-width " + std::to_string(hw)};
  return out;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  return sxy / sxx;
}

PerturbationStudy check_fs_perturbation(const std::function<EllipticOperator(double)>& family,
                                        std::span<const double> deltas, const Grid2D& grid,
                                        double radius, Point pole) {
  PerturbationStudy study;
  study.radius = radius;
  std::vector<double> lx, ly;
  for (double d : deltas) {
    const GreensField gf = variable_gamma(family(d), pole, grid);
    const double diff = sup_norm_region(gf.remainder, Disk{pole, radius});
    study.deltas.push_back(d);
    study.sup_diffs.push_back(diff);
    if (d > 0 && diff > 0) {
      lx.push_back(std::log(d));
      ly.push_back(std::log(diff));
    }
  }
  study.slope = least_squares_slope(lx, ly);
  return study;
}

LogBracket fit_log_bracket(const GreensField& gf, double r1) {
  if (!(r1 > 0.0 && r1 < 1.0)) throw ValidationError("fit_log_bracket: R1 must lie in (0, 1)");
  const Grid2D& g = gf.gamma.grid();
  LogBracket b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
               false};
  for (std::size_t k : nodes_in_region(g, Disk{gf.pole(), r1})) {
    const int i = static_cast<int>(k % g.n()), j = static_cast<int>(k / g.n());
    const double r = norm(g.node(i, j) - gf.pole());
    if (r < 3 * g.h() || r >= r1) continue;
    const double ratio = gf.gamma[k] / std::log(1.0 / r);
    b.c_lower = std::min(b.c_lower, ratio);
    b.c_upper = std::max(b.c_upper, ratio);
  }
  b.pass = b.c_lower > 0.0 && std::isfinite(b.c_upper);
  return b;
}

}  // namespace ucp
