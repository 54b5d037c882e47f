#include "ucp/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ucp/error.hpp"
#include "ucp/linear_solve.hpp"

namespace ucp {

namespace {

struct CoefficientSup {
  double grad_a = 0.0;
  double v_abs = 0.0;
  double v_minus = 0.0;
  double w = 0.0;
  double a = 0.0;
};

CoefficientSup coefficient_sup(const EllipticOperator& op, const Grid2D& grid, double m) {
  CoefficientSup s;
  for (std::size_t k : nodes_in_region(grid, Disk{{0, 0}, m})) {
    const Point z = grid.node(static_cast<int>(k % grid.n()), static_cast<int>(k / grid.n()));
    const Mat2 dx = op.dA_dx(z), dy = op.dA_dy(z);
    s.grad_a = std::max({s.grad_a, std::hypot(dx.a11, dy.a11), std::hypot(dx.a12, dy.a12),
                         std::hypot(dx.a21, dy.a21), std::hypot(dx.a22, dy.a22)});
    const double v = op.V(z);
    s.v_abs = std::max(s.v_abs, std::abs(v));
    s.v_minus = std::max(s.v_minus, std::max(-v, 0.0));
    s.w = std::max(s.w, norm(op.W(z)));
    const Mat2 a = op.A(z);
    s.a = std::max({s.a, std::abs(a.a11), std::abs(a.a12), std::abs(a.a21), std::abs(a.a22)});
  }
  return s;
}

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(6);
  o << v;
  return o.str();
}

}  // namespace

double subsolution_rate(double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("subsolution: λ must be positive");
  return (3.0 + std::sqrt(9.0 + 4.0 * lambda)) / (2.0 * lambda);
}

SubsolutionResult subsolution(const EllipticOperator& op, const Grid2D& grid, double K,
                              double lambda, double m) {
  if (!(K > 0.0)) throw ValidationError("subsolution: K must be positive");
  require_interior(grid, Disk{{0, 0}, m});
  const CoefficientSup sup = coefficient_sup(op, grid, m);
  const double slack = 1e-9 * (1.0 + K * K);
  if (sup.grad_a > K + slack || sup.v_abs > K * K + slack || sup.w > K + slack)
    throw ValidationError("subsolution: hypotheses fail on B_m (|∇a| = " + fmt(sup.grad_a) +
                          ", |V| = " + fmt(sup.v_abs) + ", |W| = " + fmt(sup.w) + ", K = " +
                          fmt(K) + ")");
  const double c = subsolution_rate(lambda);
  const double rate = c * K;
  SubsolutionResult r{.c = c,
                      .K = K,
                      .lambda = lambda,
                      .phi1 = ScalarField::sample(
                          grid, [rate](Point z) { return std::exp(rate * z.x); })};
  const ScalarField l = apply_operator(op, r.phi1);
  const double h = grid.h();
  r.worst_ratio = -std::numeric_limits<double>::infinity();
  r.max_value = -std::numeric_limits<double>::infinity();
  for (std::size_t k : nodes_in_region(grid, Disk{{0, 0}, m})) {
    const double tol = 10 * h * h * (K * K + r.c * K * sup.a) * r.phi1[k];
    const double ratio = l[k] / tol;
    if (ratio > r.worst_ratio) {
      r.worst_ratio = ratio;
      r.worst_point = grid.node(static_cast<int>(k % grid.n()), static_cast<int>(k / grid.n()));
    }
    r.max_value = std::max(r.max_value, l[k]);
    ++r.nodes;
  }
  r.pass = r.worst_ratio <= 1.0;
  if (!r.pass)
    throw CertificationError("subsolution", "𝓛φ₁ exceeds tolerance (ratio " + fmt(r.worst_ratio) +
                                                ")");
  return r;
}

SupersolutionResult supersolution(const EllipticOperator& op, const Grid2D& grid, double m) {
  require_interior(grid, Disk{{0, 0}, m});
  const double lambda = op.params().lambda;
  const CoefficientSup sup = coefficient_sup(op, grid, m);
  SupersolutionResult r{
      .phi2 = ScalarField::sample(grid, [m](Point z) { return m * m + 1 - z.x * z.x - z.y * z.y; }),
      .m = m};
  r.margin_gradient = lambda / (4 * m) - sup.grad_a;
  r.margin_v_minus = lambda / (m * m + 1) - sup.v_minus;
  r.margin_drift = lambda / (2 * m) - sup.w;
  const double worst = std::min({r.margin_gradient, r.margin_v_minus, r.margin_drift});
  if (worst < -1e-9)
    throw ValidationError("supersolution: smallness hypotheses violated (worst margin " +
                          fmt(worst) + ")");
  const ScalarField l = apply_operator(op, r.phi2);
  const double h = grid.h();
  const double tol = 1e-8 + 10 * h * h * (1 + sup.grad_a * m + sup.v_abs * (m * m + 1) + sup.w * m);
  r.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t k : nodes_in_region(grid, Disk{{0, 0}, m}))
    if (l[k] < r.min_value) {
      r.min_value = l[k];
      r.worst_point = grid.node(static_cast<int>(k % grid.n()), static_cast<int>(k / grid.n()));
    }
  r.pass = r.min_value >= -tol;
  if (!r.pass)
    throw CertificationError("supersolution", "𝓛φ₂ below −tolerance (" + fmt(r.min_value) + ")");
  return r;
}

PositiveSolutionResult positive_solution(const EllipticOperator& op, const Grid2D& grid, double m,
                                         const std::function<double(Point)>& boundary) {
  require_interior(grid, Disk{{0, 0}, m});
  const std::function<double(Point)> data =
      boundary ? boundary : [m](Point z) { return m * m + 1 - z.x * z.x - z.y * z.y; };
  std::vector<char> unknown(grid.size(), 0);
  std::vector<double> bvals(grid.size(), 0.0);
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i) {
      const Point z = grid.node(i, j);
      const std::size_t k = grid.index(i, j);
      if (norm(z) < m)
        unknown[k] = 1;
      else
        bvals[k] = data(z);
    }
  const StencilOperator stencil(op, grid);
  const ScalarField zero(grid, std::vector<double>(grid.size(), 0.0));
  const DirichletSolution sol = solve_dirichlet(stencil, unknown, zero,
                                                ScalarField(grid, std::move(bvals)),
                                                "positive_solution");
  const double at0 = sol.u.at({0, 0});
  if (!(at0 > 0.0))
    throw CertificationError("positive_solution", "solution is not positive at the origin");
  const double scale = 1.0 / at0;
  PositiveSolutionResult r{.phi = map_field<double>(sol.u, [scale](double v) { return scale * v; }),
                           .scale = scale};
  r.iterations = sol.iterations;
  r.solver_residual = sol.relative_residual;
  r.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t k : nodes_in_region(grid, Disk{{0, 0}, m})) r.min_value = std::min(r.min_value, r.phi[k]);
  if (!(r.min_value > 0.0))
    throw CertificationError("positive_solution",
                             "positivity fails on B_m (min " + fmt(r.min_value) + ")");
  const ScalarField l = stencil.apply(r.phi);
  for (std::size_t k : nodes_in_region(grid, Disk{{0, 0}, m - 2 * grid.h()}))
    r.equation_residual = std::max(r.equation_residual, std::abs(l[k]));
  return r;
}

double log_gradient_bound(const ScalarField& phi, double b, double K) {
  const Disk disk{{0, 0}, b};
  require_interior(phi.grid(), disk);
  for (std::size_t k : nodes_in_region(phi.grid(), Disk{{0, 0}, b + 2 * phi.grid().h()}))
    if (!(phi[k] > 0.0)) throw ValidationError("log_gradient_bound: φ is not positive on B_b");
  const Grid2D& g = phi.grid();
  const double h = g.h();
  double best = 0.0;
  for (std::size_t k : nodes_in_region(g, disk)) {
    const int i = static_cast<int>(k % g.n()), j = static_cast<int>(k / g.n());
    const double gx = (std::log(phi(i + 1, j)) - std::log(phi(i - 1, j))) / (2 * h);
    const double gy = (std::log(phi(i, j + 1)) - std::log(phi(i, j - 1))) / (2 * h);
    best = std::max(best, std::hypot(gx, gy));
  }
  return best / K;
}

PointwiseBounds pointwise_bounds(const ScalarField& phi, double b, double K,
                                 std::optional<double> tolerance) {
  const Disk disk{{0, 0}, b};
  const double ratio = log_gradient_bound(phi, b, K);
  PointwiseBounds r;
  r.min = std::numeric_limits<double>::infinity();
  r.max = 0.0;
  for (std::size_t k : nodes_in_region(phi.grid(), disk)) {
    r.min = std::min(r.min, phi[k]);
    r.max = std::max(r.max, phi[k]);
  }
  for (const Point& p : boundary_samples(disk, 0.5 * phi.grid().h())) {
    const double v = phi.at(p);
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
  }
  r.c = ratio * b;
  const double tol = tolerance ? *tolerance : 1e-9 + phi.grid().h() * ratio * K;
  r.pass = std::log(r.max) <= r.c * K + tol && -std::log(r.min) <= r.c * K + tol;
  return r;
}

MultiplierBundle multiplier_bundle(const EllipticOperator& op, const Grid2D& grid, double K,
                                   double lambda, double m, double b,
                                   const std::function<double(Point)>& boundary) {
  std::optional<SubsolutionResult> sub;
  std::string sub_error;
  try {
    sub = subsolution(op, grid, K, lambda, m);
  } catch (const std::exception& e) {
    sub_error = e.what();
  }
  std::optional<SupersolutionResult> super;
  std::string super_error;
  try {
    super = supersolution(op, grid, m);
  } catch (const std::exception& e) {
    super_error = e.what();
  }
  MultiplierBundle out{.K = K,
                       .lambda = lambda,
                       .m = m,
                       .b = b,
                       .sub = std::move(sub),
                       .sub_error = std::move(sub_error),
                       .super = std::move(super),
                       .super_error = std::move(super_error),
                       .positive = positive_solution(op, grid, m, boundary)};
  out.log_gradient_ratio = log_gradient_bound(out.positive.phi, b, K);
  out.bounds = pointwise_bounds(out.positive.phi, b, K);
  const ScalarField& phi = out.positive.phi;
  for (std::size_t k : nodes_in_region(grid, Disk{{0, 0}, m})) {
    const Point z = grid.node(static_cast<int>(k % grid.n()), static_cast<int>(k / grid.n()));
    if (out.sub) out.sandwich_lower = std::max(out.sandwich_lower, out.sub->phi1[k] / phi[k]);
    out.sandwich_upper = std::max(out.sandwich_upper, phi[k] / (m * m + 1 - z.x * z.x - z.y * z.y));
  }
  return out;
}

}  // namespace ucp
