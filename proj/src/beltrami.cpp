#include "ucp/beltrami.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ucp/error.hpp"
#include "ucp/transforms.hpp"

namespace ucp {

namespace {

constexpr cplx kI(0.0, 1.0);

double sup_over(const ComplexField& f, const std::vector<std::size_t>& nodes) {
  double m = 0.0;
  for (std::size_t k : nodes) m = std::max(m, std::abs(f[k]));
  return m;
}

double l2_norm(const std::vector<cplx>& v, double h2) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return std::sqrt(s * h2);
}

}  // namespace

CoefficientTables CoefficientTables::sample(const EllipticOperator& op, const Grid2D& grid) {
  if (!op.symmetric()) throw ValidationError("coefficient tables need a symmetric operator");
  return {ScalarField::sample(grid, op.a11_fn()), ScalarField::sample(grid, op.a12_fn()),
          ScalarField::sample(grid, op.a22_fn())};
}

double k_bound(double lambda) { return std::sqrt((1.0 - lambda) / (1.0 + lambda)); }

ComplexField beltrami_coefficient(const CoefficientTables& a, double lambda) {
  const Grid2D& g = a.grid();
  const double kb = k_bound(lambda);
  std::vector<cplx> eta(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double a11 = a.a11[k], a12 = a.a12[k], a22 = a.a22[k];
    if (std::abs(a11 * a22 - a12 * a12 - 1.0) > 1e-8)
      throw ValidationError("beltrami_coefficient: det A differs from 1");
    const double dai = (1 + a11) * (1 + a22) - a12 * a12;
    eta[k] = cplx((a11 - a22) / dai, 2 * a12 / dai);
    const double tr = a11 + a22;
    if (std::abs(std::norm(eta[k]) - (tr - 2) / (tr + 2)) > 1e-10)
      throw ValidationError("beltrami_coefficient: |η|² identity fails");
    if (std::abs(eta[k]) > kb + 1e-12)
      throw ValidationError("beltrami_coefficient: |η| exceeds √((1−λ)/(1+λ))");
  }
  return ComplexField(g, std::move(eta));
}

ComplexField d_operator(const ComplexField& f, const ComplexField& eta) {
  const WirtingerPair w = wirtinger(f);
  const ComplexField eta_d = zip_fields<cplx>(eta, w.d, [](cplx e, cplx d) { return e * d; });
  return zip_fields<cplx>(w.dbar, eta_d, [](cplx a, cplx b) { return a + b; });
}

ComplexField dtilde_operator(const ScalarField& v, const CoefficientTables& a) {
  if (!(v.grid() == a.grid())) throw ValidationError("dtilde_operator: grid mismatch");
  const ScalarField vx = diff_x(v), vy = diff_y(v);
  std::vector<cplx> out(v.grid().size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const cplx p(1 + a.a11[k], -a.a12[k]);
    const cplx q(a.a12[k], -(1 + a.a22[k]));
    out[k] = p * vx[k] + q * vy[k];
  }
  return ComplexField(v.grid(), std::move(out));
}

ComplexField wtilde(const CoefficientTables& a) {
  const ScalarField a11x = diff_x(a.a11), a11y = diff_y(a.a11);
  const ScalarField a12x = diff_x(a.a12), a12y = diff_y(a.a12);
  std::vector<cplx> out(a.grid().size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double a11 = a.a11[k], a12 = a.a12[k], a22 = a.a22[k];
    const double dai = (1 + a11) * (1 + a22) - a12 * a12;
    const double denom = a11 * dai * dai;
    if (!(std::abs(denom) > 1e-300)) throw ValidationError("wtilde: vanishing a11·det(A+I)²");
    const double al = a11 + a22 + 2 * a11 * a22;
    const double be = 2 * a12 * (1 + a11);
    const double ga = a12 * (a22 - a11);
    const double de = (1 + a11) * (1 + a11) - a12 * a12;
    const double re = al * a11x[k] - be * a12x[k] + ga * a11y[k] + de * a12y[k];
    const double im = ga * a11x[k] + de * a12x[k] - al * a11y[k] + be * a12y[k];
    out[k] = cplx(re, im) / denom;
  }
  return ComplexField(a.grid(), std::move(out));
}

ComplexField upsilon(const ComplexField& wbar, const ScalarField& v, const CoefficientTables& a) {
  const ComplexField dv = dtilde_operator(v, a);
  const ScalarField vx = diff_x(v), vy = diff_y(v);
  double gmax = 0.0;
  for (std::size_t k = 0; k < v.grid().size(); ++k) gmax = std::max(gmax, std::hypot(vx[k], vy[k]));
  const double tau = 1e-8 * gmax;
  std::vector<cplx> out(v.grid().size(), cplx(0.0, 0.0));
  for (std::size_t k = 0; k < out.size(); ++k)
    if (std::abs(dv[k]) > tau && tau > 0.0)
      out[k] = (wbar[k].real() * vx[k] + wbar[k].imag() * vy[k]) / dv[k];
  return ComplexField(v.grid(), std::move(out));
}

BeltramiData beltrami_data(const CoefficientTables& a, double lambda, const ComplexField& wbar,
                           const ScalarField& v) {
  std::vector<cplx> p(a.grid().size()), q(a.grid().size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = cplx(1 + a.a11[k], -a.a12[k]);
    q[k] = cplx(a.a12[k], -(1 + a.a22[k]));
  }
  return {beltrami_coefficient(a, lambda), k_bound(lambda), ComplexField(a.grid(), std::move(p)),
          ComplexField(a.grid(), std::move(q)), wtilde(a), upsilon(wbar, v, a)};
}

double lt_norm(const ComplexField& f, double t) {
  const double h2 = f.grid().h() * f.grid().h();
  double s = 0.0;
  for (const cplx& v : f.values()) s += std::pow(std::abs(v), t);
  return std::pow(s * h2, 1.0 / t);
}

SimilarityFactors similarity_decompose(const ComplexField& w, const ComplexField& eta,
                                       const ComplexField& a_coef, const Region& analysis_region,
                                       int max_iterations) {
  const Grid2D& g = w.grid();
  if (!(eta.grid() == g) || !(a_coef.grid() == g))
    throw ValidationError("similarity_decompose: grid mismatch");
  require_interior(g, analysis_region);
  require_central_support(eta);
  require_central_support(a_coef);
  const SpectralTransforms st(g);
  const double h2 = g.h() * g.h();

  SimilarityFactors out{a_coef, a_coef, a_coef};
  for (const cplx& e : eta.values()) out.k = std::max(out.k, std::abs(e));
  if (!(out.k < 1.0)) throw CertificationError("similarity", "sup|η| ≥ 1: no contraction");

  const std::vector<cplx> a(a_coef.values().begin(), a_coef.values().end());
  const double a_l2 = l2_norm(a, h2);
  std::vector<cplx> omega = a;
  if (a_l2 > 0.0) {
    double prev_update = std::numeric_limits<double>::infinity();
    int growth = 0;
    for (;;) {
      const ComplexField s = st.beurling(ComplexField(g, omega));
      std::vector<cplx> next(g.size());
      std::vector<cplx> diff(g.size());
      for (std::size_t k = 0; k < next.size(); ++k) {
        next[k] = a[k] - eta[k] * s[k];
        diff[k] = next[k] - omega[k];
      }
      omega = std::move(next);
      ++out.iterations;
      const double update = l2_norm(diff, h2) / std::max(l2_norm(omega, h2), 1e-300);
      if (update <= 1e-10) break;
      growth = update > prev_update ? growth + 1 : 0;
      if (growth >= 3 || out.iterations >= max_iterations || !std::isfinite(update))
        throw CertificationError("similarity", "fixed-point iteration diverges");
      prev_update = update;
    }
  }
  out.omega = ComplexField(g, omega);
  {
    const ComplexField s = st.beurling(out.omega);
    std::vector<cplx> r(g.size());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = omega[k] + eta[k] * s[k] - a[k];
    out.fixed_point_residual = a_l2 > 0.0 ? l2_norm(r, h2) / a_l2 : 0.0;
  }
  const ComplexField phi = st.cauchy(out.omega);
  out.g = map_field<cplx>(phi, [](cplx p) { return std::exp(p); });
  out.f = zip_fields<cplx>(w, out.g, [](cplx a1, cplx b1) { return a1 / b1; });

  const auto nodes = nodes_in_region(g, analysis_region);
  const ComplexField df = d_operator(out.f, eta);
  const WirtingerPair wf = wirtinger(out.f);
  const double dsup = sup_over(wf.d, nodes);
  const double fsup = sup_over(out.f, nodes);
  out.df_residual = sup_over(df, nodes) / std::max(dsup > 0 ? dsup : fsup, 1e-300);
  for (std::size_t k : nodes) out.log_g_max = std::max(out.log_g_max, std::abs(phi[k].real()));

  out.a_norm_t = lt_norm(a_coef, 4.0);
  out.omega_norm_t = lt_norm(out.omega, 4.0);
  for (const cplx& v : a) out.a_norm_inf = std::max(out.a_norm_inf, std::abs(v));
  std::size_t support = 0;
  for (const cplx& v : omega)
    if (std::abs(v) > 0.0) ++support;
  const double r_omega = std::sqrt(support * h2 / std::numbers::pi);
  out.holder_constant =
      std::pow(3.0 * std::numbers::pi, 0.75) * std::sqrt(r_omega) / std::numbers::pi;
  out.achieved_c = out.a_norm_t > 0.0 ? out.log_g_max / out.a_norm_t : 0.0;
  out.bracket_pass = out.log_g_max <= out.holder_constant * out.omega_norm_t * (1 + 1e-6) + 1e-12;
  return out;
}

GeometrySource GeometrySource::analytic(const ConstantGamma& g0, int vertices) {
  return {[g0, vertices](double s) { return exact_quasi_circle(g0, s, vertices); }, "analytic"};
}

GeometrySource GeometrySource::numeric(std::shared_ptr<const GreensField> gf) {
  return {[gf](double s) { return quasi_circle(*gf, s); }, "numeric"};
}

namespace {

ThreeCircleResult finish(double s1, double s2, double s3, double n1, double n2, double n3,
                         double tolerance) {
  if (!(s1 < s2 && s2 < s3)) throw ValidationError("three_circle_check: need s1 < s2 < s3");
  ThreeCircleResult r;
  r.s1 = s1;
  r.s2 = s2;
  r.s3 = s3;
  r.norm1 = n1;
  r.norm2 = n2;
  r.norm3 = n3;
  r.theta = std::log(s3 / s2) / std::log(s3 / s1);
  r.lhs = n2;
  r.rhs = std::pow(n1, r.theta) * std::pow(n3, 1 - r.theta);
  r.pass = r.lhs <= r.rhs * (1 + tolerance);
  return r;
}

}  // namespace

ThreeCircleResult three_circle_check(const ComplexField& f, const ComplexField& eta,
                                     const GeometrySource& geometry, double s1, double s2,
                                     double s3, double tolerance, double holomorphy_tolerance) {
  const QuasiGeometry q1 = geometry.quasi(s1), q2 = geometry.quasi(s2), q3 = geometry.quasi(s3);
  const auto nodes = nodes_in_region(f.grid(), q3.region());
  const ComplexField df = d_operator(f, eta);
  const WirtingerPair wf = wirtinger(f);
  const double dsup = sup_over(wf.d, nodes);
  const double scale = dsup > 0 ? dsup : std::max(sup_over(f, nodes), 1e-300);
  const double resid = sup_over(df, nodes) / scale;
  if (resid > holomorphy_tolerance)
    throw CertificationError("three_circle", "Df residual " + std::to_string(resid) +
                                                 " too large to certify D-holomorphy");
  ThreeCircleResult r =
      finish(s1, s2, s3, sup_norm_region(f, q1.region()), sup_norm_region(f, q2.region()),
             sup_norm_region(f, q3.region()), tolerance);
  r.df_residual = resid;
  return r;
}

ThreeCircleResult three_circle_check(const std::function<cplx(Point)>& f, const Grid2D& grid,
                                     const GeometrySource& geometry, double s1, double s2,
                                     double s3, double tolerance) {
  const auto mag = [&f](Point z) { return std::abs(f(z)); };
  auto norm_of = [&](double s) {
    const QuasiGeometry q = geometry.quasi(s);
    double m = sup_norm_region(mag, grid, q.region());
    for (const Point& v : q.contour) m = std::max(m, mag(v));
    return m;
  };
  return finish(s1, s2, s3, norm_of(s1), norm_of(s2), norm_of(s3), tolerance);
}

}  // namespace ucp
