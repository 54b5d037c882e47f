#include "ucp/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ucp/error.hpp"
#include "ucp/parallel.hpp"

namespace ucp {

namespace {

constexpr double kCoefStep = 1e-5;

ScalarFn constant_fn(double c) {
  return [c](Point) { return c; };
}

/// Bilinear lookup that clamps the query point onto the table grid.
template <typename T>
std::function<T(Point)> clamped_lookup(const Field<T>& f) {
  return [f](Point p) {
    const Grid2D& g = f.grid();
    const double lo_x = g.x(0), hi_x = g.x(g.n() - 1);
    const double lo_y = g.y(0), hi_y = g.y(g.n() - 1);
    return f.at({std::clamp(p.x, lo_x, hi_x), std::clamp(p.y, lo_y, hi_y)});
  };
}

double ddx(const ScalarFn& f, Point z) {
  return (f({z.x + kCoefStep, z.y}) - f({z.x - kCoefStep, z.y})) / (2 * kCoefStep);
}

double ddy(const ScalarFn& f, Point z) {
  return (f({z.x, z.y + kCoefStep}) - f({z.x, z.y - kCoefStep})) / (2 * kCoefStep);
}

}  // namespace

EllipticOperator::EllipticOperator()
    : a11_(constant_fn(1.0)), a12_(constant_fn(0.0)), a22_(constant_fn(1.0)) {}

EllipticOperator EllipticOperator::constant(const Mat2& a, StructureParams params) {
  EllipticOperator op;
  if (a.a12 == a.a21)
    op = op.with_A(constant_fn(a.a11), constant_fn(a.a12), constant_fn(a.a22));
  else
    op = op.with_general_A(constant_fn(a.a11), constant_fn(a.a12), constant_fn(a.a21),
                           constant_fn(a.a22));
  return op.with_params(params);
}

EllipticOperator EllipticOperator::from_tables(const ScalarField& a11, const ScalarField& a12,
                                               const ScalarField& a22, const ComplexField* w,
                                               const ScalarField* v, StructureParams params) {
  const Grid2D& g = a11.grid();
  if (!(a12.grid() == g) || !(a22.grid() == g) || (w && !(w->grid() == g)) ||
      (v && !(v->grid() == g)))
    throw ValidationError("coefficient tables must share one grid");
  EllipticOperator op;
  op = op.with_A(clamped_lookup(a11), clamped_lookup(a12), clamped_lookup(a22));
  if (w) {
    auto lookup = clamped_lookup(*w);
    op = op.with_W([lookup](Point p) {
      const cplx c = lookup(p);
      return Vec2{c.real(), c.imag()};
    });
  }
  if (v) op = op.with_V(clamped_lookup(*v));
  op.params_ = params;
  op.domain_ = g;
  return op;
}

EllipticOperator EllipticOperator::with_A(ScalarFn a11, ScalarFn a12, ScalarFn a22) const {
  EllipticOperator op = *this;
  op.a11_ = std::move(a11);
  op.a12_ = std::move(a12);
  op.a21_ = nullptr;
  op.a22_ = std::move(a22);
  return op;
}

EllipticOperator EllipticOperator::with_general_A(ScalarFn a11, ScalarFn a12, ScalarFn a21,
                                                  ScalarFn a22) const {
  EllipticOperator op = *this;
  op.a11_ = std::move(a11);
  op.a12_ = std::move(a12);
  op.a21_ = std::move(a21);
  op.a22_ = std::move(a22);
  return op;
}

EllipticOperator EllipticOperator::with_W(VectorFn w) const {
  EllipticOperator op = *this;
  op.w_ = std::move(w);
  return op;
}

EllipticOperator EllipticOperator::with_V(ScalarFn v) const {
  EllipticOperator op = *this;
  op.v_ = std::move(v);
  return op;
}

EllipticOperator EllipticOperator::with_params(StructureParams params) const {
  EllipticOperator op = *this;
  op.params_ = params;
  return op;
}

EllipticOperator EllipticOperator::without_lower_order() const {
  EllipticOperator op = *this;
  op.w_ = nullptr;
  op.v_ = nullptr;
  return op;
}

Mat2 EllipticOperator::A(Point z) const { return {a11(z), a12(z), a21(z), a22(z)}; }

Mat2 EllipticOperator::dA_dx(Point z) const {
  return {ddx(a11_, z), ddx(a12_, z), ddx(a21_fn(), z), ddx(a22_, z)};
}

Mat2 EllipticOperator::dA_dy(Point z) const {
  return {ddy(a11_, z), ddy(a12_, z), ddy(a21_fn(), z), ddy(a22_, z)};
}

StencilOperator::StencilOperator(const EllipticOperator& op, const Grid2D& grid)
    : grid_(grid), symmetric_(op.symmetric() && !op.has_drift()) {
  const int n = grid.n();
  const double h = grid.h();
  const double hh = h * h;
  const auto m = static_cast<std::size_t>(n - 1);

  // a11 on horizontal edge midpoints, a22 on vertical edge midpoints, a12/a21 at cell centres.
  std::vector<double> ah(m * n), av(n * m), c12(m * m), c21(m * m);
  const ScalarFn a11 = op.a11_fn(), a12 = op.a12_fn(), a21 = op.a21_fn(), a22 = op.a22_fn();
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j)
      for (std::size_t i = 0; i < m; ++i) {
        const double x = grid.x(static_cast<int>(i)) + 0.5 * h;
        const double y = grid.y(static_cast<int>(j));
        ah[j * m + i] = a11({x, y});
        av[i * n + j] = a22({grid.x(static_cast<int>(j)), grid.y(static_cast<int>(i)) + 0.5 * h});
      }
  });
  parallel_for(m, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j)
      for (std::size_t i = 0; i < m; ++i) {
        const Point c{grid.x(static_cast<int>(i)) + 0.5 * h, grid.y(static_cast<int>(j)) + 0.5 * h};
        c12[j * m + i] = a12(c);
        c21[j * m + i] = op.symmetric() ? c12[j * m + i] : a21(c);
      }
  });

  const std::size_t inner = static_cast<std::size_t>(n - 2);
  weights_.assign(inner * inner, {});
  parallel_for(inner * inner, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const int i = static_cast<int>(k % inner) + 1, j = static_cast<int>(k / inner) + 1;
      auto& w = weights_[k];
      auto at = [&w](int di, int dj) -> double& { return w[(dj + 1) * 3 + (di + 1)]; };
      const double aE = ah[j * m + i], aW = ah[j * m + i - 1];
      const double aN = av[j * n + i], aS = av[(j - 1) * n + i];
      at(0, 0) += (aE + aW + aN + aS) / hh;
      at(1, 0) -= aE / hh;
      at(-1, 0) -= aW / hh;
      at(0, 1) -= aN / hh;
      at(0, -1) -= aS / hh;
      for (int ey : {-1, 1})
        for (int ex : {-1, 1}) {
          const int ci = ex > 0 ? i : i - 1, cj = ey > 0 ? j : j - 1;
          const double b12 = c12[cj * m + ci], b21 = c21[cj * m + ci];
          const int cx = ex > 0 ? 0 : 1, cy = ey > 0 ? 0 : 1;
          const double sxk = cx ? 1.0 : -1.0, syk = cy ? 1.0 : -1.0;
          for (int my = 0; my < 2; ++my)
            for (int mx = 0; mx < 2; ++mx) {
              const double sxm = mx ? 1.0 : -1.0, sym = my ? 1.0 : -1.0;
              at(mx - cx, my - cy) += (sxk * b12 * sym + syk * b21 * sxm) / (4 * hh);
            }
        }
      const Point z = grid.node(i, j);
      if (op.has_drift()) {
        const Vec2 wv = op.W(z);
        at(1, 0) += wv.x / (2 * h);
        at(-1, 0) -= wv.x / (2 * h);
        at(0, 1) += wv.y / (2 * h);
        at(0, -1) -= wv.y / (2 * h);
      }
      if (op.has_potential()) at(0, 0) += op.V(z);
    }
  });
}

ScalarField StencilOperator::apply(const ScalarField& u) const {
  if (!(u.grid() == grid_)) throw ValidationError("apply_operator: grid mismatch");
  const int n = grid_.n();
  std::vector<double> out(grid_.size(), 0.0);
  const std::size_t inner = static_cast<std::size_t>(n - 2);
  parallel_for(inner * inner, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const int i = static_cast<int>(k % inner) + 1, j = static_cast<int>(k / inner) + 1;
      const auto& w = weights_[k];
      double s = 0.0;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) s += w[(dj + 1) * 3 + (di + 1)] * u(i + di, j + dj);
      out[grid_.index(i, j)] = s;
    }
  });
  return ScalarField(grid_, std::move(out));
}

ScalarField apply_operator(const EllipticOperator& op, const ScalarField& u) {
  if (op.domain() && !(*op.domain() == u.grid()))
    throw ValidationError("apply_operator: field grid differs from the coefficient tables' grid");
  return StencilOperator(op, u.grid()).apply(u);
}

ScalarField flux_divergence(const EllipticOperator& b, const VectorFn& grad_g, const Grid2D& grid) {
  const int n = grid.n();
  const double h = grid.h();
  std::vector<double> out(grid.size(), 0.0);
  const std::size_t inner = static_cast<std::size_t>(n - 2);
  parallel_for(inner * inner, [&](std::size_t beg, std::size_t end) {
    for (std::size_t k = beg; k < end; ++k) {
      const int i = static_cast<int>(k % inner) + 1, j = static_cast<int>(k / inner) + 1;
      const Point z = grid.node(i, j);
      auto fx = [&](Point p) { return b.a11(p) * grad_g(p).x; };
      auto fy = [&](Point p) { return b.a22(p) * grad_g(p).y; };
      double s = -(fx({z.x + 0.5 * h, z.y}) - fx({z.x - 0.5 * h, z.y}) +
                   fy({z.x, z.y + 0.5 * h}) - fy({z.x, z.y - 0.5 * h})) /
                 h;
      for (int ey : {-1, 1})
        for (int ex : {-1, 1}) {
          const Point c{z.x + 0.5 * ex * h, z.y + 0.5 * ey * h};
          const Vec2 gc = grad_g(c);
          const double sxk = ex > 0 ? -1.0 : 1.0, syk = ey > 0 ? -1.0 : 1.0;
          s += (sxk * b.a12(c) * gc.y + syk * b.a21(c) * gc.x) / (2 * h);
        }
      out[grid.index(i, j)] = s;
    }
  });
  return ScalarField(grid, std::move(out));
}

const ConditionReport& StructureReport::condition(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  throw ValidationError("structure report has no condition " + name);
}

StructureReport verify_structure(const EllipticOperator& op, const Grid2D& grid,
                                 const Region& region, std::optional<double> tolerance) {
  require_interior(grid, region);
  const auto nodes = nodes_in_region(grid, region);
  if (nodes.empty()) throw ValidationError("verify_structure: region contains no nodes");
  const StructureParams& p = op.params();
  const double h = grid.h();
  auto tol_for = [&](double scale) { return tolerance ? *tolerance : 1e-8 + 10 * h * h * scale; };

  auto make = [](std::string name, bool checked) {
    ConditionReport c;
    c.name = std::move(name);
    c.checked = checked;
    c.margin = std::numeric_limits<double>::infinity();
    return c;
  };
  ConditionReport ellip = make("ellipticity", true);
  ConditionReport lips = make("lipschitz", p.mu0 && p.eps0);
  ConditionReport vplus = make("v_plus", true);
  ConditionReport vminus = make("v_minus", p.mu1 && p.eps1);
  ConditionReport wcond = make("drift", p.mu2 && p.eps2);
  if (p.potential_class == PotentialClass::Bounded && !p.mu1) vplus.checked = false;

  auto record = [](ConditionReport& c, double margin, double tol, Point z) {
    ++c.nodes;
    if (margin < c.margin) {
      c.margin = margin;
      c.worst_point = z;
    }
    if (margin < -tol) ++c.failing_nodes;
  };

  const ScalarFn entries[4] = {op.a11_fn(), op.a12_fn(), op.a21_fn(), op.a22_fn()};
  for (std::size_t k : nodes) {
    const int i = static_cast<int>(k % grid.n()), j = static_cast<int>(k / grid.n());
    const Point z = grid.node(i, j);
    const Mat2 a = op.A(z);
    const double scale = std::max({std::abs(a.a11), std::abs(a.a12), std::abs(a.a21),
                                   std::abs(a.a22), 1.0});
    const SymEigen e = sym_eigen(a);
    record(ellip, std::min(e.d2 - p.lambda, 1.0 / p.lambda - e.d1), tol_for(scale), z);

    if (lips.checked) {
      const double env = *p.mu0 * std::pow(bracket(z), -(1.0 + *p.eps0));
      double worst = std::numeric_limits<double>::infinity();
      for (int q = 0; q < 4; ++q) {
        if (q == 2 && op.symmetric()) continue;
        const ScalarFn& f = entries[q];
        const double gx = (f({z.x + h, z.y}) - f({z.x - h, z.y})) / (2 * h);
        const double gy = (f({z.x, z.y + h}) - f({z.x, z.y - h})) / (2 * h);
        worst = std::min(worst, env - std::hypot(gx, gy));
      }
      record(lips, worst, tol_for(scale), z);
    }
    const double v = op.V(z);
    const double vp = std::max(v, 0.0), vm = std::max(-v, 0.0);
    const double vscale = std::abs(v) + 1.0;
    if (vplus.checked) {
      const double bound =
          p.potential_class == PotentialClass::Bounded ? (*p.mu1) * (*p.mu1) : 1.0;
      const double value = p.potential_class == PotentialClass::Bounded ? std::abs(v) : vp;
      record(vplus, bound - value, tol_for(vscale), z);
    }
    if (vminus.checked) {
      const double env = (*p.mu1) * (*p.mu1) * std::pow(bracket(z), -2.0 * (1.0 + *p.eps1));
      record(vminus, env - vm, tol_for(vscale), z);
    }
    if (wcond.checked) {
      const Vec2 w = op.W(z);
      const double env = *p.mu2 * std::pow(bracket(z), -(1.0 + *p.eps2));
      record(wcond, env - norm(w), tol_for(norm(w) + 1.0), z);
    }
  }

  StructureReport report;
  for (ConditionReport* c : {&ellip, &lips, &vplus, &vminus, &wcond}) {
    if (!c->checked) c->margin = 0.0;
    c->pass = !c->checked || c->failing_nodes == 0;
    report.pass = report.pass && c->pass;
    report.conditions.push_back(*c);
  }
  return report;
}

EllipticOperator symmetrize(const EllipticOperator& op) {
  if (op.symmetric()) return op;
  const ScalarFn a12 = op.a12_fn(), a21 = op.a21_fn();
  const ScalarFn sym = [a12, a21](Point z) { return 0.5 * (a12(z) + a21(z)); };
  const ScalarFn skew = [a12, a21](Point z) { return 0.5 * (a12(z) - a21(z)); };
  const VectorFn w = op.w_fn();
  const VectorFn what = [w, skew](Point z) {
    const Vec2 base = w ? w(z) : Vec2{};
    return Vec2{base.x + ddy(skew, z), base.y - ddx(skew, z)};
  };
  return op.with_A(op.a11_fn(), sym, op.a22_fn()).with_W(what);
}

namespace {

EllipticOperator normalize_impl(const EllipticOperator& op, const Grid2D& grid,
                                const ScalarField* phi) {
  for (int j = 0; j < grid.n(); ++j)
    for (int i = 0; i < grid.n(); ++i)
      if (!(op.A(grid.node(i, j)).det() > 0.0))
        throw ValidationError("normalize_determinant: non-positive det A");
  const ScalarFn a11 = op.a11_fn(), a12 = op.a12_fn(), a22 = op.a22_fn();
  const ScalarFn a21 = op.a21_fn();
  auto root_det = [=](Point z) { return std::sqrt(a11(z) * a22(z) - a12(z) * a21(z)); };
  const ScalarFn inv_root = [root_det](Point z) { return 1.0 / root_det(z); };

  std::function<Vec2(Point)> grad_log_phi;
  if (phi) {
    for (double v : phi->values())
      if (!(v > 0.0)) throw ValidationError("normalize_determinant: non-positive φ");
    const ScalarField lp = map_field<double>(*phi, [](double v) { return std::log(v); });
    const ScalarField gx = diff_x(lp), gy = diff_y(lp);
    grad_log_phi = [gx, gy](Point z) {
      const Grid2D& g = gx.grid();
      const Point c{std::clamp(z.x, g.x(0), g.x(g.n() - 1)), std::clamp(z.y, g.y(0), g.y(g.n() - 1))};
      return Vec2{gx.at(c), gy.at(c)};
    };
  }
  const VectorFn w = op.w_fn();
  const VectorFn wbar = [=](Point z) {
    const Mat2 a{a11(z), a12(z), a21(z), a22(z)};
    Vec2 base = w ? w(z) : Vec2{};
    if (grad_log_phi) base = base - 2.0 * (a * grad_log_phi(z));
    const double r = root_det(z);
    const Vec2 corr = a * Vec2{ddx(inv_root, z), ddy(inv_root, z)};
    return Vec2{base.x / r + corr.x, base.y / r + corr.y};
  };
  auto scaled = [root_det](ScalarFn f) -> ScalarFn {
    return [f, root_det](Point z) { return f(z) / root_det(z); };
  };
  EllipticOperator out = op.without_lower_order();
  if (op.symmetric())
    out = out.with_A(scaled(a11), scaled(a12), scaled(a22));
  else
    out = out.with_general_A(scaled(a11), scaled(a12), scaled(a21), scaled(a22));
  return out.with_W(wbar);
}

}  // namespace

EllipticOperator normalize_determinant(const EllipticOperator& op, const Grid2D& grid) {
  return normalize_impl(op, grid, nullptr);
}

EllipticOperator normalize_determinant(const EllipticOperator& op, const ScalarField& phi) {
  return normalize_impl(op, phi.grid(), &phi);
}

FrozenFrame freeze_frame(const EllipticOperator& op, double R, const Grid2D& grid) {
  const double lambda = op.params().lambda;
  const Point anchor{R / std::sqrt(lambda), 0.0};
  if (!grid.contains(anchor)) throw ValidationError("freeze_frame: anchor outside grid");
  const Mat2 a0 = op.A(anchor);
  if (!(a0.det() > 0.0) || !(a0.a11 > 0.0) || a0.a12 != a0.a21)
    throw ValidationError("freeze_frame: A is not symmetric positive-definite at the anchor");
  const Mat2 q = sqrt_spd(a0);
  const Mat2 qi = q.inverse();
  auto to_orig = [q](Point z) { return q * z; };
  auto entry = [op, qi, to_orig](int r, int c) -> ScalarFn {
    return [op, qi, to_orig, r, c](Point z) {
      const Mat2 t = qi * op.A(to_orig(z)) * qi;
      const double v[2][2] = {{t.a11, t.a12}, {t.a21, t.a22}};
      return v[r][c];
    };
  };
  EllipticOperator out = op.without_lower_order();
  if (op.symmetric())
    out = out.with_A(entry(0, 0), entry(0, 1), entry(1, 1));
  else
    out = out.with_general_A(entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1));
  if (op.has_drift()) {
    const VectorFn w = op.w_fn();
    out = out.with_W([w, qi, to_orig](Point z) { return qi * w(to_orig(z)); });
  }
  if (op.has_potential()) {
    const ScalarFn v = op.v_fn();
    out = out.with_V([v, to_orig](Point z) { return v(to_orig(z)); });
  }
  StructureParams params = op.params();
  params.lambda = lambda * lambda;
  out = out.with_params(params);
  return {out, q, anchor, qi * anchor};
}

NonDivergenceForm to_nondivergence(const EllipticOperator& op) {
  const ScalarFn a11 = op.a11_fn(), a12 = op.a12_fn(), a21 = op.a21_fn(), a22 = op.a22_fn();
  VectorFn wn = [=](Point z) {
    return Vec2{ddx(a11, z) + ddy(a21, z), ddx(a12, z) + ddy(a22, z)};
  };
  return {op, wn};
}

ScalarField apply_nondivergence(const NonDivergenceForm& form, const ScalarField& u) {
  const Grid2D& g = u.grid();
  const int n = g.n();
  const double h = g.h();
  const EllipticOperator& op = form.op;
  std::vector<double> out(g.size(), 0.0);
  for (int j = 1; j < n - 1; ++j)
    for (int i = 1; i < n - 1; ++i) {
      const Point z = g.node(i, j);
      const double uxx = (u(i + 1, j) - 2 * u(i, j) + u(i - 1, j)) / (h * h);
      const double uyy = (u(i, j + 1) - 2 * u(i, j) + u(i, j - 1)) / (h * h);
      const double uxy =
          (u(i + 1, j + 1) - u(i + 1, j - 1) - u(i - 1, j + 1) + u(i - 1, j - 1)) / (4 * h * h);
      const double ux = (u(i + 1, j) - u(i - 1, j)) / (2 * h);
      const double uy = (u(i, j + 1) - u(i, j - 1)) / (2 * h);
      const Mat2 a = op.A(z);
      const Vec2 w = op.W(z);
      const Vec2 wn = form.wn(z);
      out[g.index(i, j)] = -(a.a11 * uxx + (a.a12 + a.a21) * uxy + a.a22 * uyy) +
                           (w.x - wn.x) * ux + (w.y - wn.y) * uy + op.V(z) * u(i, j);
    }
  return ScalarField(g, std::move(out));
}

}  // namespace ucp
