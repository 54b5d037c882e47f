#include "ucp/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ucp/error.hpp"
#include "ucp/parallel.hpp"

namespace ucp {

namespace {

bool finite_value(double v) { return std::isfinite(v); }
bool finite_value(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

double magnitude(double v) { return std::abs(v); }
double magnitude(const cplx& v) { return std::abs(v); }

}  // namespace

Grid2D::Grid2D(Point center, double half_width, int n)
    : center_(center), half_width_(half_width), n_(n), h_(0.0) {
  if (n < 16) throw ValidationError("grid: n must be at least 16, got " + std::to_string(n));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ValidationError("grid: half_width must be positive");
  h_ = 2.0 * half_width / (n - 1);
}

std::pair<int, int> Grid2D::node_at(Point p) const {
  const double fi = (p.x - (center_.x - half_width_)) / h_;
  const double fj = (p.y - (center_.y - half_width_)) / h_;
  const double ri = std::round(fi), rj = std::round(fj);
  if (std::abs(fi - ri) > 1e-9 || std::abs(fj - rj) > 1e-9) return {-1, -1};
  if (ri < 0 || rj < 0 || ri > n_ - 1 || rj > n_ - 1) return {-1, -1};
  return {static_cast<int>(ri), static_cast<int>(rj)};
}

bool Grid2D::contains(Point p) const {
  const double tol = 1e-12 * half_width_;
  return std::abs(p.x - center_.x) <= half_width_ + tol &&
         std::abs(p.y - center_.y) <= half_width_ + tol;
}

Grid2D make_grid(Point center, double half_width, int n) { return Grid2D(center, half_width, n); }

template <typename T>
Field<T>::Field(Grid2D grid, std::vector<T> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ValidationError("field: value count does not match grid");
  for (const T& v : values_)
    if (!finite_value(v)) throw ValidationError("field: non-finite value");
}

template <typename T>
Field<T> Field<T>::sample(const Grid2D& grid, const std::function<T(Point)>& f) {
  std::vector<T> values(grid.size());
  const int n = grid.n();
  parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const int i = static_cast<int>(k % n), j = static_cast<int>(k / n);
      values[k] = f(grid.node(i, j));
    }
  });
  return Field(grid, std::move(values));
}

template <typename T>
T Field<T>::at(Point p) const {
  if (!grid_.contains(p)) throw ValidationError("field: evaluation point outside grid");
  const int n = grid_.n();
  const double h = grid_.h();
  const double fx = (p.x - grid_.x(0)) / h;
  const double fy = (p.y - grid_.y(0)) / h;
  const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, n - 2);
  const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, n - 2);
  const double tx = std::clamp(fx - i, 0.0, 1.0);
  const double ty = std::clamp(fy - j, 0.0, 1.0);
  return (1 - tx) * (1 - ty) * (*this)(i, j) + tx * (1 - ty) * (*this)(i + 1, j) +
         (1 - tx) * ty * (*this)(i, j + 1) + tx * ty * (*this)(i + 1, j + 1);
}

template class Field<double>;
template class Field<cplx>;

ComplexField to_complex(const ScalarField& f) {
  return map_field<cplx>(f, [](double v) { return cplx(v, 0.0); });
}

ScalarField real_part(const ComplexField& f) {
  return map_field<double>(f, [](const cplx& v) { return v.real(); });
}

ScalarField abs_field(const ComplexField& f) {
  return map_field<double>(f, [](const cplx& v) { return std::abs(v); });
}

namespace {

template <typename T>
Field<T> diff_along(const Field<T>& f, bool along_x) {
  const Grid2D& g = f.grid();
  const int n = g.n();
  const double h = g.h();
  std::vector<T> out(g.size());
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const int i = static_cast<int>(k % n), j = static_cast<int>(k / n);
      const int c = along_x ? i : j;
      auto val = [&](int t) { return along_x ? f(t, j) : f(i, t); };
      if (c == 0)
        out[k] = (val(1) - val(0)) / h;
      else if (c == n - 1)
        out[k] = (val(n - 1) - val(n - 2)) / h;
      else
        out[k] = (val(c + 1) - val(c - 1)) / (2.0 * h);
    }
  });
  return Field<T>(g, std::move(out));
}

}  // namespace

ScalarField diff_x(const ScalarField& f) { return diff_along(f, true); }
ScalarField diff_y(const ScalarField& f) { return diff_along(f, false); }
ComplexField diff_x(const ComplexField& f) { return diff_along(f, true); }
ComplexField diff_y(const ComplexField& f) { return diff_along(f, false); }

WirtingerPair wirtinger(const ComplexField& f) {
  const ComplexField fx = diff_x(f);
  const ComplexField fy = diff_y(f);
  const cplx i(0.0, 1.0);
  return {zip_fields<cplx>(fx, fy, [&](cplx a, cplx b) { return 0.5 * (a - i * b); }),
          zip_fields<cplx>(fx, fy, [&](cplx a, cplx b) { return 0.5 * (a + i * b); })};
}

bool region_contains(const Region& region, Point p) {
  if (const auto* d = std::get_if<Disk>(&region)) return norm(p - d->center) <= d->radius;
  const auto& v = std::get<Polygon>(region).vertices;
  bool inside = false;
  for (std::size_t a = 0, b = v.size() - 1; a < v.size(); b = a++) {
    if ((v[a].y > p.y) != (v[b].y > p.y)) {
      const double xc = v[b].x + (p.y - v[b].y) * (v[a].x - v[b].x) / (v[a].y - v[b].y);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside;
}

std::array<double, 4> region_bounds(const Region& region) {
  if (const auto* d = std::get_if<Disk>(&region))
    return {d->center.x - d->radius, d->center.y - d->radius, d->center.x + d->radius,
            d->center.y + d->radius};
  const auto& v = std::get<Polygon>(region).vertices;
  if (v.size() < 3) throw ValidationError("polygon region needs at least 3 vertices");
  std::array<double, 4> b{v[0].x, v[0].y, v[0].x, v[0].y};
  for (const Point& p : v) {
    b[0] = std::min(b[0], p.x);
    b[1] = std::min(b[1], p.y);
    b[2] = std::max(b[2], p.x);
    b[3] = std::max(b[3], p.y);
  }
  return b;
}

std::vector<Point> boundary_samples(const Region& region, double spacing) {
  std::vector<Point> out;
  if (const auto* d = std::get_if<Disk>(&region)) {
    const int count =
        std::max(64, static_cast<int>(std::ceil(2.0 * std::numbers::pi * d->radius / spacing)));
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * std::numbers::pi * k / count;
      out.push_back({d->center.x + d->radius * std::cos(t), d->center.y + d->radius * std::sin(t)});
    }
    return out;
  }
  const auto& v = std::get<Polygon>(region).vertices;
  for (std::size_t a = 0; a < v.size(); ++a) {
    const Point p = v[a], q = v[(a + 1) % v.size()];
    const int steps = std::max(1, static_cast<int>(std::ceil(norm(q - p) / spacing)));
    for (int s = 0; s < steps; ++s) out.push_back(p + (static_cast<double>(s) / steps) * (q - p));
  }
  return out;
}

void require_interior(const Grid2D& grid, const Region& region) {
  const auto b = region_bounds(region);
  const double lo_x = grid.x(0) + 2 * grid.h(), hi_x = grid.x(grid.n() - 1) - 2 * grid.h();
  const double lo_y = grid.y(0) + 2 * grid.h(), hi_y = grid.y(grid.n() - 1) - 2 * grid.h();
  const double tol = 1e-12 * grid.half_width();
  if (b[0] < lo_x - tol || b[1] < lo_y - tol || b[2] > hi_x + tol || b[3] > hi_y + tol)
    throw ValidationError("region comes within 2h of the grid boundary");
}

std::vector<std::size_t> nodes_in_region(const Grid2D& grid, const Region& region) {
  const auto b = region_bounds(region);
  const double h = grid.h();
  const int n = grid.n();
  const int i0 = std::max(0, static_cast<int>(std::floor((b[0] - grid.x(0)) / h)));
  const int i1 = std::min(n - 1, static_cast<int>(std::ceil((b[2] - grid.x(0)) / h)));
  const int j0 = std::max(0, static_cast<int>(std::floor((b[1] - grid.y(0)) / h)));
  const int j1 = std::min(n - 1, static_cast<int>(std::ceil((b[3] - grid.y(0)) / h)));
  std::vector<std::size_t> out;
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      if (region_contains(region, grid.node(i, j))) out.push_back(grid.index(i, j));
  return out;
}

namespace {

template <typename T>
double sup_norm_field(const Field<T>& f, const Region& region) {
  const Grid2D& g = f.grid();
  require_interior(g, region);
  const auto nodes = nodes_in_region(g, region);
  const auto edge = boundary_samples(region, 0.5 * g.h());
  if (nodes.empty() && edge.empty()) throw ValidationError("region does not intersect the grid");
  double m = 0.0;
  for (std::size_t k : nodes) m = std::max(m, magnitude(f[k]));
  for (const Point& p : edge) m = std::max(m, magnitude(f.at(p)));
  return m;
}

}  // namespace

double sup_norm_region(const ScalarField& f, const Region& region) {
  return sup_norm_field(f, region);
}

double sup_norm_region(const ComplexField& f, const Region& region) {
  return sup_norm_field(f, region);
}

double sup_norm_region(const std::function<double(Point)>& magnitude_fn, const Grid2D& grid,
                       const Region& region) {
  require_interior(grid, region);
  double m = 0.0;
  bool any = false;
  for (std::size_t k : nodes_in_region(grid, region)) {
    const int i = static_cast<int>(k % grid.n()), j = static_cast<int>(k / grid.n());
    m = std::max(m, magnitude_fn(grid.node(i, j)));
    any = true;
  }
  for (const Point& p : boundary_samples(region, 0.5 * grid.h())) {
    m = std::max(m, magnitude_fn(p));
    any = true;
  }
  if (!any) throw ValidationError("region does not intersect the grid");
  return m;
}

double sup_norm_zoom(const std::function<double(Point)>& magnitude_fn, const Disk& disk,
                     int resolution) {
  if (!(disk.radius > 0.0)) throw ValidationError("sup_norm_zoom: radius must be positive");
  double m = 0.0;
  const double step = disk.radius / resolution;
  for (int j = -resolution; j <= resolution; ++j)
    for (int i = -resolution; i <= resolution; ++i) {
      if (i * i + j * j > resolution * resolution) continue;
      m = std::max(m, magnitude_fn({disk.center.x + i * step, disk.center.y + j * step}));
    }
  const int count = 8 * resolution;
  for (int k = 0; k < count; ++k) {
    const double t = 2.0 * std::numbers::pi * k / count;
    m = std::max(m, magnitude_fn({disk.center.x + disk.radius * std::cos(t),
                                  disk.center.y + disk.radius * std::sin(t)}));
  }
  return m;
}

ComplexField restrict_to(const ComplexField& f, const Region& region) {
  std::vector<cplx> out(f.grid().size(), cplx(0.0, 0.0));
  for (std::size_t k : nodes_in_region(f.grid(), region)) out[k] = f[k];
  return ComplexField(f.grid(), std::move(out));
}

}  // namespace ucp
