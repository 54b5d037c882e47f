#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "ucp/linalg2.hpp"

namespace ucp {

using cplx = std::complex<double>;

/// Uniform axis-aligned square grid with n nodes per side. Node (i, j) sits at
/// (cx - hw + i h, cy - hw + j h) and is stored at index j * n + i.
class Grid2D {
 public:
  Grid2D(Point center, double half_width, int n);

  Point center() const { return center_; }
  double half_width() const { return half_width_; }
  int n() const { return n_; }
  double h() const { return h_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

  double x(int i) const { return center_.x - half_width_ + i * h_; }
  double y(int j) const { return center_.y - half_width_ + j * h_; }
  Point node(int i, int j) const { return {x(i), y(j)}; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n_ + i; }

  /// Node nearest to p, or {-1, -1} when p is not within 1e-9 h of a node.
  std::pair<int, int> node_at(Point p) const;
  bool contains(Point p) const;
  bool is_power_of_two() const { return (n_ & (n_ - 1)) == 0; }

  bool operator==(const Grid2D& o) const {
    return center_.x == o.center_.x && center_.y == o.center_.y &&
           half_width_ == o.half_width_ && n_ == o.n_;
  }

 private:
  Point center_;
  double half_width_;
  int n_;
  double h_;
};

/// Validating factory: rejects n < 16 and non-positive half_width.
Grid2D make_grid(Point center, double half_width, int n);

/// Immutable sampled function with bilinear interpolation off-node.
template <typename T>
class Field {
 public:
  using value_type = T;

  Field(Grid2D grid, std::vector<T> values);

  static Field sample(const Grid2D& grid, const std::function<T(Point)>& f);

  const Grid2D& grid() const { return grid_; }
  std::span<const T> values() const { return values_; }
  const T& operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  const T& operator[](std::size_t k) const { return values_[k]; }

  /// Bilinear interpolation; throws ValidationError outside the grid square.
  T at(Point p) const;

 private:
  Grid2D grid_;
  std::vector<T> values_;
};

using ScalarField = Field<double>;
using ComplexField = Field<cplx>;

extern template class Field<double>;
extern template class Field<cplx>;

/// Node-wise map of a field.
template <typename R, typename T, typename F>
Field<R> map_field(const Field<T>& f, F&& fn) {
  std::vector<R> out(f.grid().size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = fn(f[k]);
  return Field<R>(f.grid(), std::move(out));
}

/// Node-wise combination of two fields on the same grid.
template <typename R, typename T, typename U, typename F>
Field<R> zip_fields(const Field<T>& a, const Field<U>& b, F&& fn);

ComplexField to_complex(const ScalarField& f);
ScalarField real_part(const ComplexField& f);
ScalarField abs_field(const ComplexField& f);

/// Centered differences inside, first-order one-sided on the outer ring.
ScalarField diff_x(const ScalarField& f);
ScalarField diff_y(const ScalarField& f);
ComplexField diff_x(const ComplexField& f);
ComplexField diff_y(const ComplexField& f);

struct WirtingerPair {
  ComplexField d;     ///< ½(∂x − i∂y) f
  ComplexField dbar;  ///< ½(∂x + i∂y) f
};

WirtingerPair wirtinger(const ComplexField& f);

struct Disk {
  Point center;
  double radius = 0.0;
};

/// Closed polygon given by its vertices (the last vertex connects back to the first).
struct Polygon {
  std::vector<Point> vertices;
};

using Region = std::variant<Disk, Polygon>;

bool region_contains(const Region& region, Point p);
/// Axis-aligned bounding box (xmin, ymin, xmax, ymax).
std::array<double, 4> region_bounds(const Region& region);
/// Points along the region boundary with spacing at most `spacing`.
std::vector<Point> boundary_samples(const Region& region, double spacing);

/// Throws ValidationError unless the region stays at least 2h inside the grid square.
void require_interior(const Grid2D& grid, const Region& region);

/// Indices of grid nodes inside the region.
std::vector<std::size_t> nodes_in_region(const Grid2D& grid, const Region& region);

/// Max |f| over nodes inside the region plus bilinear samples along its boundary.
double sup_norm_region(const ScalarField& f, const Region& region);
double sup_norm_region(const ComplexField& f, const Region& region);

/// Same rule applied to an exactly evaluable magnitude: nodes of `grid` inside the region plus
/// boundary samples at spacing h/2, all evaluated through `magnitude`.
double sup_norm_region(const std::function<double(Point)>& magnitude, const Grid2D& grid,
                       const Region& region);

/// Max of `magnitude` over a fine local grid covering the disk (resolution^2 interior nodes plus
/// 8*resolution boundary samples); used for norms on balls far below the working grid spacing.
double sup_norm_zoom(const std::function<double(Point)>& magnitude, const Disk& disk,
                     int resolution = 48);

/// Field that equals f inside the region and 0 outside.
ComplexField restrict_to(const ComplexField& f, const Region& region);

}  // namespace ucp

#include "ucp/field_impl.hpp"
