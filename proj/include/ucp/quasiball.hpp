#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ucp/field.hpp"
#include "ucp/greens.hpp"

namespace ucp {

/// Level curve Z_s = {Γ = −(1/2π) log s} and the quasi-ball Q_s it bounds.
struct QuasiGeometry {
  double s = 0.0;
  std::vector<Point> contour;  ///< closed, counter-clockwise, last vertex joins the first
  double sigma = 0.0;          ///< inner radius: distance from the pole to the contour
  double rho = 0.0;            ///< outer radius: farthest contour vertex from the pole
  double contour_tolerance = 0.0;  ///< max |Γ(vertex) + (1/2π) log s|
  Point pole;

  Polygon region() const { return {contour}; }
};

/// Marching-cells extraction on a sampled Γ (saddles resolved by the cell-centre average).
/// `evaluator` measures the contour tolerance; defaults to bilinear interpolation of `gamma`.
/// Throws ValidationError when the level is not bracketed, the contour touches the outer
/// cell ring, comes within 2h of the pole, splits into several components or fails to wind
/// once around the pole.
QuasiGeometry extract_level_curve(const ScalarField& gamma, Point pole, double s,
                                  const std::function<double(Point)>& evaluator = {});

QuasiGeometry quasi_circle(const GreensField& gf, double s);
/// Marching cells on Γ₀ sampled over `grid`.
QuasiGeometry quasi_circle(const ConstantGamma& g0, const Grid2D& grid, double s);
/// Exact level ellipse of Γ₀ as a polyline; σ and ρ are the closed-form semi-axes.
QuasiGeometry exact_quasi_circle(const ConstantGamma& g0, double s, int vertices = 4096);

/// True when every vertex of `inner` lies inside `outer`.
bool nested(const QuasiGeometry& inner, const QuasiGeometry& outer);

struct RadiiMargins {
  double rho_ratio = 0.0;        ///< ρ / (λ^{−1/2} s^{p/2π})
  double sigma_ratio = 0.0;      ///< σ / (λ^{1/2} s^{p/2π})
  double log_rho_excess = 0.0;   ///< log rho_ratio (≤ Cδ required)
  double log_sigma_excess = 0.0; ///< −log sigma_ratio (≤ Cδ required)
  bool pass = false;
};

RadiiMargins check_radii_bounds(const QuasiGeometry& geom, double lambda, double p, double delta,
                                double c, double tolerance = 0.0);

struct AnnulusExponents {
  double c_inner = 0.0;  ///< σ ≈ s^{c_inner}
  double c_outer = 0.0;  ///< ρ ≈ s^{c_outer}
};

AnnulusExponents annulus_bounds(std::span<const QuasiGeometry> family);

/// σ(s) and ρ(s) for some operator: identity (Laplacian), closed form (constant A) or
/// extracted from a numerically computed Γ.
struct RadiusModel {
  std::function<double(double)> sigma;
  std::function<double(double)> rho;
  std::string kind;

  static RadiusModel identity();
  static RadiusModel constant(const ConstantGamma& g0);
  static RadiusModel numeric(std::shared_ptr<const GreensField> gf);
};

}  // namespace ucp
