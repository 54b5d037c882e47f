#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ucp/beltrami.hpp"
#include "ucp/field.hpp"
#include "ucp/operator.hpp"
#include "ucp/quasiball.hpp"

namespace ucp {

/// Log-spaced values a = r₀ < … < r_{n−1} = b.
std::vector<double> log_space(double a, double b, int n);

struct VanishingConfig {
  double K = 1.0;
  double F = 0.25;  ///< F(K) ∈ (0, 1)
  std::optional<double> C1;  ///< ‖u‖_{B_m} ≤ exp(C₁K); fitted when unset
  std::optional<double> c1;  ///< ‖u‖_{B_d} ≥ exp(−c₁K^p); fitted when unset
  double p = 1.0;
  double lambda = 1.0;
  std::vector<double> r_grid = log_space(1e-3, 1e-1, 21);
  int n = 256;                     ///< working grid nodes per side (power of two)
  double residual_tolerance = 1e-2;  ///< max|𝓛u| relative to sup|u|·max(1, K²) on B_m
  double d = 0, b = 0, m = 0;      ///< σ(1 − F), ρ(1 + F), b + F; filled from the geometry

  double q() const { return p > 1.0 ? p : 1.0; }
};

/// Fills d, b, m from a radius model.
VanishingConfig with_radii(VanishingConfig config, const RadiusModel& radius);

struct VanishingOrder {
  double order = 0.0;
  double r_lo = 0.0, r_hi = 0.0;  ///< fitting window
  double residual = 0.0;          ///< RMS residual of the log-log fit in the window
  std::vector<double> r, norms;
};

/// Slope of log‖u‖_{B_r} vs log r over the one-decade window with the smallest fit residual
/// (the whole grid when it spans less than a decade). Throws ValidationError when a norm is at
/// or below `noise_floor`.
VanishingOrder fit_vanishing_order(std::span<const double> r, std::span<const double> norms,
                                   double noise_floor = 1e-300);
/// Norms from an exactly evaluable magnitude on zoom grids around `center`.
VanishingOrder measure_vanishing_order(const std::function<double(Point)>& magnitude,
                                       std::span<const double> r_grid, Point center = {},
                                       double noise_floor = 1e-300);
/// Norms of a sampled field over the nodes (and bilinear boundary samples) of each B_r.
VanishingOrder measure_vanishing_order(const ComplexField& f, std::span<const double> r_grid,
                                       Point center = {}, double noise_floor = 1e-300);

/// Fields shared by the similarity and three-circle stages.
struct BeltramiStage {
  Grid2D grid;
  ScalarField v;    ///< u/φ
  ScalarField phi;
  EllipticOperator normalized;  ///< Ā, W̄
  CoefficientTables tables;
  ComplexField eta;      ///< η of Ā, zero outside B_{b+δ}, δ = min(4h, (m − b)/2)
  ComplexField w;        ///< D̃v
  ComplexField coefficient;  ///< (Υ − W̃), zero outside B_{b+δ}
  double k = 0.0;
  double quotient_residual = 0.0;  ///< max |𝓛̄v| on B_{m−2h} relative to sup|∇v|
  double c_w = 0.0, C_w = 0.0;     ///< c|∇v| ≤ |D̃v| ≤ C|∇v| on B_b
  bool degenerate = false;         ///< w ≡ 0 (u proportional to φ)
  GeometrySource geometry;
  std::shared_ptr<const ConstantGamma> frozen;  ///< Γ₀ of Ā(0)
  RadiusModel radius;
  VanishingConfig config;
};

/// v = u/φ, normalize_determinant, w = D̃v, Υ and W̃ on a working grid of half-width 2m.
/// Throws ValidationError on bad input and CertificationError("vanishing.<stage>") when a
/// stage cannot be certified.
BeltramiStage prepare_beltrami_stage(const EllipticOperator& op, const ScalarFn& u,
                                     const ScalarFn& phi, VanishingConfig config);

struct VanishingRow {
  double r = 0, s = 0, theta = 0;
  double u_norm = 0;           ///< ‖u‖_{B_r}
  double grad_v_half = 0;      ///< ‖∇v‖_{B_{r/2}}
  double three_ball_rhs = 0;   ///< E (‖u‖_{B_r}/r)^θ
  double predicted = 0;        ///< r (L/E)^{1/θ}
  double bound = 0;            ///< r^{Ĉ K^q/F}
};

struct VanishingReport {
  VanishingConfig config;
  std::vector<VanishingRow> rows;
  VanishingOrder order;
  bool degenerate = false;
  std::string geometry_kind;
  // stage norms
  double quotient_residual = 0, equation_residual = 0;
  int similarity_iterations = 0;
  double similarity_residual = 0, df_residual = 0, k = 0;
  ThreeCircleResult three_circle;
  double c_w = 0, C_w = 0;
  double g_max = 0, g_min = 0;  ///< max |g| on Q₁, min |g| on B_b
  double grad_v_q1 = 0, grad_v_b = 0, C_int = 0;
  double log_E = 0;
  // two-point lower bound
  double c_phi = 0, c1 = 0, C1 = 0;
  double u_norm_d = 0, u_norm_m = 0;
  std::string lower_bound_case;  ///< "two-point" or "u ≥ a on B_d"
  Point z0, z1;
  double difference = 0;    ///< |v(z₀) − v(z₁)|
  double required_difference = 0;  ///< ½ exp(−cK − c₁K^p)
  double L_low = 0;
  double c_hat = 0;
  double theta_slope = 0, theta_r2 = 0;  ///< −1/θ regressed on log r
  bool monotone = true;
  bool theta_in_range = true;
  bool bound_pass = false;
  bool pass = false;
};

VanishingReport vanishing_pipeline(const EllipticOperator& op, const ScalarFn& u,
                                   const ScalarFn& phi, VanishingConfig config);

struct BoundCheck {
  double worst_log_margin = 0.0;  ///< min over r of log‖u‖_{B_r} − log bound
  double r2 = 0.0;
  double slope = 0.0;
  bool bound_pass = false;
  bool regression_pass = false;
  bool pass = false;
};

/// Pass iff ‖u‖_{B_r} ≥ r^{Ĉ K^q/F} on every row and −1/θ vs log r is linear with R² ≥ 0.99.
/// A degenerate report passes trivially.
BoundCheck verify_oofv_bound(const VanishingReport& report, const VanishingConfig& config);

struct StreamFunction {
  ScalarField vtilde;
  ScalarField vtilde_alt;  ///< second integration path (y first)
  ComplexField f;          ///< φ²v + iṽ
  ComplexField alpha;      ///< ∂̄f/f where |f| > 1e−8 sup|f|, else 0
  double path_residual = 0.0;  ///< max |ṽ − ṽ_alt| / max(sup|ṽ|, tiny)
  double curl_residual = 0.0;  ///< max |∇ṽ − (−φ²∂_y v, φ²∂_x v)| / sup|φ²∇v| off the outer ring
  double divergence_residual = 0.0;  ///< max |div(φ²∇v)| h / sup|φ²∇v| off the outer ring
};

/// Conjugate ṽ with ∇ṽ = (−φ²∂_y v, φ²∂_x v) by trapezoid integration from the node nearest the
/// grid centre (x first, then y). Throws ValidationError when the divergence residual exceeds
/// `divergence_tolerance`.
StreamFunction stream_function(const ScalarField& phi, const ScalarField& v,
                               double divergence_tolerance = 1e-2);

struct OrderCrossCheck {
  double stream_order = 0.0;
  double beltrami_order = 0.0;
  bool pass = false;  ///< stream order = Beltrami order + 1 within `tolerance`
};

OrderCrossCheck cross_check_orders(const ComplexField& stream_f, const ComplexField& beltrami_f,
                                   std::span<const double> r_grid, double tolerance = 0.15);

}  // namespace ucp
