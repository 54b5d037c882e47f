#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ucp/field.hpp"
#include "ucp/operator.hpp"

namespace ucp {

/// Positive root of c(λc − 3) − 1 = 0.
double subsolution_rate(double lambda);

struct SubsolutionResult {
  double c = 0.0;
  double K = 0.0;
  double lambda = 0.0;
  ScalarField phi1;         ///< exp(cKx)
  double worst_ratio = 0.0;  ///< max over B_m of 𝓛φ₁ / tolerance(node) (≤ 1 passes)
  double max_value = 0.0;    ///< max over B_m of 𝓛φ₁
  Point worst_point;
  std::size_t nodes = 0;
  bool pass = false;
};

/// Builds φ₁ = exp(cKx) and checks 𝓛φ₁ ≤ 10h²(K² + cK‖A‖)φ₁ node-wise on B_m.
/// Throws ValidationError when ‖∇a‖ ≤ K, ‖V‖ ≤ K², ‖W‖ ≤ K fail on B_m and
/// CertificationError when the sign check fails.
SubsolutionResult subsolution(const EllipticOperator& op, const Grid2D& grid, double K,
                              double lambda, double m);

struct SupersolutionResult {
  ScalarField phi2;  ///< m² + 1 − |z|²
  double m = 0.0;
  double margin_gradient = 0.0;  ///< λ/(4m) − max |∇a_ij|
  double margin_v_minus = 0.0;   ///< λ/(m²+1) − max V₋
  double margin_drift = 0.0;     ///< λ/(2m) − max |W|
  double min_value = 0.0;        ///< min over B_m of 𝓛φ₂
  Point worst_point;
  bool pass = false;
};

/// Throws ValidationError naming the worst hypothesis margin when one is violated and
/// CertificationError when 𝓛φ₂ ≥ −tolerance fails.
SupersolutionResult supersolution(const EllipticOperator& op, const Grid2D& grid, double m);

struct PositiveSolutionResult {
  ScalarField phi;  ///< normalized so the interpolated value at the origin is 1
  double scale = 1.0;  ///< factor applied to the raw Dirichlet solution
  int iterations = 0;
  double solver_residual = 0.0;
  double min_value = 0.0;          ///< min over nodes of B_m after normalization
  double equation_residual = 0.0;  ///< max |𝓛φ| over nodes of B_{m−2h}
};

/// Solves 𝓛φ = 0 at nodes of the open disk B_m with φ = boundary at every other node
/// (default boundary: m² + 1 − |z|²), checks positivity and normalizes φ(0) = 1.
PositiveSolutionResult positive_solution(const EllipticOperator& op, const Grid2D& grid, double m,
                                         const std::function<double(Point)>& boundary = {});

/// sup over B_b of |∇ log φ| / K.
double log_gradient_bound(const ScalarField& phi, double b, double K);

struct PointwiseBounds {
  double min = 0.0;
  double max = 0.0;
  double c = 0.0;  ///< constant used: log-gradient ratio · b
  bool pass = false;
};

/// Checks exp(−cK) ≤ φ ≤ exp(cK) on B_b with c = log_gradient_bound · b.
PointwiseBounds pointwise_bounds(const ScalarField& phi, double b, double K,
                                 std::optional<double> tolerance = {});

struct MultiplierBundle {
  double K = 0.0;
  double lambda = 0.0;
  double m = 0.0;
  double b = 0.0;
  std::optional<SubsolutionResult> sub;
  std::string sub_error;
  std::optional<SupersolutionResult> super;
  std::string super_error;
  PositiveSolutionResult positive;
  double log_gradient_ratio = 0.0;
  PointwiseBounds bounds;
  double sandwich_lower = 0.0;  ///< C with φ₁ ≤ C·φ on B_m
  double sandwich_upper = 0.0;  ///< C′ with φ ≤ C′·φ₂ on B_m
};

/// Runs every multiplier stage; sub/supersolution failures are recorded, not thrown.
MultiplierBundle multiplier_bundle(const EllipticOperator& op, const Grid2D& grid, double K,
                                   double lambda, double m, double b,
                                   const std::function<double(Point)>& boundary = {});

}  // namespace ucp
