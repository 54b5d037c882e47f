#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "ucp/field.hpp"
#include "ucp/greens.hpp"
#include "ucp/operator.hpp"
#include "ucp/quasiball.hpp"

namespace ucp {

/// Node tables of a symmetric coefficient matrix.
struct CoefficientTables {
  ScalarField a11, a12, a22;

  static CoefficientTables sample(const EllipticOperator& op, const Grid2D& grid);
  const Grid2D& grid() const { return a11.grid(); }
};

/// η = (a11 − a22)/det(A+I) + i·2a12/det(A+I). Requires det A = 1 (to 1e−8) and checks
/// |η|² = (tr A − 2)/(tr A + 2) and sup|η| ≤ √((1−λ)/(1+λ)); throws ValidationError otherwise.
ComplexField beltrami_coefficient(const CoefficientTables& a, double lambda);

double k_bound(double lambda);

/// Df = ∂̄f + η∂f.
ComplexField d_operator(const ComplexField& f, const ComplexField& eta);

/// D̃v = (1 + a11 − i a12)∂x v + (a12 − i(1 + a22))∂y v.
ComplexField dtilde_operator(const ScalarField& v, const CoefficientTables& a);

/// W̃ = [(α∂x a11 − β∂x a12 + γ∂y a11 + δ∂y a12) + i(γ∂x a11 + δ∂x a12 − α∂y a11 + β∂y a12)]
///     / (a11 det(A+I)²), α = a11 + a22 + 2a11a22, β = 2a12(1 + a11), γ = a12(a22 − a11),
///     δ = (1 + a11)² − a12², with finite-difference coefficient derivatives.
ComplexField wtilde(const CoefficientTables& a);

/// Υ = (W̄·∇v)/(D̃v) where |D̃v| > τ = 1e−8‖∇v‖∞, else 0. W̄ = w1 + i w2 node-wise.
ComplexField upsilon(const ComplexField& wbar, const ScalarField& v, const CoefficientTables& a);

struct BeltramiData {
  ComplexField eta;
  double k_bound = 0.0;
  ComplexField P, Q;
  ComplexField wtilde;
  ComplexField upsilon;
};

BeltramiData beltrami_data(const CoefficientTables& a, double lambda, const ComplexField& wbar,
                           const ScalarField& v);

struct SimilarityFactors {
  ComplexField omega;
  ComplexField g;  ///< e^{Tω}
  ComplexField f;  ///< w/g
  int iterations = 0;
  double fixed_point_residual = 0.0;  ///< ‖ω + ηSω − A‖₂/‖A‖₂
  double df_residual = 0.0;           ///< sup|Df| / sup|∂f| on the analysis region
  double k = 0.0;                     ///< sup|η|
  double log_g_max = 0.0;             ///< max |log|g|| on the analysis region
  double a_norm_t = 0.0;              ///< ‖A‖_{L⁴}
  double a_norm_inf = 0.0;
  double omega_norm_t = 0.0;          ///< ‖ω‖_{L⁴}
  double holder_constant = 0.0;       ///< C_T with |Tω| ≤ C_T‖ω‖_{L⁴}
  double achieved_c = 0.0;            ///< log_g_max / ‖A‖_{L⁴}
  bool bracket_pass = false;
};

/// Solves ω + ηSω = A by ω ← A − ηSω from ω₀ = A until the relative L² update is ≤ 1e−10,
/// then g = e^{Tω}, f = w/g. η and A must vanish outside the central quarter.
/// Throws CertificationError on divergence.
SimilarityFactors similarity_decompose(const ComplexField& w, const ComplexField& eta,
                                       const ComplexField& a_coef, const Region& analysis_region,
                                       int max_iterations = 1000);

/// Quasi-balls Q_s for the norms of the three-circle inequality.
struct GeometrySource {
  std::function<QuasiGeometry(double)> quasi;
  std::string kind;

  static GeometrySource analytic(const ConstantGamma& g0, int vertices = 4096);
  static GeometrySource numeric(std::shared_ptr<const GreensField> gf);
};

struct ThreeCircleResult {
  double s1 = 0, s2 = 0, s3 = 0;
  double norm1 = 0, norm2 = 0, norm3 = 0;
  double theta = 0;
  double lhs = 0, rhs = 0;
  double df_residual = 0;  ///< sup|Df|/sup|∂f| on Q_{s3} (field form only)
  bool pass = false;
};

/// θ = log(s3/s2)/log(s3/s1); pass iff ‖f‖_{Q_{s2}} ≤ ‖f‖^θ_{Q_{s1}}‖f‖^{1−θ}_{Q_{s3}}(1 + tol).
/// Field form: throws CertificationError when sup|Df|/sup|∂f| on Q_{s3} exceeds
/// `holomorphy_tolerance`.
ThreeCircleResult three_circle_check(const ComplexField& f, const ComplexField& eta,
                                     const GeometrySource& geometry, double s1, double s2,
                                     double s3, double tolerance = 0.02,
                                     double holomorphy_tolerance = 0.05);
/// Closure form: norms over `grid` nodes inside each quasi-ball plus the polyline itself.
ThreeCircleResult three_circle_check(const std::function<cplx(Point)>& f, const Grid2D& grid,
                                     const GeometrySource& geometry, double s1, double s2,
                                     double s3, double tolerance = 1e-6);

/// Discrete L^t norm (∫|f|^t)^{1/t} over the whole grid.
double lt_norm(const ComplexField& f, double t);

}  // namespace ucp
