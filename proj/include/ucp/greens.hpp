#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ucp/field.hpp"
#include "ucp/operator.hpp"

namespace ucp {

/// Arc length of the ellipse with semi-axes √d1, √d2 (adaptive Gauss–Kronrod, rel. err ≤ 1e−10).
double ellipse_perimeter(double d1, double d2);

/// Γ₀(z) = −(1/2p) log(zᵀA₀⁻¹z) for a constant symmetric positive-definite A₀, with p the
/// perimeter of the ellipse with semi-axes √d₁, √d₂. Pole at `pole`.
class ConstantGamma {
 public:
  explicit ConstantGamma(const Mat2& a0, Point pole = {});

  double d1() const { return eig_.d1; }
  double d2() const { return eig_.d2; }
  double rotation() const { return eig_.angle; }
  double perimeter() const { return p_; }
  const Mat2& matrix() const { return a0_; }
  Point pole() const { return pole_; }

  double operator()(Point z) const;
  Vec2 gradient(Point z) const;

  /// Γ₀ level −(1/2π) log s.
  static double level(double s);
  /// The level set Γ₀ = level(s) is the ellipse with semi-axes √d·s^{p/2π}.
  double outer_radius(double s) const;
  double inner_radius(double s) const;
  /// Inverse of outer_radius.
  double s_for_outer_radius(double r) const;
  /// Exact level ellipse sampled at `vertices` points.
  std::vector<Point> level_ellipse(double s, int vertices) const;

 private:
  Mat2 a0_;
  Mat2 inv_;
  SymEigen eig_;
  double p_;
  Point pole_;
};

/// Numerically computed fundamental solution Γ = Γ₀^{A(pole)} + remainder, where the remainder
/// solves −div(A∇rem) = div[(A − A(pole))∇Γ₀] with zero data on the grid square.
struct GreensField {
  ScalarField gamma;      ///< Γ at nodes; the pole node carries Γ₀ at distance h/2 as a placeholder
  ScalarField remainder;  ///< bounded correction field
  ConstantGamma frozen;   ///< Γ₀ of the frozen matrix A(pole)
  EllipticOperator principal;
  int iterations = 0;
  double solver_residual = 0.0;
  double boundary_offset = 0.0;    ///< mean remainder on the circle of radius half_width/2
  double equation_residual = 0.0;  ///< max |𝓛Γ| on the annulus max(3h, hw/4) ≤ |z − pole| ≤ hw/2
  std::string boundary_description;

  Point pole() const { return frozen.pole(); }
  /// Γ₀(z) + bilinear remainder; accurate off-node, including near the pole.
  double operator()(Point z) const;
};

/// Pre: op symmetric, pole a node at least 8h inside the grid. Only the principal part is used.
GreensField variable_gamma(const EllipticOperator& op, Point pole, const Grid2D& grid);

struct PerturbationStudy {
  std::vector<double> deltas;
  std::vector<double> sup_diffs;  ///< max over B_radius(pole) of |Γ − Γ₀|
  double slope = 0.0;             ///< least-squares log-log slope over δ > 0
  double radius = 1.0;
};

PerturbationStudy check_fs_perturbation(const std::function<EllipticOperator(double)>& family,
                                        std::span<const double> deltas, const Grid2D& grid,
                                        double radius = 1.0, Point pole = {});

/// Fits C₁ ≤ Γ(z)/log(1/|z|) ≤ C₂ over nodes with 3h ≤ |z − pole| ≤ R1 (R1 < 1).
struct LogBracket {
  double c_lower = 0.0;
  double c_upper = 0.0;
  bool pass = false;
};

LogBracket fit_log_bracket(const GreensField& gf, double r1);

/// Least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace ucp
