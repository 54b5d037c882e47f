#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ucp/field.hpp"
#include "ucp/linalg2.hpp"

namespace ucp {

using ScalarFn = std::function<double(Point)>;
using VectorFn = std::function<Vec2(Point)>;

/// Which bound the potential is held to: V₊ ≤ 1 (positive part bounded, decaying negative part)
/// or ‖V‖∞ ≤ μ₁² (bounded potential).
enum class PotentialClass { PositivePartBounded, Bounded };

/// Declared structural parameters. Unset optional parameters switch the corresponding
/// condition off in verify_structure.
struct StructureParams {
  double lambda = 1.0;
  std::optional<double> mu0, eps0;  ///< |∇a_ij| ≤ μ₀⟨z⟩^{−(1+ε₀)}
  std::optional<double> mu1, eps1;  ///< V₋ ≤ μ₁²⟨z⟩^{−2(1+ε₁)} (and |V| ≤ μ₁² for Bounded)
  std::optional<double> mu2, eps2;  ///< |W| ≤ μ₂⟨z⟩^{−(1+ε₂)}
  PotentialClass potential_class = PotentialClass::PositivePartBounded;
};

/// 𝓛u = −div(A∇u) + W·∇u + Vu with coefficients given as samplable closures.
/// A is symmetric unless a separate a21 closure was supplied (symmetrize removes it).
class EllipticOperator {
 public:
  /// The Laplacian −Δ with λ = 1.
  EllipticOperator();

  static EllipticOperator laplacian() { return {}; }
  static EllipticOperator constant(const Mat2& a, StructureParams params = {});
  /// Operator whose coefficients are bilinear interpolants of tables on a common grid.
  /// `w` holds W₁ + iW₂. Points outside the table grid are clamped onto it.
  static EllipticOperator from_tables(const ScalarField& a11, const ScalarField& a12,
                                      const ScalarField& a22, const ComplexField* w,
                                      const ScalarField* v, StructureParams params);

  EllipticOperator with_A(ScalarFn a11, ScalarFn a12, ScalarFn a22) const;
  /// General, possibly non-symmetric A.
  EllipticOperator with_general_A(ScalarFn a11, ScalarFn a12, ScalarFn a21, ScalarFn a22) const;
  EllipticOperator with_W(VectorFn w) const;
  EllipticOperator with_V(ScalarFn v) const;
  EllipticOperator with_params(StructureParams params) const;
  EllipticOperator without_lower_order() const;

  Mat2 A(Point z) const;
  Vec2 W(Point z) const { return w_ ? w_(z) : Vec2{}; }
  double V(Point z) const { return v_ ? v_(z) : 0.0; }
  double a11(Point z) const { return a11_(z); }
  double a12(Point z) const { return a12_(z); }
  double a21(Point z) const { return a21_ ? a21_(z) : a12_(z); }
  double a22(Point z) const { return a22_(z); }

  /// Centered-difference partial derivatives of the entries of A (step 1e-5).
  Mat2 dA_dx(Point z) const;
  Mat2 dA_dy(Point z) const;

  bool symmetric() const { return !a21_; }
  bool has_drift() const { return static_cast<bool>(w_); }
  bool has_potential() const { return static_cast<bool>(v_); }
  const StructureParams& params() const { return params_; }
  /// Grid the coefficients were tabulated on, if any.
  const std::optional<Grid2D>& domain() const { return domain_; }

  ScalarFn a11_fn() const { return a11_; }
  ScalarFn a12_fn() const { return a12_; }
  ScalarFn a21_fn() const { return a21_ ? a21_ : a12_; }
  ScalarFn a22_fn() const { return a22_; }
  VectorFn w_fn() const { return w_; }
  ScalarFn v_fn() const { return v_; }

 private:
  ScalarFn a11_, a12_, a21_, a22_;
  VectorFn w_;
  ScalarFn v_;
  StructureParams params_;
  std::optional<Grid2D> domain_;
};

/// Nine-point discretization of 𝓛 on a grid: flux differences at edge midpoints for a11, a22,
/// the bilinear weak form with cell-centred gradients for a12, a21, centered drift, pointwise V.
/// Symmetric whenever A is symmetric and W = 0. Only interior nodes carry a stencil.
class StencilOperator {
 public:
  StencilOperator(const EllipticOperator& op, const Grid2D& grid);

  const Grid2D& grid() const { return grid_; }
  /// Weights w[(dj+1)*3 + (di+1)] acting on u(i+di, j+dj); interior nodes only.
  const std::array<double, 9>& weights(int i, int j) const {
    return weights_[static_cast<std::size_t>(j - 1) * (grid_.n() - 2) + (i - 1)];
  }
  bool symmetric_matrix() const { return symmetric_; }

  /// 𝓛u at interior nodes; the outer ring is set to 0.
  ScalarField apply(const ScalarField& u) const;

 private:
  Grid2D grid_;
  std::vector<std::array<double, 9>> weights_;
  bool symmetric_;
};

/// Node-wise 𝓛u (outer ring 0). Throws ValidationError when a tabulated operator's grid
/// differs from u's grid.
ScalarField apply_operator(const EllipticOperator& op, const ScalarField& u);

/// Discrete −div(B∇g) with the exact gradient of g inserted at the stencil's flux points
/// (edge midpoints and cell centres); interior nodes only.
ScalarField flux_divergence(const EllipticOperator& b, const VectorFn& grad_g, const Grid2D& grid);

struct ConditionReport {
  std::string name;
  bool checked = false;
  double margin = 0.0;  ///< worst (smallest) envelope − value over the region
  Point worst_point;
  std::size_t failing_nodes = 0;
  std::size_t nodes = 0;
  bool pass = true;
};

struct StructureReport {
  std::vector<ConditionReport> conditions;
  bool pass = true;

  const ConditionReport& condition(const std::string& name) const;
};

/// Samples every structural condition at the grid nodes inside `region`. Per-node tolerance is
/// `tolerance` when given, else 1e−8 + 10h²·(local coefficient scale).
StructureReport verify_structure(const EllipticOperator& op, const Grid2D& grid,
                                 const Region& region, std::optional<double> tolerance = {});

/// Symmetric part Â = (A + Aᵀ)/2 and drift Ŵ = W + (∂_y ǎ, −∂_x ǎ), ǎ = (a12 − a21)/2.
EllipticOperator symmetrize(const EllipticOperator& op);

/// Ā = A/√det A, W̄ = (W − 2A∇log φ)/√det A + A∇(1/√det A), V dropped. The determinant is
/// checked on the nodes of `grid`.
EllipticOperator normalize_determinant(const EllipticOperator& op, const Grid2D& grid);
EllipticOperator normalize_determinant(const EllipticOperator& op, const ScalarField& phi);

struct FrozenFrame {
  EllipticOperator op;  ///< Ã(z) = Q⁻¹A(Qz)Q⁻¹, W̃(z) = Q⁻¹W(Qz), Ṽ(z) = V(Qz)
  Mat2 Q;               ///< Q² = A(λ^{−1/2} R e₁)
  Point anchor;         ///< λ^{−1/2} R e₁ in original coordinates
  Point frozen_point;   ///< Q⁻¹·anchor, where Ã = I
};

FrozenFrame freeze_frame(const EllipticOperator& op, double R, const Grid2D& grid);

/// −Σ a_ij ∂_ji u + (W − W_n)·∇u + Vu with W_n = (∂_x a11 + ∂_y a21, ∂_x a12 + ∂_y a22).
struct NonDivergenceForm {
  EllipticOperator op;
  VectorFn wn;
};

NonDivergenceForm to_nondivergence(const EllipticOperator& op);

/// Applies the non-divergence form with centered second differences (outer ring 0).
ScalarField apply_nondivergence(const NonDivergenceForm& form, const ScalarField& u);

}  // namespace ucp
