#pragma once

#include <memory>

#include "ucp/field.hpp"

namespace ucp {

/// Cauchy transform Tω(z) = −(1/π)∫ω(ζ)/(ζ − z) and Beurling transform
/// Sω(z) = −(1/π) p.v.∫ω(ζ)/(ζ − z)², evaluated by FFT on a 2× zero-padded copy of the grid.
/// Symbols −2i/ξ and ξ̄/ξ (ξ = ξ₁ + iξ₂, zero at ξ = 0); T also adds the analytic correction
/// for the periodic images, (z̄M₀ − M₁)/L² with M₀ = ∫ω, M₁ = ∫ω ζ̄, L the padded period.
/// ω must vanish outside the central quarter of a power-of-two grid.
class SpectralTransforms {
 public:
  explicit SpectralTransforms(const Grid2D& grid);
  ~SpectralTransforms();
  SpectralTransforms(const SpectralTransforms&) = delete;
  SpectralTransforms& operator=(const SpectralTransforms&) = delete;

  ComplexField cauchy(const ComplexField& omega) const;
  ComplexField beurling(const ComplexField& omega) const;
  const Grid2D& grid() const { return grid_; }

 private:
  struct Impl;
  Grid2D grid_;
  std::unique_ptr<Impl> impl_;
};

/// Throws ValidationError unless ω vanishes (to 1e−12 relative) outside the central quarter.
void require_central_support(const ComplexField& omega);

ComplexField cauchy_transform(const ComplexField& omega);
ComplexField beurling_transform(const ComplexField& omega);

}  // namespace ucp
