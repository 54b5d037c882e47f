#include "ucp/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "ucp/error.hpp"

namespace ucp {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct SpectralTransforms::Impl {
  int n = 0;
  int big = 0;
  double h = 0.0;
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  mutable std::mutex run_mutex;

  Impl(int n_, double h_) : n(n_), big(2 * n_), h(h_) {
    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(static_cast<std::size_t>(big) * big);
    forward = fftw_plan_dft_2d(big, big, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_2d(big, big, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(buffer);
  }

  double wavenumber(int idx) const {
    const int f = idx < big / 2 ? idx : idx - big;
    return 2.0 * std::numbers::pi * f / (big * h);
  }

  template <typename Symbol>
  std::vector<cplx> convolve(const ComplexField& omega, Symbol symbol) const {
    std::lock_guard lock(run_mutex);
    const std::size_t total = static_cast<std::size_t>(big) * big;
    for (std::size_t k = 0; k < total; ++k) buffer[k][0] = buffer[k][1] = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const cplx v = omega(i, j);
        buffer[static_cast<std::size_t>(j) * big + i][0] = v.real();
        buffer[static_cast<std::size_t>(j) * big + i][1] = v.imag();
      }
    fftw_execute(forward);
    for (int j = 0; j < big; ++j) {
      const double ky = wavenumber(j);
      for (int i = 0; i < big; ++i) {
        const double kx = wavenumber(i);
        const cplx s = (kx == 0.0 && ky == 0.0) ? cplx(0.0, 0.0) : symbol(cplx(kx, ky));
        auto& b = buffer[static_cast<std::size_t>(j) * big + i];
        const cplx v = cplx(b[0], b[1]) * s;
        b[0] = v.real();
        b[1] = v.imag();
      }
    }
    fftw_execute(backward);
    std::vector<cplx> out(static_cast<std::size_t>(n) * n);
    const double norm_factor = 1.0 / static_cast<double>(total);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const auto& b = buffer[static_cast<std::size_t>(j) * big + i];
        out[static_cast<std::size_t>(j) * n + i] = cplx(b[0], b[1]) * norm_factor;
      }
    return out;
  }
};

SpectralTransforms::SpectralTransforms(const Grid2D& grid) : grid_(grid) {
  if (!grid.is_power_of_two())
    throw ValidationError("spectral transforms need a power-of-two grid, got n = " +
                          std::to_string(grid.n()));
  impl_ = std::make_unique<Impl>(grid.n(), grid.h());
}

SpectralTransforms::~SpectralTransforms() = default;

void require_central_support(const ComplexField& omega) {
  const Grid2D& g = omega.grid();
  double peak = 0.0;
  for (const cplx& v : omega.values()) peak = std::max(peak, std::abs(v));
  const double quarter = 0.5 * g.half_width() + 1e-12 * g.half_width();
  for (int j = 0; j < g.n(); ++j)
    for (int i = 0; i < g.n(); ++i) {
      const Point z = g.node(i, j);
      if (std::abs(z.x - g.center().x) <= quarter && std::abs(z.y - g.center().y) <= quarter)
        continue;
      if (std::abs(omega(i, j)) > 1e-12 * peak)
        throw ValidationError("transform input support touches the pad region");
    }
}

ComplexField SpectralTransforms::cauchy(const ComplexField& omega) const {
  if (!(omega.grid() == grid_)) throw ValidationError("cauchy_transform: grid mismatch");
  require_central_support(omega);
  std::vector<cplx> out =
      impl_->convolve(omega, [](cplx xi) { return cplx(0.0, -2.0) / xi; });
  const double h2 = grid_.h() * grid_.h();
  cplx m0(0.0, 0.0), m1(0.0, 0.0);
  for (int j = 0; j < grid_.n(); ++j)
    for (int i = 0; i < grid_.n(); ++i) {
      const Point z = grid_.node(i, j);
      m0 += omega(i, j) * h2;
      m1 += omega(i, j) * cplx(z.x, -z.y) * h2;
    }
  const double period = 2.0 * grid_.n() * grid_.h();
  const double l2 = period * period;
  for (int j = 0; j < grid_.n(); ++j)
    for (int i = 0; i < grid_.n(); ++i) {
      const Point z = grid_.node(i, j);
      out[grid_.index(i, j)] += (cplx(z.x, -z.y) * m0 - m1) / l2;
    }
  return ComplexField(grid_, std::move(out));
}

ComplexField SpectralTransforms::beurling(const ComplexField& omega) const {
  if (!(omega.grid() == grid_)) throw ValidationError("beurling_transform: grid mismatch");
  require_central_support(omega);
  return ComplexField(grid_, impl_->convolve(omega, [](cplx xi) { return std::conj(xi) / xi; }));
}

ComplexField cauchy_transform(const ComplexField& omega) {
  return SpectralTransforms(omega.grid()).cauchy(omega);
}

ComplexField beurling_transform(const ComplexField& omega) {
  return SpectralTransforms(omega.grid()).beurling(omega);
}

}  // namespace ucp
