#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ucp/quasiball.hpp"

namespace ucp {

/// One window of the iteration: the ball B_{aTm}(z₁) with |z₁| = R = S + T − Λ, rescaled by aT.
struct WindowParams {
  long double S = 0, gamma = 0, Lambda = 0, lambda = 1;
  long double T = 0;  ///< S^{1+γ}
  long double R = 0;  ///< S + T − Λ
  long double a = 0;  ///< (1 − S/(5T))⁻¹
  long double K = 0;  ///< a₀T
  long double F = 0;  ///< S/(20T)
  double d = 0, b = 0, m = 0;  ///< σ(1 − F), ρ(1 + F), b + F
  long double containment_lhs = 0;  ///< aTm
  long double containment_rhs = 0;  ///< T + S/2 − Λ
  bool containment = false;
  bool inner_sanity = false;  ///< aTd ≥ T
  bool outer_sanity = false;  ///< aTb ≤ T + 9S/20 − Λ
  std::string radius_model;

  bool admissible() const { return a > 1 && F > 0 && F < 1 && containment; }
};

/// Evaluates the window without validation.
WindowParams evaluate_window(long double S, double gamma, double Lambda, double lambda,
                             const RadiusModel& radius = RadiusModel::identity(), double a0 = 1.25);

/// Smallest S (to 1e−12 relative) at which the window is admissible.
long double minimal_admissible_S(double gamma, double Lambda, double lambda,
                                 const RadiusModel& radius = RadiusModel::identity(),
                                 double a0 = 1.25);

/// Validated window; throws ValidationError reporting the minimal admissible S when the
/// containment aTm ≤ T + S/2 − Λ fails.
WindowParams window(long double S, double gamma, double Lambda, double lambda,
                    const RadiusModel& radius = RadiusModel::identity(), double a0 = 1.25);

/// β = max{α/(1+γ), 1} + γ/(1+γ).
double beta_exponent(double alpha, double gamma);

/// α′ = (α + γ)/(1+γ) + γ²/2.
double alpha_step(double alpha, double gamma);

/// α* = 1 + γ(1+γ)/2, the fixed point of alpha_step.
double alpha_fixed_point(double gamma);

/// N₀ = ⌈log((1+γ)/α₀)/log(1 − γ²/2)⌉ − 1.
int n0_bound(double alpha0, double gamma);

struct IterationTrace {
  double gamma = 0, alpha0 = 0, eps = 0;
  std::vector<double> alpha;  ///< α₀ … α_{N+1}
  std::vector<double> beta;   ///< β₀ … β_N
  std::vector<bool> contraction;  ///< α_{n+1} ≤ (1 − γ²/2)α_n for each n ≤ N
  int N = -1;
  int N0 = -1;
  int exact_steps = 0;  ///< closed-form N + 1 from the affine recurrence
  double fixed_point = 0;
  double final_exponent = 0;  ///< α_{N+1} (α₀ when N = −1)
  bool contraction_pass = true;
  bool n_bound_pass = true;
  bool final_pass = true;       ///< final exponent ≤ 1 + ε
  bool monotone_pass = true;    ///< α strictly decreasing while above 1 + γ
  bool beta_identity_pass = true;  ///< α_{n+1} = β_n + γ²/2 for α_n ≥ 1 + γ
};

/// Runs alpha_step from α₀ until α ≤ 1 + γ. Throws ValidationError unless 0 < γ ≤ ε.
IterationTrace iterate_exponents(double alpha0, double gamma, double eps);

/// S₀, …, S_{N+1} with S_{n+1} = S_n + S_n^{1+γ} − Λ. Throws ValidationError once S exceeds
/// `max_S`.
std::vector<long double> radii_schedule(long double S0, double gamma, double Lambda, int N,
                                        long double max_S = 1e15L);

struct SweepResult {
  int cases = 0;
  int n_bound_violations = 0;
  int contraction_violations = 0;  ///< traces with at least one failed contraction step
  double worst_alpha0 = 0, worst_gamma = 0;
  int worst_N = 0, worst_N0 = 0;
  bool pass = true;
};

/// Traces over α₀ ∈ (1+γ, 3] × γ ∈ [γ_min, γ_max] on a uniform grid.
SweepResult sweep_exponents(int alpha_points = 100, int gamma_points = 50, double gamma_min = 0.01,
                            double gamma_max = 0.5);

enum class LandisMode { General, Global };

/// Hypothesis class of the general mode: bounded potential (α₀ = 2 + γ²/2) or positive part
/// bounded with decaying negative part (α₀ = 4/3 + γ²/2).
enum class LandisClass { BoundedPotential, DecayingNegative };

struct LandisParams {
  LandisMode mode = LandisMode::General;
  LandisClass cls = LandisClass::DecayingNegative;
  double eps = 0.1;
  std::optional<double> eps0, eps1, eps2;
  double lambda = 1.0;
  double mu0 = 1.0, mu1 = 1.0, mu2 = 1.0;
  double C0 = 1.0;
  std::optional<double> alpha0;  ///< overrides the class default
  std::optional<long double> S0;  ///< defaults to the minimal admissible S
  double R = 100.0;               ///< global mode: radius where the bound is evaluated
  RadiusModel radius = RadiusModel::identity();
};

/// Result of running the order-of-vanishing pipeline on one window.
struct NumericalLeg {
  std::string scenario;
  int window = 0;
  double K = 0, F = 0;
  double measured_order = 0;
  double c_hat = 0;
  bool pass = false;
  std::string note;
};

struct LandisCertificate {
  LandisMode mode = LandisMode::General;
  double gamma = 0, alpha0 = 0, eps = 0;
  IterationTrace trace;
  std::vector<long double> schedule;
  std::vector<WindowParams> windows;
  long double S0 = 0;
  long double R0 = 0;  ///< λ^{−1/2} S_{N+1}
  double final_exponent = 0;
  // assumed constant of the log-large condition S^{γ²/2} ≥ C₂ log S
  double C2 = 1.0;
  bool C2_assumed = true;
  double log10_S_log_large = 0;  ///< log₁₀ of the smallest S with S^{γ²/2} ≥ C₂ log S
  // global mode
  double d = 0, b = 0, m = 0, F = 0, K = 0, beta = 0, c1 = 0, p = 0, C1 = 0;
  double log_bound_over_C = 0;  ///< −10 μ̂ d⁻¹ R log R (bound is exp(C times this))
  std::optional<NumericalLeg> leg;
  bool pass = false;
};

using LegRunner = std::function<NumericalLeg(const WindowParams&)>;

/// Arithmetic certificate; `leg` (if given) is run on the first window (general mode) or the
/// single global window.
LandisCertificate landis_certificate(const LandisParams& params, const LegRunner& leg = {});

}  // namespace ucp
