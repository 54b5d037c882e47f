#include "ucp/landis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ucp/error.hpp"

namespace ucp {

namespace {

std::string fmt(long double v) {
  std::ostringstream o;
  o.precision(12);
  o << static_cast<double>(v);
  return o.str();
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw ValidationError("γ must be positive and finite");
}

}  // namespace

WindowParams evaluate_window(long double S, double gamma, double Lambda, double lambda,
                             const RadiusModel& radius, double a0) {
  WindowParams w;
  w.S = S;
  w.gamma = gamma;
  w.Lambda = Lambda;
  w.lambda = lambda;
  w.T = std::pow(S, 1.0L + gamma);
  w.R = S + w.T - Lambda;
  w.a = 1.0L / (1.0L - S / (5.0L * w.T));
  w.K = a0 * w.T;
  w.F = S / (20.0L * w.T);
  const double f = static_cast<double>(w.F);
  w.d = radius.sigma(1.0 - f);
  w.b = radius.rho(1.0 + f);
  w.m = w.b + f;
  const long double aT = w.a * w.T;
  w.containment_lhs = aT * w.m;
  w.containment_rhs = w.T + S / 2 - Lambda;
  w.containment = w.containment_lhs <= w.containment_rhs;
  w.inner_sanity = aT * w.d >= w.T;
  w.outer_sanity = aT * w.b <= w.T + 9.0L * S / 20.0L - Lambda;
  w.radius_model = radius.kind;
  return w;
}

long double minimal_admissible_S(double gamma, double Lambda, double lambda,
                                 const RadiusModel& radius, double a0) {
  require_gamma(gamma);
  auto ok = [&](long double S) {
    return evaluate_window(S, gamma, Lambda, lambda, radius, a0).admissible();
  };
  // log-spaced scan for the first admissible S, then bisection on the bracket
  long double lo = 1.0L, hi = 1.0L;
  bool found = false;
  for (int k = 1; k <= 15 * 40; ++k) {
    hi = std::pow(10.0L, k / 40.0L);
    if (ok(hi)) {
      found = true;
      break;
    }
    lo = hi;
  }
  if (!found) throw ValidationError("window: no admissible S below 1e15");
  while (hi - lo > 1e-12L * hi) {
    const long double mid = 0.5L * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

WindowParams window(long double S, double gamma, double Lambda, double lambda,
                    const RadiusModel& radius, double a0) {
  require_gamma(gamma);
  if (!(S > 0)) throw ValidationError("window: S must be positive");
  WindowParams w = evaluate_window(S, gamma, Lambda, lambda, radius, a0);
  if (!w.admissible()) {
    const long double smin = minimal_admissible_S(gamma, Lambda, lambda, radius, a0);
    throw ValidationError("window: containment aTm ≤ T + S/2 − Λ fails at S = " + fmt(S) +
                          " (aTm = " + fmt(w.containment_lhs) + ", bound " +
                          fmt(w.containment_rhs) + "); minimal admissible S = " + fmt(smin));
  }
  return w;
}

double beta_exponent(double alpha, double gamma) {
  return std::max(alpha / (1.0 + gamma), 1.0) + gamma / (1.0 + gamma);
}

double alpha_step(double alpha, double gamma) {
  return (alpha + gamma) / (1.0 + gamma) + gamma * gamma / 2.0;
}

double alpha_fixed_point(double gamma) { return 1.0 + gamma * (1.0 + gamma) / 2.0; }

int n0_bound(double alpha0, double gamma) {
  return static_cast<int>(
             std::ceil(std::log((1.0 + gamma) / alpha0) / std::log(1.0 - gamma * gamma / 2.0))) -
         1;
}

IterationTrace iterate_exponents(double alpha0, double gamma, double eps) {
  require_gamma(gamma);
  if (!(gamma <= eps)) throw ValidationError("iterate: γ must not exceed ε");
  if (!(alpha0 > 0.0)) throw ValidationError("iterate: α₀ must be positive");
  if (!(gamma < 2.0)) throw ValidationError("iterate: γ must be below 2");
  IterationTrace t;
  t.gamma = gamma;
  t.alpha0 = alpha0;
  t.eps = eps;
  t.fixed_point = alpha_fixed_point(gamma);
  t.alpha.push_back(alpha0);
  const double threshold = 1.0 + gamma;
  if (alpha0 <= threshold) {
    t.N = -1;
    t.N0 = -1;
    t.exact_steps = 0;
    t.final_exponent = alpha0;
    t.final_pass = alpha0 <= 1.0 + eps;
    return t;
  }
  const double shrink = 1.0 - gamma * gamma / 2.0;
  double a = alpha0;
  // α_n − α* shrinks by (1+γ)⁻¹ per step, so the loop terminates
  while (a > threshold) {
    const double beta = beta_exponent(a, gamma);
    const double next = alpha_step(a, gamma);
    t.beta.push_back(beta);
    const double via_beta = beta + gamma * gamma / 2.0;
    if (std::abs(via_beta - next) > 8 * std::numeric_limits<double>::epsilon() * next)
      t.beta_identity_pass = false;
    const bool contracts = next <= shrink * a;
    t.contraction.push_back(contracts);
    if (!contracts) t.contraction_pass = false;
    if (!(next < a)) t.monotone_pass = false;
    t.alpha.push_back(next);
    a = next;
  }
  t.N = static_cast<int>(t.alpha.size()) - 2;
  t.N0 = n0_bound(alpha0, gamma);
  t.n_bound_pass = t.N <= t.N0;
  t.exact_steps = static_cast<int>(std::ceil(std::log((alpha0 - t.fixed_point) /
                                                      (threshold - t.fixed_point)) /
                                             std::log(1.0 + gamma)));
  t.final_exponent = a;
  t.final_pass = a <= 1.0 + eps;
  return t;
}

std::vector<long double> radii_schedule(long double S0, double gamma, double Lambda, int N,
                                        long double max_S) {
  if (!(S0 > 0)) throw ValidationError("radii_schedule: S₀ must be positive");
  if (gamma < 0.0) throw ValidationError("radii_schedule: γ must be non-negative");
  std::vector<long double> s{S0};
  for (int n = 0; n <= N; ++n) {
    const long double cur = s.back();
    const long double next = cur + std::pow(cur, 1.0L + gamma) - Lambda;
    if (next > max_S)
      throw ValidationError("radii_schedule: S_" + std::to_string(n + 1) + " = " + fmt(next) +
                            " exceeds the overflow guard " + fmt(max_S));
    if (!(next > cur))
      throw ValidationError("radii_schedule: schedule is not increasing (S^{1+γ} ≤ Λ)");
    s.push_back(next);
  }
  return s;
}

SweepResult sweep_exponents(int alpha_points, int gamma_points, double gamma_min,
                            double gamma_max) {
  SweepResult r;
  double worst_excess = -1e300;
  for (int gi = 0; gi < gamma_points; ++gi) {
    const double gamma =
        gamma_points == 1 ? gamma_min
                          : gamma_min + (gamma_max - gamma_min) * gi / (gamma_points - 1);
    const double lo = 1.0 + gamma;
    for (int ai = 1; ai <= alpha_points; ++ai) {
      const double alpha0 = lo + (3.0 - lo) * ai / alpha_points;
      const IterationTrace t = iterate_exponents(alpha0, gamma, gamma);
      ++r.cases;
      if (!t.n_bound_pass) ++r.n_bound_violations;
      if (!t.contraction_pass) ++r.contraction_violations;
      const double excess = t.N - t.N0;
      if (excess > worst_excess) {
        worst_excess = excess;
        r.worst_alpha0 = alpha0;
        r.worst_gamma = gamma;
        r.worst_N = t.N;
        r.worst_N0 = t.N0;
      }
    }
  }
  r.pass = r.n_bound_violations == 0;
  return r;
}

namespace {

/// log₁₀ of the largest root of (γ²/2) log S = log C₂ + log log S.
double log10_log_large(double gamma, double c2) {
  const double k = gamma * gamma / 2.0;
  auto f = [&](double x) { return k * x - std::log(c2) - std::log(x); };
  double lo = std::max(1.0 / k, 1.0);
  if (f(lo) >= 0.0) return lo / std::log(10.0);
  double hi = 2 * lo;
  while (f(hi) < 0.0) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return hi / std::log(10.0);
}

}  // namespace

LandisCertificate landis_certificate(const LandisParams& params, const LegRunner& leg) {
  LandisCertificate c;
  c.mode = params.mode;
  c.eps = params.eps;
  if (!(params.lambda > 0.0 && params.lambda <= 1.0))
    throw ValidationError("certificate: λ must lie in (0, 1]");
  const double mu_hat = std::max({params.mu0, params.mu1, params.mu2});
  if (!(mu_hat > 0.0)) throw ValidationError("certificate: μ parameters must be positive");

  if (params.mode == LandisMode::Global) {
    c.F = 0.2;
    c.d = params.radius.sigma(4.0 / 5.0);
    c.b = params.radius.rho(6.0 / 5.0);
    c.m = c.b + 1.0 / 5.0;
    if (!(params.R >= 1.0 / c.d))
      throw ValidationError("certificate: global mode requires R ≥ 1/d");
    c.K = mu_hat * params.R / c.d;
    c.C1 = params.C0 * (c.d + c.m) / mu_hat;
    c.c1 = 0.0;
    c.p = 0.0;
    c.beta = 1.0;
    c.final_exponent = 1.0;
    c.log_bound_over_C = -10.0 * mu_hat * params.R * std::log(params.R) / c.d;
    WindowParams w;
    w.S = w.T = params.R;
    w.R = params.R;
    w.a = 1.0L / c.d;
    w.K = c.K;
    w.F = c.F;
    w.d = c.d;
    w.b = c.b;
    w.m = c.m;
    w.lambda = params.lambda;
    w.radius_model = params.radius.kind;
    w.containment = w.inner_sanity = w.outer_sanity = true;
    c.windows.push_back(w);
    if (leg) c.leg = leg(w);
    c.pass = c.d > 0 && c.d < 1 && c.b > 1 && (!c.leg || c.leg->pass);
    return c;
  }

  if (!(params.eps > 0.0)) throw ValidationError("certificate: ε must be positive");
  double gamma = params.eps;
  for (const auto& e : {params.eps0, params.eps1, params.eps2})
    if (e) {
      if (!(*e > 0.0)) throw ValidationError("certificate: ε_i must be positive");
      gamma = std::min(gamma, *e / 2.0);
    }
  c.gamma = gamma;
  c.alpha0 = params.alpha0 ? *params.alpha0
                           : (params.cls == LandisClass::BoundedPotential ? 2.0 : 4.0 / 3.0) +
                                 gamma * gamma / 2.0;
  c.trace = iterate_exponents(c.alpha0, gamma, params.eps);
  c.final_exponent = c.trace.final_exponent;
  const double Lambda = std::sqrt(params.lambda);
  const double a0 = params.cls == LandisClass::BoundedPotential
                        ? 1.25 * std::max(params.mu1, params.mu2)
                        : 1.25;
  c.S0 = params.S0 ? *params.S0
                   : minimal_admissible_S(gamma, Lambda, params.lambda, params.radius, a0);
  c.schedule = radii_schedule(c.S0, gamma, Lambda, c.trace.N);
  for (int n = 0; n <= c.trace.N; ++n)
    c.windows.push_back(window(c.schedule[static_cast<std::size_t>(n)], gamma, Lambda,
                               params.lambda, params.radius, a0));
  c.R0 = c.schedule.back() / std::sqrt(static_cast<long double>(params.lambda));
  c.C2 = 1.0;
  c.C2_assumed = true;
  c.log10_S_log_large = log10_log_large(gamma, c.C2);
  if (leg && !c.windows.empty()) c.leg = leg(c.windows.front());
  bool windows_ok = true;
  for (const auto& w : c.windows) windows_ok = windows_ok && w.inner_sanity && w.outer_sanity;
  c.pass = c.trace.final_pass && windows_ok && (!c.leg || c.leg->pass);
  return c;
}

}  // namespace ucp
