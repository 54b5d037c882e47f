#include <cmath>

#include "doctest.h"
#include "ucp/error.hpp"
#include "ucp/landis.hpp"

using namespace ucp;

TEST_CASE("window arithmetic") {
  const WindowParams w = evaluate_window(1e4L, 0.1, 1.0, 1.0);
  CHECK(static_cast<double>(w.T) == doctest::Approx(std::pow(1e4, 1.1)).epsilon(1e-14));
  CHECK(static_cast<double>(w.T) == doctest::Approx(25118.86).epsilon(1e-6));
  CHECK(static_cast<double>(w.a) == doctest::Approx(1.0 / (1 - 1e4 / (5 * std::pow(1e4, 1.1)))).epsilon(1e-14));
  CHECK(static_cast<double>(w.a) == doctest::Approx(1.08651).epsilon(1e-5));
  CHECK(static_cast<double>(w.F) == doctest::Approx(0.019905).epsilon(1e-4));
  // identity radii: d = 1 − F, b = 1 + F
  CHECK(w.d == doctest::Approx(1 - static_cast<double>(w.F)).epsilon(1e-15));
  CHECK(w.b == doctest::Approx(1 + static_cast<double>(w.F)).epsilon(1e-15));

  const WindowParams z = evaluate_window(1e4L, 1e-9, 1.0, 1.0);
  CHECK(static_cast<double>(z.F) == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("minimal admissible S sits on the containment boundary") {
  const long double s = minimal_admissible_S(0.1, 1.0, 1.0);
  CHECK(evaluate_window(s * (1 + 1e-9L), 0.1, 1.0, 1.0).admissible());
  CHECK_FALSE(evaluate_window(s * (1 - 1e-6L), 0.1, 1.0, 1.0).admissible());
  CHECK_THROWS_AS(window(s * 0.5L, 0.1, 1.0, 1.0), ValidationError);
}

TEST_CASE("exponent step") {
  CHECK(beta_exponent(2, 0.1) == doctest::Approx(2 / 1.1 + 0.1 / 1.1).epsilon(1e-15));
  CHECK(beta_exponent(1, 0.3) == doctest::Approx(1 + 0.3 / 1.3).epsilon(1e-15));
  CHECK(beta_exponent(1.1, 0.1) == doctest::Approx(1 + 1.0 / 11).epsilon(1e-15));
  CHECK(alpha_step(2, 0.1) == doctest::Approx(2 / 1.1 + 0.1 / 1.1 + 0.005).epsilon(1e-15));
  const double a = alpha_fixed_point(0.1);
  CHECK(a == doctest::Approx(1.055).epsilon(1e-15));
  CHECK(alpha_step(a, 0.1) == doctest::Approx(a).epsilon(1e-14));
  // α′ ≤ (1 − γ²/2)α holds only above (2 + γ(1+γ))/(2 − γ(1+γ)); just above 1+γ it fails
  const double g = 0.1, gg = g * (1 + g), threshold = (2 + gg) / (2 - gg);
  CHECK(alpha_step(threshold + 1e-9, g) <= (1 - g * g / 2) * (threshold + 1e-9));
  CHECK(alpha_step(2.0, g) <= (1 - g * g / 2) * 2.0);
  CHECK(alpha_step(1.1 + 1e-9, g) > (1 - g * g / 2) * (1.1 + 1e-9));
}

TEST_CASE("iteration traces") {
  const double g = 0.1, a0 = 4.0 / 3 + g * g / 2;
  const IterationTrace t = iterate_exponents(a0, g, 0.1);
  const int n0 = static_cast<int>(std::ceil(std::log(1.1 / a0) / std::log(0.995))) - 1;
  CHECK(n0 == 39);
  CHECK(t.N0 == n0);
  CHECK(t.N <= 39);
  CHECK(t.final_exponent <= 1.1);
  CHECK(t.N + 1 == t.exact_steps);

  CHECK(iterate_exponents(1.05, 0.1, 0.1).N == -1);

  const IterationTrace t2 = iterate_exponents(2 + 0.05 * 0.05 / 2, 0.05, 0.05);
  CHECK(t2.final_exponent <= 1.05);
  CHECK_THROWS_AS(iterate_exponents(2, 0.3, 0.1), ValidationError);
}

TEST_CASE("radii schedule") {
  const std::vector<long double> s = radii_schedule(100.0L, 0.1, 1.0, 0);
  REQUIRE(s.size() >= 2);
  CHECK(static_cast<double>(s[1]) == doctest::Approx(99 + std::pow(100.0, 1.1)).epsilon(1e-14));
  CHECK(static_cast<double>(s[1]) == doctest::Approx(257.4893192).epsilon(1e-9));

  const std::vector<long double> lin = radii_schedule(10.0L, 0.0, 1.0, 3);
  for (std::size_t n = 0; n + 1 < lin.size(); ++n) CHECK(lin[n + 1] == 2 * lin[n] - 1);

  for (double g : {0.05, 0.2, 0.5})
    for (long double s0 : {5.0L, 50.0L}) {
      const std::vector<long double> r = radii_schedule(s0, g, 1.0, 3);
      for (std::size_t n = 0; n + 1 < r.size(); ++n) CHECK(r[n + 1] > r[n]);
    }
  CHECK_THROWS_AS(radii_schedule(10.0L, 0.1, 1.0, 200), ValidationError);
}

TEST_CASE("certificates") {
  LandisParams gen;
  gen.eps = 0.1;
  gen.eps0 = gen.eps1 = gen.eps2 = 0.4;
  gen.cls = LandisClass::DecayingNegative;
  const LandisCertificate c = landis_certificate(gen);
  CHECK(c.gamma == doctest::Approx(0.1));
  CHECK(c.alpha0 == doctest::Approx(4.0 / 3 + 0.005).epsilon(1e-14));
  CHECK(c.final_exponent <= 1.1);

  LandisParams glob;
  glob.mode = LandisMode::Global;
  glob.mu0 = 1.0;
  const LandisCertificate g = landis_certificate(glob);
  CHECK(g.d == 4.0 / 5);
  CHECK(g.b == 6.0 / 5);
  CHECK(g.m == 7.0 / 5);

  LandisParams done = gen;
  done.eps = 0.4;
  done.eps0 = done.eps1 = done.eps2 = 1.0;
  done.alpha0 = 1.3;
  const LandisCertificate z = landis_certificate(done);
  CHECK(z.trace.N == -1);
}
