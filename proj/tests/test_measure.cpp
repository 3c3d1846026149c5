#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "mechlab/measure.hpp"
#include "mechlab/mechanism.hpp"

using namespace mechlab;
using mechlab::test::code_of;
using mechlab::test::seeded_rng;

namespace {

const PreferenceFamily kQl = PreferenceFamily::quasilinear();
const PreferenceInterval kZeroOne(kQl, 0.0, 1.0);

}  // namespace

TEST_CASE("measure construction and validation") {
  CHECK_THROWS_AS(ParamMeasure::power(0.0, kZeroOne), std::invalid_argument);
  CHECK_THROWS_AS(ParamMeasure::power(-2.0, kZeroOne), std::invalid_argument);
  // Knots must be interior and strictly increasing in both coordinates.
  CHECK_THROWS_AS(ParamMeasure::piecewise_linear({{0.0, 0.2}}, kZeroOne),
                  std::invalid_argument);
  CHECK_THROWS_AS(ParamMeasure::piecewise_linear({{0.5, 0.0}}, kZeroOne),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      ParamMeasure::piecewise_linear({{0.4, 0.5}, {0.6, 0.5}}, kZeroOne),
      std::invalid_argument);
  CHECK_NOTHROW(ParamMeasure::piecewise_linear({{0.4, 0.2}, {0.6, 0.9}}, kZeroOne));
}

TEST_CASE("cdf, density, and quantile") {
  const ParamMeasure u = ParamMeasure::uniform(kZeroOne);
  CHECK(u.cdf(0.0) == 0.0);
  CHECK(u.cdf(1.0) == 1.0);
  CHECK(u.cdf(0.3) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(u.density(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(u.quantile(0.3) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(u.bounded_density());

  const ParamMeasure p2 = ParamMeasure::power(2.0, kZeroOne);
  CHECK(p2.cdf(0.5) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p2.quantile(0.25) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p2.density(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p2.bounded_density());

  const ParamMeasure sqrt_m = ParamMeasure::power(0.5, kZeroOne);
  CHECK_FALSE(sqrt_m.bounded_density());
  CHECK(sqrt_m.cdf(0.25) == doctest::Approx(0.5).epsilon(1e-14));

  const ParamMeasure pw =
      ParamMeasure::piecewise_linear({{0.5, 0.25}}, kZeroOne);
  CHECK(pw.cdf(0.5) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(pw.cdf(0.25) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(pw.density(0.25) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pw.density(0.75) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(pw.quantile(0.25) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pw.bounded_density());

  SUBCASE("quantile inverts the cdf") {
    auto rng = seeded_rng(505);
    std::uniform_real_distribution<double> x(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const double v = x(rng);
      CHECK(u.quantile(u.cdf(v)) == doctest::Approx(v).epsilon(1e-10));
      CHECK(p2.quantile(p2.cdf(v)) == doctest::Approx(v).epsilon(1e-10));
      CHECK(pw.quantile(pw.cdf(v)) == doctest::Approx(v).epsilon(1e-10));
    }
  }
}

TEST_CASE("mass") {
  const ParamMeasure u = ParamMeasure::uniform(kZeroOne);
  CHECK(u.mass(0.25, 0.75) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ParamMeasure::power(2.0, kZeroOne).mass(0.0, 0.5) ==
        doctest::Approx(0.25).epsilon(1e-14));
  CHECK(u.mass(0.4, 0.4) == 0.0);
  CHECK(code_of([&] { u.mass(-0.1, 0.5); }) == Errc::out_of_interval);
  CHECK(code_of([&] { u.mass(0.5, 1.1); }) == Errc::out_of_interval);
  CHECK(code_of([&] { u.mass(0.7, 0.3); }) == Errc::out_of_interval);

  SUBCASE("additivity to 1e-14") {
    auto rng = seeded_rng(606);
    std::uniform_real_distribution<double> x(0.0, 1.0);
    const ParamMeasure pw =
        ParamMeasure::piecewise_linear({{0.3, 0.6}, {0.8, 0.7}}, kZeroOne);
    for (const ParamMeasure& m :
         {u, ParamMeasure::power(2.0, kZeroOne), ParamMeasure::power(0.5, kZeroOne),
          pw}) {
      for (int i = 0; i < 200; ++i) {
        double a = x(rng), b = x(rng), c = x(rng);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        CHECK(m.mass(a, b) + m.mass(b, c) ==
              doctest::Approx(m.mass(a, c)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("expected revenue") {
  const ParamMeasure u = ParamMeasure::uniform(kZeroOne);

  SUBCASE("posted price is an exact step sum") {
    const Mechanism pp = Mechanism::posted_price(0.5, kZeroOne);
    CHECK(expected_revenue(pp, u) == doctest::Approx(0.25).epsilon(1e-14));
    // 0.5 * mass above 0.5 under cdf theta^2.
    CHECK(expected_revenue(pp, ParamMeasure::power(2.0, kZeroOne)) ==
          doctest::Approx(0.375).epsilon(1e-14));
    CHECK(expected_revenue(pp, ParamMeasure::piecewise_linear({{0.5, 0.25}},
                                                              kZeroOne)) ==
          doctest::Approx(0.375).epsilon(1e-14));
  }

  SUBCASE("quadrature matches closed forms") {
    const Mechanism f = Mechanism::quadratic_sp(kZeroOne);
    CHECK(expected_revenue(f, u) == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    // integral of theta^2/2 d(theta^2) = integral theta^3 dtheta = 1/4.
    CHECK(expected_revenue(f, ParamMeasure::power(2.0, kZeroOne)) ==
          doctest::Approx(0.25).epsilon(1e-9));
    // Unbounded density at the bottom: cdf sqrt(theta), theta = c^2,
    // integral c^4/2 dc = 1/10.
    CHECK(expected_revenue(f, ParamMeasure::power(0.5, kZeroOne)) ==
          doctest::Approx(0.1).epsilon(1e-8));
  }

  SUBCASE("zero mechanism earns zero") {
    const Mechanism z = Mechanism::piecewise(
        {{0.0, Bundle(0.0, 0.0)}, {1.0, Bundle(0.0, 0.0)}}, kZeroOne);
    CHECK(expected_revenue(z, u) == 0.0);
  }

  SUBCASE("equivalent representations agree exactly") {
    const Mechanism preset = Mechanism::posted_price(0.5, kZeroOne);
    const Mechanism manual = Mechanism::step(StepMechanism(
        {Bundle(0.0, 0.0), Bundle(0.5, 1.0)}, {Preference(kQl, 0.5)}, kZeroOne));
    for (const ParamMeasure& m :
         {u, ParamMeasure::power(2.0, kZeroOne),
          ParamMeasure::piecewise_linear({{0.3, 0.6}}, kZeroOne)}) {
      CHECK(expected_revenue(preset, m) == expected_revenue(manual, m));
    }
  }

  SUBCASE("mechanism must cover the measure interval") {
    const PreferenceInterval small(kQl, 0.0, 0.9);
    const Mechanism f = Mechanism::quadratic_sp(small);
    CHECK(code_of([&] { expected_revenue(f, u); }) == Errc::out_of_interval);
  }

  SUBCASE("families must match") {
    const PreferenceInterval qm_iv(PreferenceFamily::quadratic_money(1.0), 0.0, 1.0);
    const Mechanism f = Mechanism::step(StepMechanism(
        {Bundle(0.0, 0.0), Bundle(0.3, 1.0)},
        {Preference(qm_iv.family, 0.39)}, qm_iv));
    CHECK_THROWS_AS(expected_revenue(f, u), std::invalid_argument);
  }

  SUBCASE("piecewise-linear density integrates piecewise polynomials") {
    // t(theta) = theta/2 under density 0.5 on [0,0.5), 1.5 on [0.5,1]:
    // 0.5*[theta^2/4] over [0,0.5] + 1.5*[theta^2/4] over [0.5,1].
    const Mechanism lin = Mechanism::piecewise(
        {{0.0, Bundle(0.0, 0.0)}, {1.0, Bundle(0.5, 1.0)}}, kZeroOne);
    const ParamMeasure pw =
        ParamMeasure::piecewise_linear({{0.5, 0.25}}, kZeroOne);
    const double expect = 0.5 * 0.0625 + 1.5 * (0.25 - 0.0625);
    CHECK(expected_revenue(lin, pw) == doctest::Approx(expect).epsilon(1e-9));
  }
}
