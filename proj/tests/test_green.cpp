#include <catch_amalgamated.hpp>
#include <cmath>

#include "oracles.hpp"
#include "suita/green.hpp"
#include "suita/periods.hpp"

using namespace suita;

static PlanarDomain annulus() {
  return PlanarDomain(BoundaryCurve::circle({0, 0}, 2.0), {BoundaryCurve::circle({0, 0}, 1.0)});
}
static PlanarDomain disc() { return PlanarDomain(BoundaryCurve::circle({0, 0}, 1.0), {}); }

TEST_CASE("disc Green function closed forms") {
  PlanarDomain d = disc();
  GreenData g0 = green_function(d, {0, 0}, 128);
  CHECK(g0.value({0.5, 0}) == Catch::Approx(std::log(0.5)).margin(1e-10));
  CHECK(g0.value({-0.3, 0.4}) == Catch::Approx(std::log(0.5)).margin(1e-10));

  GreenData g = green_function(d, {0.5, 0}, 128);
  CHECK(g.value({0.75, 0}) == Catch::Approx(std::log(0.25 / 0.625)).margin(1e-10));
  for (Complex z : {Complex(-0.2, 0.3), Complex(0.1, -0.6)})
    CHECK(g.value(z) == Catch::Approx(oracle::disc_green(z, {0.5, 0})).margin(1e-10));
}

TEST_CASE("disc Green gradient") {
  GreenData g = green_function(disc(), {0, 0}, 128);
  for (double r : {0.3, 0.6}) {
    Complex grad = g.gradient({r, 0});
    CHECK(grad.real() == Catch::Approx(1.0 / r).margin(1e-9));
    CHECK(grad.imag() == Catch::Approx(0.0).margin(1e-9));
  }
}

TEST_CASE("Green negativity and boundary decay") {
  PlanarDomain d = annulus();
  GreenData g = green_function(d, {1.5, 0}, 256);
  for (double r = 1.12; r <= 1.85; r += 0.07)
    for (int i = 0; i < 24; ++i) {
      Complex z = r * std::polar(1.0, kTwoPi * i / 24);
      if (std::abs(z - g.pole()) < 0.05) continue;
      CHECK(g.value(z) < 0.0);
    }
  // values shrink towards the boundary (away from the pole)
  CHECK(std::abs(g.value({-1.85, 0})) < std::abs(g.value({-1.6, 0})));
  CHECK(std::abs(g.value({-1.85, 0})) < 0.15);
}

TEST_CASE("annulus Green matches the reflection series") {
  PlanarDomain d = annulus();
  GreenData g = green_function(d, {1.5, 0}, 256);
  for (Complex z : {Complex(-1.5, 0), Complex(0, 1.4), Complex(1.2, 0.8), Complex(-0.9, -1.1)})
    CHECK(g.value(z) == Catch::Approx(oracle::annulus_green(z, {1.5, 0}, 2.0)).margin(1e-9));
}

TEST_CASE("Green symmetry via two independent solves") {
  PlanarDomain d = annulus();
  std::vector<std::pair<Complex, Complex>> pairs = {
      {{1.5, 0}, {-1.2, 0.6}}, {{0, 1.3}, {1.7, 0.2}}, {{-1.4, -0.5}, {0.3, 1.6}}};
  for (auto [z, w] : pairs) {
    GreenData gz = green_function(d, z, 256);
    GreenData gw = green_function(d, w, 256);
    CHECK(std::abs(gz.value(w) - gw.value(z)) < 1e-6);
  }
}

TEST_CASE("pole flux is 2pi") {
  PlanarDomain d = annulus();
  GreenData g = green_function(d, {1.5, 0}, 256);
  double flux =
      tilde_d_integral([&g](Complex z) { return g.gradient(z); }, circle_cycle({1.5, 0}, 0.12));
  CHECK(flux == Catch::Approx(kTwoPi).margin(1e-8));
}

TEST_CASE("disc capacity closed form") {
  PlanarDomain d = disc();
  CHECK(green_function(d, {0, 0}, 128).capacity() == Catch::Approx(1.0).margin(1e-9));
  for (double r : {0.2, 0.5, 0.8}) {
    GreenData g = green_function(d, {r, 0}, 256);
    CHECK(g.capacity() == Catch::Approx(1.0 / (1.0 - r * r)).margin(1e-7));
  }
}

TEST_CASE("annulus capacity matches the reflection series") {
  PlanarDomain d = annulus();
  for (double r : {1.2, 1.4, std::sqrt(2.0), 1.6, 1.8}) {
    GreenData g = green_function(d, {r, 0}, 256);
    CHECK(g.capacity() == Catch::Approx(oracle::annulus_capacity({r, 0}, 2.0)).margin(1e-6));
  }
}

TEST_CASE("Green third formula: measures from boundary flux") {
  // (1/2pi) \oint_{gamma_j} dG/dn ds equals u_j(z0) up to sign and an
  // integer, depending on whether the cycle encloses the pole
  PlanarDomain d = annulus();
  HarmonicMeasureSet m = harmonic_measures(d, 128);
  for (Complex z0 : {Complex(1.5, 0), Complex(-1.2, 0.8)}) {
    GreenData g = green_function(d, z0, 128);
    double p = green_periods(g, {circle_cycle({0, 0}, 1.15)}).front();
    CHECK(p == Catch::Approx(-m.measure(0).evaluate(z0)).margin(1e-7));
  }
}

TEST_CASE("pole placement validation") {
  PlanarDomain d = annulus();
  CHECK_THROWS_AS(green_function(d, {0.5, 0}, 64), ValidationError);
  CHECK_THROWS_AS(green_function(d, {0, 0}, 64), ValidationError);
  CHECK_THROWS_AS(green_function(d, {2.5, 0}, 64), ValidationError);
  GreenData g = green_function(d, {1.5, 0}, 64);
  CHECK_THROWS_AS(g.value({1.5, 0}), NumericalError);
}
