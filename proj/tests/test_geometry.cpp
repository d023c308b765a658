#include <catch_amalgamated.hpp>
#include <cmath>

#include "suita/geometry.hpp"
#include "suita/io.hpp"

using namespace suita;

static PlanarDomain annulus(double r0 = 1.0, double r1 = 2.0) {
  return PlanarDomain(BoundaryCurve::circle({0, 0}, r1), {BoundaryCurve::circle({0, 0}, r0)});
}

TEST_CASE("domain parsing: canonical shapes") {
  PlanarDomain a = parse_domain(
      R"({"curves":[{"kind":"circle","center":[0,0],"radius":2,"role":"outer"},
                    {"kind":"circle","center":[0,0],"radius":1,"role":"hole"}]})");
  CHECK(a.connectivity() == 2);

  PlanarDomain d = parse_domain(
      R"({"curves":[{"kind":"circle","center":[0,0],"radius":1,"role":"outer"}]})");
  CHECK(d.connectivity() == 1);
}

TEST_CASE("domain parsing: diagnostics") {
  CHECK_THROWS_AS(parse_domain("{"), ValidationError);
  CHECK_THROWS_AS(parse_domain(R"({"curves":[]})"), ValidationError);
  // two outer curves
  CHECK_THROWS_AS(parse_domain(
                      R"({"curves":[{"kind":"circle","center":[0,0],"radius":1,"role":"outer"},
                       {"kind":"circle","center":[0,0],"radius":2,"role":"outer"}]})"),
                  ValidationError);
  // intersecting holes
  CHECK_THROWS_WITH(
      parse_domain(R"({"curves":[{"kind":"circle","center":[0,0],"radius":3,"role":"outer"},
                       {"kind":"circle","center":[-0.4,0],"radius":0.5,"role":"hole"},
                       {"kind":"circle","center":[0.4,0],"radius":0.5,"role":"hole"}]})"),
      Catch::Matchers::ContainsSubstring("overlap"));
  // hole outside the outer curve
  CHECK_THROWS_WITH(
      parse_domain(R"({"curves":[{"kind":"circle","center":[0,0],"radius":1,"role":"outer"},
                       {"kind":"circle","center":[5,0],"radius":0.5,"role":"hole"}]})"),
      Catch::Matchers::ContainsSubstring("outer"));
  // self-intersecting fourier curve (figure eight): z = cos t + (i/2) sin 2t
  CHECK_THROWS_WITH(parse_domain(
                        R"({"curves":[{"kind":"fourier",
          "coeffs":[[-0.25,0],[0.5,0],[0,0],[0.5,0],[0.25,0]],"role":"outer"}]})"),
                    Catch::Matchers::ContainsSubstring("injective"));
}

TEST_CASE("contains") {
  PlanarDomain a = annulus();
  CHECK(a.locate({1.5, 0}).kind == PointLocation::Inside);
  CHECK(a.locate({0.5, 0}).kind == PointLocation::Outside);
  CHECK(a.locate({3.0, 0}).kind == PointLocation::Outside);
  CHECK(a.locate({2.0000001, 0}).kind == PointLocation::NearBoundary);
  CHECK(a.locate({1.5, 0}).boundary_distance == Catch::Approx(0.5).margin(1e-9));
}

TEST_CASE("winding numbers") {
  Cycle unit = circle_cycle({0, 0}, 1.0);
  auto w0 = winding_number(unit, {0, 0});
  CHECK(w0.value == 1);
  CHECK(w0.residual < 1e-12);
  CHECK(winding_number(unit, {3, 0}).value == 0);

  Cycle doubled = circle_cycle({0, 0}, 1.0, 2);
  CHECK(winding_number(doubled, {0, 0}).value == 2);

  CHECK_THROWS_AS(winding_number(unit, {1.0, 0}), ValidationError);
}

TEST_CASE("winding is invariant under reparametrization and perturbation") {
  // same circle, shifted parameter and a wobbly homotopic cycle
  Cycle shifted;
  shifted.segments.push_back({[](double t) { return std::polar(1.0, t + 0.7); },
                              [](double t) { return Complex(0, 1) * std::polar(1.0, t + 0.7); },
                              0.0, kTwoPi});
  CHECK(winding_number(shifted, {0.2, 0.1}).value == 1);

  Cycle wobble;
  wobble.segments.push_back(
      {[](double t) { return (1.0 + 0.1 * std::cos(3 * t)) * std::polar(1.0, t); },
       [](double t) {
         return (-0.3 * std::sin(3 * t)) * std::polar(1.0, t) +
                (1.0 + 0.1 * std::cos(3 * t)) * Complex(0, 1) * std::polar(1.0, t);
       },
       0.0, kTwoPi});
  CHECK(winding_number(wobble, {0.2, 0.1}).value == 1);
  CHECK(winding_number(wobble, {0.2, 0.1}).residual < 1e-10);
}

TEST_CASE("standard cycles wind once around their hole") {
  PlanarDomain a = annulus();
  auto cycles = standard_cycles(a);
  REQUIRE(cycles.size() == 1);
  // concentric offset at 0.35 of the gap
  Complex p = cycles[0].segments[0].pos(0.0);
  CHECK(std::abs(p) == Catch::Approx(1.35).margin(1e-12));
  CHECK(winding_number(cycles[0], {0, 0}).value == 1);

  PlanarDomain disc(BoundaryCurve::circle({0, 0}, 1.0), {});
  CHECK(standard_cycles(disc).empty());
}

TEST_CASE("three-connected winding matrix is the identity") {
  PlanarDomain d(BoundaryCurve::circle({0, 0}, 2.2),
                 {BoundaryCurve::circle({-1.0, 0}, 0.5), BoundaryCurve::circle({1.0, 0}, 0.5)});
  auto cycles = standard_cycles(d);
  REQUIRE(cycles.size() == 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto w = winding_number(cycles[i], d.hole_anchor(j));
      CHECK(w.value == (i == j ? 1 : 0));
      CHECK(w.residual < 1e-9);
    }
}

TEST_CASE("homology coefficients") {
  PlanarDomain d(BoundaryCurve::circle({0, 0}, 2.2),
                 {BoundaryCurve::circle({-1.0, 0}, 0.5), BoundaryCurve::circle({1.0, 0}, 0.5)});
  auto c1 = homology_coefficients(standard_cycles(d)[0], d);
  CHECK(c1 == std::vector<int>{1, 0});

  // a contractible loop
  Cycle small = circle_cycle({0, 1.2}, 0.2);
  CHECK(homology_coefficients(small, d) == std::vector<int>{0, 0});

  // one loop around both holes
  Cycle big = circle_cycle({0, 0}, 1.9);
  CHECK(homology_coefficients(big, d) == std::vector<int>{1, 1});
}

TEST_CASE("fourier curve geometry") {
  // ellipse with semi-axes 1.2 and 0.8
  BoundaryCurve e = BoundaryCurve::fourier({{0.2, 0}, {0, 0}, {1.0, 0}});
  CHECK(e.enclosed_area() == Catch::Approx(std::numbers::pi * 1.2 * 0.8).epsilon(1e-10));
  CHECK(std::abs(e.centroid()) < 1e-12);
  CHECK(e.point(0.0).real() == Catch::Approx(1.2));
  CHECK(e.point(std::numbers::pi / 2).imag() == Catch::Approx(0.8));

  CHECK_THROWS_AS(BoundaryCurve::fourier({{1, 0}, {0, 0}}), ValidationError);  // even length
}

TEST_CASE("hole anchor override") {
  PlanarDomain d = parse_domain(
      R"({"curves":[{"kind":"circle","center":[0,0],"radius":2,"role":"outer"},
        {"kind":"circle","center":[0.5,0],"radius":0.3,"role":"hole","anchor":[0.6,0.1]}]})");
  CHECK(d.hole_anchor(0) == Complex(0.6, 0.1));
  CHECK_THROWS_AS(
      parse_domain(
          R"({"curves":[{"kind":"circle","center":[0,0],"radius":2,"role":"outer"},
        {"kind":"circle","center":[0.5,0],"radius":0.3,"role":"hole","anchor":[1.5,0]}]})"),
      ValidationError);
}

TEST_CASE("oversized cycle offsets are rejected with a suggestion") {
  PlanarDomain a = annulus();
  CHECK_THROWS_WITH(standard_cycles(a, 1.4),
                    Catch::Matchers::ContainsSubstring("offset fraction"));
}

TEST_CASE("clockwise curves are rejected") {
  // CW circle via fourier: z = e^{-it}
  CHECK_THROWS_WITH(BoundaryCurve::fourier({{1.0, 0}, {0, 0}, {0, 0}}).validate(),
                    Catch::Matchers::ContainsSubstring("counterclockwise"));
}
