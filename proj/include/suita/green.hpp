#pragma once

#include <cmath>
#include <utility>

#include "suita/errors.hpp"
#include "suita/geometry.hpp"
#include "suita/laplace.hpp"

namespace suita {

// Green function with pole z0:  G(z, z0) = log|z - z0| + h(z),  where h is
// harmonic with boundary data -log|zeta - z0|, so that G = 0 on the boundary.
// The logarithmic capacity in the translation chart w = z - z0 is
// c_beta(z0) = exp(h(z0)).
class GreenData {
 public:
  GreenData(Complex pole, HarmonicSolution regular)
      : pole_(pole), regular_(std::move(regular)) {}

  Complex pole() const { return pole_; }
  const HarmonicSolution& regular_part() const { return regular_; }
  const PlanarDomain& domain() const { return regular_.domain(); }

  double value(Complex z) const {
    if (std::abs(z - pole_) < 1e-14)
      throw NumericalError("green value: evaluation at the pole");
    return std::log(std::abs(z - pole_)) + regular_.evaluate(z);
  }

  Complex gradient(Complex z) const {
    Complex d = z - pole_;
    double r2 = std::norm(d);
    if (r2 < domain().near_clearance() * domain().near_clearance())
      throw NumericalError("green gradient: evaluation too close to the pole");
    Complex g = regular_.gradient(z);
    return {g.real() + d.real() / r2, g.imag() + d.imag() / r2};
  }

  double regular_value_at_pole() const { return regular_.evaluate(pole_); }
  double capacity() const { return std::exp(regular_value_at_pole()); }

 private:
  Complex pole_;
  HarmonicSolution regular_;
};

inline GreenData green_function(const PlanarDomain& domain, Complex pole, int nodes) {
  Location loc = domain.locate(pole);
  if (loc.kind != PointLocation::Inside)
    throw ValidationError("green_function: pole must lie strictly inside the domain");
  std::vector<std::function<double(double)>> data;
  for (int c = 0; c < domain.curve_count(); ++c) {
    const BoundaryCurve curve = domain.curve(c);
    data.push_back([curve, pole](double t) { return -std::log(std::abs(curve.point(t) - pole)); });
  }
  return GreenData(pole, solve_dirichlet({domain, std::move(data), nodes}));
}

inline double log_capacity(const GreenData& g) { return g.capacity(); }

}  // namespace suita
