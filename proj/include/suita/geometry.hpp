#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "suita/errors.hpp"
#include "suita/quadrature.hpp"

namespace suita {

using Complex = std::complex<double>;

enum class CurveKind { Circle, Fourier };

// A simple closed analytic curve z(t), 2pi-periodic, traversed
// counterclockwise. The normal convention throughout the library is the
// tangent rotated clockwise by pi/2 (-i * z'/|z'|), which points away from
// the region the curve encloses.
class BoundaryCurve {
 public:
  static BoundaryCurve circle(Complex center, double radius) {
    if (!(radius > 0.0)) throw ValidationError("circle radius must be positive");
    BoundaryCurve c;
    c.kind_ = CurveKind::Circle;
    c.center_ = center;
    c.radius_ = radius;
    c.finish_setup();
    return c;
  }

  // coeffs[i] is the coefficient of e^{i m t} with m = i - (len-1)/2; the
  // length must be odd and at most 63 so the mode layout is unambiguous.
  static BoundaryCurve fourier(std::vector<Complex> coeffs) {
    if (coeffs.empty() || coeffs.size() % 2 == 0 || coeffs.size() > 64)
      throw ValidationError("fourier curve needs an odd number of coefficients (<= 63)");
    BoundaryCurve c;
    c.kind_ = CurveKind::Fourier;
    c.coeffs_ = std::move(coeffs);
    c.finish_setup();
    return c;
  }

  CurveKind kind() const { return kind_; }
  Complex circle_center() const { return center_; }
  double circle_radius() const { return radius_; }
  const std::vector<Complex>& fourier_coeffs() const { return coeffs_; }

  Complex point(double t) const {
    if (kind_ == CurveKind::Circle) return center_ + radius_ * std::polar(1.0, t);
    Complex z = 0.0;
    const int half = (static_cast<int>(coeffs_.size()) - 1) / 2;
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i)
      z += coeffs_[i] * std::polar(1.0, (i - half) * t);
    return z;
  }

  Complex velocity(double t) const {
    if (kind_ == CurveKind::Circle) return Complex(0, radius_) * std::polar(1.0, t);
    Complex z = 0.0;
    const int half = (static_cast<int>(coeffs_.size()) - 1) / 2;
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i) {
      double m = i - half;
      z += Complex(0, m) * coeffs_[i] * std::polar(1.0, m * t);
    }
    return z;
  }

  Complex acceleration(double t) const {
    if (kind_ == CurveKind::Circle) return -radius_ * std::polar(1.0, t);
    Complex z = 0.0;
    const int half = (static_cast<int>(coeffs_.size()) - 1) / 2;
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i) {
      double m = i - half;
      z += -(m * m) * coeffs_[i] * std::polar(1.0, m * t);
    }
    return z;
  }

  // Unit normal pointing away from the enclosed region.
  Complex outward_normal(double t) const {
    Complex v = velocity(t);
    return Complex(0, -1) * v / std::abs(v);
  }

  double length() const { return length_; }
  double diameter() const { return diameter_; }
  double enclosed_area() const { return area_; }
  Complex centroid() const { return centroid_; }

  // Distance from p to the curve: coarse scan refined by Newton on |z(t)-p|^2.
  double distance(Complex p, double* t_best = nullptr) const {
    const int scan = 96;
    double best_t = 0.0, best_d2 = std::norm(point(0.0) - p);
    for (int i = 1; i < scan; ++i) {
      double t = kTwoPi * i / scan;
      double d2 = std::norm(point(t) - p);
      if (d2 < best_d2) {
        best_d2 = d2;
        best_t = t;
      }
    }
    double t = best_t;
    for (int iter = 0; iter < 8; ++iter) {
      Complex d = point(t) - p, v = velocity(t), a = acceleration(t);
      double g1 = 2.0 * (d.real() * v.real() + d.imag() * v.imag());
      double g2 = 2.0 * (std::norm(v) + d.real() * a.real() + d.imag() * a.imag());
      if (g2 <= 0.0) break;
      double step = g1 / g2;
      t -= step;
      if (std::abs(step) < 1e-14) break;
    }
    double d2 = std::norm(point(t) - p);
    if (d2 > best_d2) {
      t = best_t;
      d2 = best_d2;
    }
    if (t_best) *t_best = t;
    return std::sqrt(d2);
  }

  // Winding number of the curve around p via the trapezoid rule on
  // (1/2pi) Im[ z'/(z - p) ] dt; returns the rounded integer and the
  // rounding residual.
  double winding_raw(Complex p, int nodes = 256) const {
    double acc = 0.0;
    for (int i = 0; i < nodes; ++i) {
      double t = kTwoPi * i / nodes;
      acc += std::imag(velocity(t) / (point(t) - p));
    }
    return acc / nodes;
  }

  int winding(Complex p, int nodes = 256) const {
    return static_cast<int>(std::lround(winding_raw(p, nodes)));
  }

  // Curve sanity: injectivity at sampled parameters, nonvanishing tangent,
  // counterclockwise orientation.
  void validate() const {
    const int m = 192;
    std::vector<Complex> zs(m);
    double vmax = 0.0, vmin = std::numeric_limits<double>::max();
    for (int i = 0; i < m; ++i) {
      double t = kTwoPi * i / m;
      zs[i] = point(t);
      double sp = std::abs(velocity(t));
      vmax = std::max(vmax, sp);
      vmin = std::min(vmin, sp);
    }
    if (!(vmin > 1e-9 * vmax) || vmax == 0.0)
      throw ValidationError("curve tangent vanishes (or nearly vanishes) at some parameter");
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        double dt = kTwoPi * (j - i) / m;
        double sep = std::sin(0.5 * std::min(dt, kTwoPi - dt));
        if (std::abs(zs[i] - zs[j]) < 1e-3 * diameter_ * sep)
          throw ValidationError("curve is not injective (self-intersection detected)");
      }
    }
    if (!(area_ > 0.0))
      throw ValidationError("curve must be traversed counterclockwise (signed area <= 0)");
  }

 private:
  void finish_setup() {
    const int n = 512;
    double len = 0.0, area = 0.0;
    Complex cx = 0.0;
    double dmax = 0.0;
    std::vector<Complex> zs(n);
    for (int i = 0; i < n; ++i) {
      double t = kTwoPi * i / n;
      Complex z = point(t), v = velocity(t);
      zs[i] = z;
      len += std::abs(v);
      // area  = (1/2) Im \oint conj(z) z' dt;  moments give the centroid.
      area += 0.5 * std::imag(std::conj(z) * v);
      cx += Complex(0.5 * z.real() * z.real() * v.imag(), -0.5 * z.imag() * z.imag() * v.real());
    }
    double h = kTwoPi / n;
    length_ = len * h;
    area_ = area * h;
    for (int i = 0; i < n; i += 2)
      for (int j = i + 1; j < n; j += 2) dmax = std::max(dmax, std::abs(zs[i] - zs[j]));
    diameter_ = dmax;
    centroid_ = (area_ != 0.0) ? (cx * h) / area_ : Complex(0, 0);
  }

  CurveKind kind_ = CurveKind::Circle;
  Complex center_{0, 0};
  double radius_ = 1.0;
  std::vector<Complex> coeffs_;
  double length_ = 0.0, area_ = 0.0, diameter_ = 0.0;
  Complex centroid_{0, 0};
};

enum class PointLocation { Inside, Outside, NearBoundary };

struct Location {
  PointLocation kind;
  double boundary_distance;  // distance to the nearest boundary curve
  int nearest_curve;         // 0 = outer, 1.. = holes
};

// A bounded multiply connected domain: outer curve plus n-1 hole curves,
// all counterclockwise. Connectivity n >= 1.
class PlanarDomain {
 public:
  PlanarDomain(BoundaryCurve outer, std::vector<BoundaryCurve> holes,
               std::vector<std::optional<Complex>> anchor_override = {})
      : outer_(std::move(outer)), holes_(std::move(holes)) {
    outer_.validate();
    for (const auto& h : holes_) h.validate();
    diameter_ = outer_.diameter();
    clearance_ = 1e-6 * diameter_;
    validate_layout();
    anchors_.resize(holes_.size());
    for (size_t j = 0; j < holes_.size(); ++j) {
      if (j < anchor_override.size() && anchor_override[j])
        anchors_[j] = *anchor_override[j];
      else
        anchors_[j] = holes_[j].centroid();
      if (holes_[j].winding(anchors_[j]) != 1)
        throw ValidationError("hole anchor point does not lie inside its hole");
    }
  }

  int connectivity() const { return 1 + static_cast<int>(holes_.size()); }
  const BoundaryCurve& outer() const { return outer_; }
  const std::vector<BoundaryCurve>& holes() const { return holes_; }
  const BoundaryCurve& curve(int i) const { return i == 0 ? outer_ : holes_[i - 1]; }
  int curve_count() const { return connectivity(); }
  Complex hole_anchor(int j) const { return anchors_[j]; }
  double diameter() const { return diameter_; }
  double near_clearance() const { return clearance_; }

  Location locate(Complex p) const {
    double dmin = std::numeric_limits<double>::max();
    int nearest = 0;
    for (int i = 0; i < curve_count(); ++i) {
      double d = curve(i).distance(p);
      if (d < dmin) {
        dmin = d;
        nearest = i;
      }
    }
    if (dmin < clearance_) return {PointLocation::NearBoundary, dmin, nearest};
    bool in = outer_.winding(p) == 1;
    for (const auto& h : holes_) in = in && (h.winding(p) == 0);
    return {in ? PointLocation::Inside : PointLocation::Outside, dmin, nearest};
  }

  std::vector<double> curve_distances(Complex p) const {
    std::vector<double> d(curve_count());
    for (int i = 0; i < curve_count(); ++i) d[i] = curve(i).distance(p);
    return d;
  }

  bool strictly_inside(Complex p) const { return locate(p).kind == PointLocation::Inside; }

  // Minimal distance from hole j's curve to every other boundary component.
  double hole_clearance(int j) const {
    double best = std::numeric_limits<double>::max();
    const int m = 256;
    for (int i = 0; i < m; ++i) {
      Complex z = holes_[j].point(kTwoPi * i / m);
      for (int c = 0; c < curve_count(); ++c) {
        if (c == j + 1) continue;
        best = std::min(best, curve(c).distance(z));
      }
    }
    return best;
  }

 private:
  void validate_layout() {
    const int m = 64;
    for (size_t j = 0; j < holes_.size(); ++j) {
      for (int i = 0; i < m; ++i) {
        Complex z = holes_[j].point(kTwoPi * i / m);
        if (outer_.winding(z) != 1)
          throw ValidationError("hole curve " + std::to_string(j) +
                                " is not strictly inside the outer curve");
      }
      for (size_t l = 0; l < holes_.size(); ++l) {
        if (l == j) continue;
        for (int i = 0; i < m; ++i) {
          Complex z = holes_[l].point(kTwoPi * i / m);
          if (holes_[j].winding(z) != 0)
            throw ValidationError("hole curves " + std::to_string(j) + " and " +
                                  std::to_string(l) + " overlap or enclose each other");
        }
      }
    }
    // curves must also keep a positive distance from one another
    for (int a = 0; a < curve_count(); ++a) {
      for (int b = a + 1; b < curve_count(); ++b) {
        double dmin = std::numeric_limits<double>::max();
        for (int i = 0; i < m; ++i)
          dmin = std::min(dmin, curve(b).distance(curve(a).point(kTwoPi * i / m)));
        if (dmin < 16.0 * clearance_)
          throw ValidationError("boundary curves " + std::to_string(a) + " and " +
                                std::to_string(b) + " touch or overlap");
      }
    }
  }

  BoundaryCurve outer_;
  std::vector<BoundaryCurve> holes_;
  std::vector<Complex> anchors_;
  double diameter_ = 0.0, clearance_ = 0.0;
};

// One smooth piece of a cycle: z(t), z'(t) on [t0, t1].
struct CycleSegment {
  std::function<Complex(double)> pos;
  std::function<Complex(double)> vel;
  double t0 = 0.0;
  double t1 = kTwoPi;
};

// A piecewise-smooth closed curve in the domain. Canonical homology cycles
// carry the index of the hole they wind around.
struct Cycle {
  std::vector<CycleSegment> segments;
  std::optional<int> hole_index;

  double diameter() const {
    double dmax = 0.0;
    std::vector<Complex> zs;
    for (const auto& s : segments)
      for (int i = 0; i < 64; ++i) zs.push_back(s.pos(s.t0 + (s.t1 - s.t0) * i / 64.0));
    for (size_t i = 0; i < zs.size(); ++i)
      for (size_t j = i + 1; j < zs.size(); ++j) dmax = std::max(dmax, std::abs(zs[i] - zs[j]));
    return dmax;
  }

  double distance(Complex p) const {
    double dmin = std::numeric_limits<double>::max();
    for (const auto& s : segments)
      for (int i = 0; i < 512; ++i)
        dmin = std::min(dmin, std::abs(s.pos(s.t0 + (s.t1 - s.t0) * i / 512.0) - p));
    return dmin;
  }
};

inline Cycle circle_cycle(Complex center, double radius, int turns = 1) {
  Cycle c;
  c.segments.push_back({[=](double t) { return center + radius * std::polar(1.0, t); },
                        [=](double t) { return Complex(0, radius) * std::polar(1.0, t); }, 0.0,
                        kTwoPi * turns});
  return c;
}

inline Cycle curve_cycle(const BoundaryCurve& b) {
  Cycle c;
  c.segments.push_back({[b](double t) { return b.point(t); },
                        [b](double t) { return b.velocity(t); }, 0.0, kTwoPi});
  return c;
}

struct WindingResult {
  int value;
  double residual;  // |raw - value|, for diagnostics
};

// (1/2pi) \oint omega_p over the cycle, rounded to the nearest integer.
inline WindingResult winding_number(const Cycle& gamma, Complex p, int nodes_per_segment = 512) {
  double scale = gamma.diameter();
  if (gamma.distance(p) < 1e-7 * scale)
    throw ValidationError("winding_number: point lies (numerically) on the cycle");
  double acc = 0.0;
  for (const auto& s : gamma.segments) {
    double h = (s.t1 - s.t0) / nodes_per_segment;
    // trapezoid; endpoint terms at half weight (they cancel for closed loops)
    for (int i = 0; i <= nodes_per_segment; ++i) {
      double t = s.t0 + h * i;
      double f = std::imag(s.vel(t) / (s.pos(t) - p));
      acc += (i == 0 || i == nodes_per_segment) ? 0.5 * h * f : h * f;
    }
  }
  double raw = acc / kTwoPi;
  int v = static_cast<int>(std::lround(raw));
  return {v, std::abs(raw - v)};
}

// Canonical homology basis: for each hole j, a smooth cycle obtained by
// offsetting the hole curve into the domain by a fraction of the minimal
// clearance between hole j and the other boundary components.
inline std::vector<Cycle> standard_cycles(const PlanarDomain& domain,
                                          double offset_fraction = 0.35) {
  std::vector<Cycle> cycles;
  const int n_holes = domain.connectivity() - 1;
  for (int j = 0; j < n_holes; ++j) {
    const BoundaryCurve b = domain.holes()[j];
    double d = offset_fraction * domain.hole_clearance(j);
    auto pos = [b, d](double t) { return b.point(t) + d * b.outward_normal(t); };
    auto vel = [b, d](double t) {
      Complex v = b.velocity(t), a = b.acceleration(t);
      double sp = std::abs(v);
      // d/dt of the unit tangent: (a*|v| - v * d|v|/dt) / |v|^2
      double dsp = (v.real() * a.real() + v.imag() * a.imag()) / sp;
      Complex du = (a * sp - v * dsp) / (sp * sp);
      return v + d * Complex(0, -1) * du;
    };
    // verify the offset stays inside the domain
    for (int i = 0; i < 128; ++i) {
      if (!domain.strictly_inside(pos(kTwoPi * i / 128.0)))
        throw ValidationError(
            "standard_cycles: offset cycle around hole " + std::to_string(j) +
            " leaves the domain; retry with offset fraction <= " +
            std::to_string(0.5 * offset_fraction));
    }
    Cycle c;
    c.segments.push_back({pos, vel, 0.0, kTwoPi});
    c.hole_index = j;
    cycles.push_back(std::move(c));
  }
  return cycles;
}

// Homology coefficients of gamma in the canonical basis: the winding numbers
// around the hole anchor points.
inline std::vector<int> homology_coefficients(const Cycle& gamma, const PlanarDomain& domain) {
  std::vector<int> t;
  for (int j = 0; j < domain.connectivity() - 1; ++j)
    t.push_back(winding_number(gamma, domain.hole_anchor(j)).value);
  return t;
}

}  // namespace suita
