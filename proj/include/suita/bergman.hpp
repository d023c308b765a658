#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "suita/errors.hpp"
#include "suita/geometry.hpp"
#include "suita/green.hpp"
#include "suita/parallel.hpp"
#include "suita/periods.hpp"
#include "suita/quadrature.hpp"

namespace suita {

// Truncated holomorphic basis: scaled powers of (z - c0) up to some degree
// plus, per hole, scaled negative powers of (z - a_j) about the hole anchor.
// Functions are ordered in degree blocks so that a leading sub-basis is again
// a basis of the same family at lower degree (nested truncations).
class HolomorphicBasis {
 public:
  HolomorphicBasis(const PlanarDomain& domain, int max_degree) : degree_(max_degree) {
    center_ = domain.outer().centroid();
    scale_ = 0.0;
    for (int i = 0; i < 256; ++i)
      scale_ = std::max(scale_, std::abs(domain.outer().point(kTwoPi * i / 256.0) - center_));
    const int holes = domain.connectivity() - 1;
    for (int j = 0; j < holes; ++j) {
      anchors_.push_back(domain.hole_anchor(j));
      double r = 0.0;
      for (int i = 0; i < 256; ++i)
        r = std::max(r, std::abs(domain.holes()[j].point(kTwoPi * i / 256.0) - anchors_[j]));
      anchor_scales_.push_back(r);
    }
  }

  int degree() const { return degree_; }
  int hole_count() const { return static_cast<int>(anchors_.size()); }
  int dimension() const { return dimension_at(degree_); }
  int dimension_at(int d) const { return 1 + d * (1 + hole_count()); }

  // Values of all basis functions at z, in block order.
  void evaluate_row(Complex z, Complex* out) const {
    const int H = hole_count();
    Complex u = (z - center_) / scale_;
    std::vector<Complex> w(H);
    for (int j = 0; j < H; ++j) w[j] = anchor_scales_[j] / (z - anchors_[j]);
    out[0] = 1.0;
    Complex up = 1.0;
    std::vector<Complex> wp(H, 1.0);
    for (int d = 1; d <= degree_; ++d) {
      up *= u;
      int base = 1 + (d - 1) * (1 + H);
      out[base] = up;
      for (int j = 0; j < H; ++j) {
        wp[j] *= w[j];
        out[base + 1 + j] = wp[j];
      }
    }
  }

  // order-th derivative of basis function idx at z0
  Complex derivative(int idx, int order, Complex z0) const {
    auto [kind, j, d] = decode(idx);
    if (kind == 0) {
      // ((z-c0)/R)^d
      if (order > d) return 0.0;
      double fact = 1.0;
      for (int i = 0; i < order; ++i) fact *= (d - i);
      return fact * std::pow((z0 - center_) / scale_, d - order) / std::pow(scale_, order);
    }
    // (r / (z-a))^d : derivative brings (-1)^order (d)(d+1)...(d+order-1)
    double fact = 1.0;
    for (int i = 0; i < order; ++i) fact *= (d + i);
    double sgn = (order % 2 == 0) ? 1.0 : -1.0;
    return sgn * fact * std::pow(anchor_scales_[j], d) *
           std::pow(z0 - anchors_[j], -static_cast<double>(d + order));
  }

 private:
  // index -> (kind 0=poly 1=hole, hole index, degree)
  std::tuple<int, int, int> decode(int idx) const {
    if (idx == 0) return {0, -1, 0};
    const int H = hole_count();
    int d = (idx - 1) / (1 + H) + 1;
    int off = (idx - 1) % (1 + H);
    if (off == 0) return {0, -1, d};
    return {1, off - 1, d};
  }

  Complex center_;
  double scale_ = 1.0;
  std::vector<Complex> anchors_;
  std::vector<double> anchor_scales_;
  int degree_;
};

struct AreaQuadrature {
  std::vector<Complex> points;
  std::vector<double> weights;
  std::string kind;  // "polar-disc", "polar-annulus", "midpoint"
};

// Area quadrature over the domain. Circular discs and concentric annuli get
// a tensor polar grid (Gauss-Legendre radially, trapezoid in angle), exact
// for the polynomial part of the Gram matrix; anything else falls back to a
// boundary-clipped midpoint grid of roughly `budget` interior cells.
inline AreaQuadrature area_quadrature(const PlanarDomain& domain, int budget, int degree_hint) {
  AreaQuadrature q;
  const bool outer_circle = domain.outer().kind() == CurveKind::Circle;
  bool concentric = false;
  if (outer_circle && domain.connectivity() == 2 &&
      domain.holes()[0].kind() == CurveKind::Circle &&
      std::abs(domain.holes()[0].circle_center() - domain.outer().circle_center()) <
          1e-12 * domain.diameter())
    concentric = true;

  if (outer_circle && (domain.connectivity() == 1 || concentric)) {
    double r0 = concentric ? domain.holes()[0].circle_radius() : 0.0;
    double r1 = domain.outer().circle_radius();
    Complex c = domain.outer().circle_center();
    int nr = std::min(400, std::max(2 * degree_hint + 24, 48));
    int ntheta = std::max({4 * degree_hint + 16, 64, std::min(budget / nr, 2048)});
    auto [gx, gw] = gauss_legendre(nr);
    q.kind = concentric ? "polar-annulus" : "polar-disc";
    q.points.reserve(static_cast<size_t>(nr) * ntheta);
    q.weights.reserve(static_cast<size_t>(nr) * ntheta);
    for (int i = 0; i < nr; ++i) {
      double r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * gx[i];
      double wr = 0.5 * (r1 - r0) * gw[i] * r * (kTwoPi / ntheta);
      for (int t = 0; t < ntheta; ++t) {
        q.points.push_back(c + r * std::polar(1.0, kTwoPi * t / ntheta));
        q.weights.push_back(wr);
      }
    }
    return q;
  }

  q.kind = "midpoint";
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (int i = 0; i < 512; ++i) {
    Complex z = domain.outer().point(kTwoPi * i / 512.0);
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  int g = static_cast<int>(std::ceil(std::sqrt(budget / 0.55)));
  g = std::max(g, 64);
  double dx = (xmax - xmin) / g, dy = (ymax - ymin) / g;
  double half_diag = 0.5 * std::hypot(dx, dy);
  std::vector<std::vector<Complex>> rows(g);
  std::vector<std::vector<double>> roww(g);
  parallel_for(g, [&](int iy) {
    for (int ix = 0; ix < g; ++ix) {
      Complex z(xmin + (ix + 0.5) * dx, ymin + (iy + 0.5) * dy);
      Location loc = domain.locate(z);
      if (loc.kind == PointLocation::Inside &&
          loc.boundary_distance > half_diag + domain.near_clearance()) {
        rows[iy].push_back(z);
        roww[iy].push_back(dx * dy);
      }
    }
  });
  for (int iy = 0; iy < g; ++iy) {
    q.points.insert(q.points.end(), rows[iy].begin(), rows[iy].end());
    q.weights.insert(q.weights.end(), roww[iy].begin(), roww[iy].end());
  }
  return q;
}

// Pointwise-evaluable weight rho_{z0} = e^{-(2(k+1-a)G + 2v)} c(-2aG).
// Both c families collapse to rho = exp(-bb * G - 2v) with
// bb = 2(k+1 - a(1+beta)).
class WeightFunction {
 public:
  WeightFunction(const WeightSpec& spec, std::optional<GreenData> green)
      : spec_(spec), green_(std::move(green)) {
    bb_ = 2.0 * (spec.k + 1 - spec.a * (1.0 + spec.beta));
    if (bb_ != 0.0 && !green_)
      throw ValidationError("weight: this (k, a, c) combination requires the Green function");
  }

  double singularity_exponent() const { return 0.5 * bb_; }  // rho ~ |z-z0|^{-2b}
  bool needs_green() const { return bb_ != 0.0; }
  const WeightSpec& spec() const { return spec_; }
  const GreenData* green() const { return green_ ? &*green_ : nullptr; }

  double operator()(Complex z) const {
    double e = -2.0 * spec_.v_value(z);
    if (bb_ != 0.0) {
      const GreenData& g = *green_;
      double d = std::abs(z - g.pole());
      if (d < 1e-14) return bb_ < 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
      double G = std::log(d) + g.regular_part().evaluate_unchecked(z);
      e += -bb_ * G;
    }
    return std::exp(e);
  }

 private:
  WeightSpec spec_;
  std::optional<GreenData> green_;
  double bb_ = 0.0;
};

inline WeightFunction build_weight(const WeightSpec& spec, const GreenData& g, Complex z0) {
  if (std::abs(g.pole() - z0) > 1e-12)
    throw ValidationError("build_weight: Green data pole differs from z0");
  double bb = 2.0 * (spec.k + 1 - spec.a * (1.0 + spec.beta));
  if (bb == 0.0) return WeightFunction(spec, std::nullopt);
  return WeightFunction(spec, g);
}

struct BergmanEstimate {
  double kernel_value = 0.0;  // B = 1/E
  double energy = 0.0;        // minimal weighted L2 energy E
  Eigen::VectorXcd coefficients;
  int dimension = 0;
  int quad_nodes = 0;
  double max_weighted_integrand = 0.0;
  std::vector<std::pair<int, double>> convergence;  // (degree, B)
};

struct QuadConfig {
  int budget = 200000;
  int green_nodes = 256;
  bool sweep = false;
};

namespace detail {

// Deterministic Gram assembly: per-block Gram matrices (fixed block size,
// Eigen GEMM) combined by a pairwise reduction tree ordered by block index.
inline Eigen::MatrixXcd assemble_gram(const HolomorphicBasis& basis, const AreaQuadrature& quad,
                                      const std::function<double(Complex)>& rho,
                                      const std::vector<char>& keep, double& max_integrand) {
  const int D = basis.dimension();
  const int Q = static_cast<int>(quad.points.size());
  const int block = 1024;
  const int nblocks = (Q + block - 1) / block;
  std::vector<Eigen::MatrixXcd> partial(nblocks);
  std::vector<double> maxw(nblocks, 0.0);

  parallel_for(nblocks, [&](int bidx) {
    int lo = bidx * block, hi = std::min(Q, lo + block);
    Eigen::MatrixXcd rows(hi - lo, D);
    double mw = 0.0;
    std::vector<Complex> vals(D);
    int r = 0;
    for (int i = lo; i < hi; ++i, ++r) {
      if (!keep.empty() && !keep[i]) {
        rows.row(r).setZero();
        continue;
      }
      double w = quad.weights[i] * rho(quad.points[i]);
      mw = std::max(mw, std::abs(w));
      if (!(w >= 0.0) || !std::isfinite(w))
        throw NumericalError("bergman: weight evaluated to a non-finite value at a node");
      basis.evaluate_row(quad.points[i], vals.data());
      double sw = std::sqrt(w);
      for (int p = 0; p < D; ++p) rows(r, p) = sw * vals[p];
    }
    partial[bidx] = rows.adjoint() * rows;
    maxw[bidx] = mw;
  });

  for (double m : maxw) max_integrand = std::max(max_integrand, m);
  // pairwise tree ordered by block index
  int n = nblocks;
  while (n > 1) {
    int half = (n + 1) / 2;
    for (int i = 0; i + half < n; ++i) partial[i] += partial[i + half];
    n = half;
  }
  return nblocks > 0 ? partial[0] : Eigen::MatrixXcd::Zero(D, D);
}

}  // namespace detail

// B^{(k)}(z0) = 1 / min { \int |f|^2 rho dA : f = (z-z0)^k + O((z-z0)^{k+1}) },
// minimized over the truncated basis by the KKT system with a Schur
// complement on the (k+1)-row constraint block.
inline BergmanEstimate bergman_kernel_k(const PlanarDomain& domain, const WeightSpec& w,
                                        Complex z0, int degree, const QuadConfig& cfg = {}) {
  w.validate(domain);
  Location loc = domain.locate(z0);
  if (loc.kind != PointLocation::Inside)
    throw ValidationError("bergman: z0 must lie strictly inside the domain");
  const int k = w.k;
  if (degree < k) throw ValidationError("bergman: basis degree must be at least k");
  if (!std::isfinite(w.v_value(z0)))
    throw ValidationError("bergman: v(z0) = -infinity (z0 is a log charge)");
  double a_eff = w.a * (1.0 + w.beta);
  if (k >= 1 && a_eff <= k)
    throw ValidationError(
        "bergman: a(1+beta) <= k makes the basis Gram integrals divergent; use a closer to "
        "k+1 (default a = k+1)");

  std::optional<GreenData> green;
  double bb = 2.0 * (k + 1 - a_eff);
  if (bb != 0.0) green = green_function(domain, z0, cfg.green_nodes);
  WeightFunction rho(w, green);

  HolomorphicBasis basis(domain, degree);
  const int D = basis.dimension();
  AreaQuadrature quad = area_quadrature(domain, cfg.budget, degree);
  const int Q = static_cast<int>(quad.points.size());

  // Singular weights: exclude a small disc around the pole and integrate it
  // in local polar coordinates, with the radial power handled analytically
  // and the basis expanded to second order about z0.
  std::vector<char> keep;
  Eigen::MatrixXcd correction = Eigen::MatrixXcd::Zero(D, D);
  double b = 0.5 * bb;
  if (b > 0.0) {
    double spacing = std::sqrt(domain.diameter() * domain.diameter() / std::max(Q, 1));
    double rex = std::max(1e-3 * loc.boundary_distance, 3.0 * spacing);
    rex = std::min(rex, 0.5 * loc.boundary_distance);
    keep.assign(Q, 1);
    for (int i = 0; i < Q; ++i)
      if (std::abs(quad.points[i] - z0) < rex) keep[i] = 0;
    double h0 = green->regular_part().evaluate(z0);
    double C = std::exp(-bb * h0 - 2.0 * w.v_value(z0));
    Eigen::MatrixXcd deriv(3, D);
    for (int m = 0; m < 3; ++m) {
      double mfact = (m == 0) ? 1.0 : (m == 1 ? 1.0 : 2.0);
      for (int p = 0; p < D; ++p) deriv(m, p) = basis.derivative(p, m, z0) / mfact;
    }
    for (int m = 0; m < 3; ++m) {
      double expo = 2 * m + 2 - 2 * b;
      if (expo <= 0.0)
        throw NumericalError("bergman: pole correction exponent is not integrable");
      double radial = std::pow(rex, expo) / expo;
      correction += (kTwoPi * C * radial) * (deriv.row(m).adjoint() * deriv.row(m));
    }
  }

  BergmanEstimate est;
  est.quad_nodes = Q;
  Eigen::MatrixXcd G =
      detail::assemble_gram(basis, quad, [&rho](Complex z) { return rho(z); }, keep,
                            est.max_weighted_integrand) +
      correction;

  // constraint rows: f^{(i)}(z0) = 0 for i < k, f^{(k)}(z0) = k!
  Eigen::MatrixXcd A(k + 1, D);
  for (int i = 0; i <= k; ++i)
    for (int p = 0; p < D; ++p) A(i, p) = basis.derivative(p, i, z0);
  Eigen::VectorXcd bvec = Eigen::VectorXcd::Zero(k + 1);
  double kfact = 1.0;
  for (int i = 2; i <= k; ++i) kfact *= i;
  bvec(k) = kfact;

  auto solve_prefix = [&](int P) -> std::pair<double, Eigen::VectorXcd> {
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(G.topLeftCorner(P, P));
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().real().minCoeff() <= 0.0)
      throw NumericalError(
          "bergman: Gram matrix is numerically indefinite; increase the quadrature budget "
          "(--quad-nodes) or reduce the degree");
    Eigen::MatrixXcd X = ldlt.solve(A.leftCols(P).adjoint());
    Eigen::MatrixXcd S = A.leftCols(P) * X;
    Eigen::FullPivLU<Eigen::MatrixXcd> slu(S);
    if (!slu.isInvertible())
      throw NumericalError("bergman: constraint rows are rank deficient at this degree");
    Eigen::VectorXcd y = slu.solve(bvec);
    double E = std::real(bvec.dot(y));  // = y^H S y
    if (!(E > 0.0)) throw NumericalError("bergman: nonpositive minimal energy");
    return {E, X * y};
  };

  if (cfg.sweep) {
    for (int d = std::max(k, 1); d < degree; ++d) {
      double Ed = solve_prefix(basis.dimension_at(d)).first;
      est.convergence.emplace_back(d, 1.0 / Ed);
    }
  }
  auto [E, coef] = solve_prefix(D);
  est.energy = E;
  est.kernel_value = 1.0 / E;
  est.coefficients = coef;
  est.dimension = D;
  est.convergence.emplace_back(degree, est.kernel_value);
  return est;
}

// (\int_0^inf c e^{-t} dt) (pi/a) e^{-2v(z0)} B / c_beta(z0)^{2(k+1)}.
// >= 1 always; = 1 exactly on the equality locus.
inline double suita_ratio(const WeightSpec& w, const GreenData& g, const BergmanEstimate& est,
                          Complex z0) {
  double v0 = w.v_value(z0);
  if (!std::isfinite(v0)) throw ValidationError("suita_ratio: v(z0) = -infinity");
  double cap = g.capacity();
  return w.c_integral() * (std::numbers::pi / w.a) * std::exp(-2.0 * v0) * est.kernel_value /
         std::pow(cap, 2.0 * (w.k + 1));
}

}  // namespace suita
