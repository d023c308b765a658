#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "suita/errors.hpp"
#include "suita/geometry.hpp"
#include "suita/quadrature.hpp"

namespace suita {

// Dirichlet data: one continuous function of the curve parameter per
// boundary component, ordered [outer, hole 1, hole 2, ...].
struct DirichletProblem {
  PlanarDomain domain;
  std::vector<std::function<double(double)>> data;
  int nodes = 256;
};

// Interior Dirichlet solution represented as a double-layer potential plus
// one logarithmic point source per hole:
//
//   u(x) = sum_C  s_C/(2pi) \oint_C mu Im[ z'(t) dt / (z(t)-x) ]
//        + sum_k a_k log|x - q_k| ,
//
// with s_C = +1 on the outer curve and -1 on hole curves (so the domain is
// kept on the left) and q_k the hole anchor points. The pure double-layer
// operator is rank deficient on multiply connected domains; the sources plus
// the side conditions \oint_{hole k} mu ds = 0 restore unique solvability.
//
// Discretization: Nystrom with the periodic trapezoid rule at N nodes per
// curve, using the limiting kernel value Im[z''/(2 z')]/(2pi) on the
// diagonal; dense LU solve.
class HarmonicSolution {
 public:
  HarmonicSolution(PlanarDomain domain, int nodes,
                   std::vector<std::vector<double>> density,
                   std::vector<double> source_strength, std::vector<Complex> source_point,
                   double boundary_residual, double rcond)
      : domain_(std::move(domain)),
        nodes_(nodes),
        density_(std::move(density)),
        source_strength_(std::move(source_strength)),
        source_point_(std::move(source_point)),
        boundary_residual_(boundary_residual),
        rcond_(rcond) {
    cache_nodes();
  }

  const PlanarDomain& domain() const { return domain_; }
  int nodes_per_curve() const { return nodes_; }
  const std::vector<std::vector<double>>& density() const { return density_; }
  const std::vector<double>& source_strengths() const { return source_strength_; }
  double boundary_residual() const { return boundary_residual_; }
  double reciprocal_condition() const { return rcond_; }

  // Layer potentials are only trusted a few node spacings away from the
  // boundary; evaluation closer than this is refused rather than silently
  // degraded.
  double trust_distance(int curve) const { return trust_[curve]; }

  double evaluate(Complex p) const {
    check_evaluable(p, "evaluate");
    return evaluate_unchecked(p);
  }

  Complex gradient(Complex p) const {
    check_evaluable(p, "gradient");
    return gradient_unchecked(p);
  }

  double evaluate_unchecked(Complex p) const {
    double acc = 0.0;
    const double h = kTwoPi / nodes_;
    for (int c = 0; c < domain_.curve_count(); ++c) {
      const double sgn = (c == 0) ? 1.0 : -1.0;
      double s = 0.0;
      for (int i = 0; i < nodes_; ++i) s += density_[c][i] * std::imag(vel_[c][i] / (pos_[c][i] - p));
      acc += sgn * s * h / kTwoPi;
    }
    for (size_t k = 0; k < source_strength_.size(); ++k)
      acc += source_strength_[k] * std::log(std::abs(p - source_point_[k]));
    return acc;
  }

  Complex gradient_unchecked(Complex p) const {
    double gx = 0.0, gy = 0.0;
    const double h = kTwoPi / nodes_;
    for (int c = 0; c < domain_.curve_count(); ++c) {
      const double sgn = (c == 0) ? 1.0 : -1.0;
      double sx = 0.0, sy = 0.0;
      for (int i = 0; i < nodes_; ++i) {
        Complex d = pos_[c][i] - p;
        Complex w = vel_[c][i] / (d * d);
        sx += density_[c][i] * std::imag(w);
        sy += density_[c][i] * std::real(w);
      }
      gx += sgn * sx * h / kTwoPi;
      gy += sgn * sy * h / kTwoPi;
    }
    for (size_t k = 0; k < source_strength_.size(); ++k) {
      Complex d = p - source_point_[k];
      double r2 = std::norm(d);
      gx += source_strength_[k] * d.real() / r2;
      gy += source_strength_[k] * d.imag() / r2;
    }
    return {gx, gy};
  }

 private:
  friend HarmonicSolution solve_dirichlet(const DirichletProblem&);

  void cache_nodes() {
    pos_.resize(domain_.curve_count());
    vel_.resize(domain_.curve_count());
    trust_.resize(domain_.curve_count());
    for (int c = 0; c < domain_.curve_count(); ++c) {
      pos_[c].resize(nodes_);
      vel_[c].resize(nodes_);
      for (int i = 0; i < nodes_; ++i) {
        double t = kTwoPi * i / nodes_;
        pos_[c][i] = domain_.curve(c).point(t);
        vel_[c][i] = domain_.curve(c).velocity(t);
      }
      trust_[c] = 3.0 * domain_.curve(c).length() / nodes_;
    }
  }

  void check_evaluable(Complex p, const char* who) const {
    Location loc = domain_.locate(p);
    if (loc.kind != PointLocation::Inside)
      throw NumericalError(std::string(who) + ": point is not strictly inside the domain");
    std::vector<double> d = domain_.curve_distances(p);
    for (int c = 0; c < domain_.curve_count(); ++c)
      if (d[c] < trust_[c])
        throw NumericalError(std::string(who) + ": point is within " + std::to_string(trust_[c]) +
                             " of boundary curve " + std::to_string(c) +
                             " where the layer potential loses accuracy");
  }

  PlanarDomain domain_;
  int nodes_;
  std::vector<std::vector<double>> density_;
  std::vector<double> source_strength_;
  std::vector<Complex> source_point_;
  double boundary_residual_ = 0.0;
  double rcond_ = 1.0;
  std::vector<std::vector<Complex>> pos_, vel_;
  std::vector<double> trust_;
};

inline HarmonicSolution solve_dirichlet(const DirichletProblem& problem) {
  const PlanarDomain& dom = problem.domain;
  const int nc = dom.curve_count();
  const int N = problem.nodes;
  if (N < 16 || N % 2 != 0)
    throw ValidationError("solve_dirichlet: nodes per curve must be even and >= 16");
  if (static_cast<int>(problem.data.size()) != nc)
    throw ValidationError("solve_dirichlet: need one boundary data function per curve");
  const int n_holes = nc - 1;
  const int dim = nc * N + n_holes;
  const double h = kTwoPi / N;

  std::vector<std::vector<Complex>> pos(nc), vel(nc), acc(nc);
  for (int c = 0; c < nc; ++c) {
    pos[c].resize(N);
    vel[c].resize(N);
    acc[c].resize(N);
    for (int i = 0; i < N; ++i) {
      double t = h * i;
      pos[c][i] = dom.curve(c).point(t);
      vel[c][i] = dom.curve(c).velocity(t);
      acc[c][i] = dom.curve(c).acceleration(t);
    }
  }

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs(dim);

  auto row_of = [N](int curve, int node) { return curve * N + node; };

  for (int ct = 0; ct < nc; ++ct) {      // target curve (collocation)
    for (int it = 0; it < N; ++it) {
      const int r = row_of(ct, it);
      const Complex x = pos[ct][it];
      A(r, r) += 0.5;
      for (int cs = 0; cs < nc; ++cs) {  // source curve
        const double sgn = (cs == 0) ? 1.0 : -1.0;
        for (int is = 0; is < N; ++is) {
          double kval;
          if (cs == ct && is == it)
            kval = std::imag(acc[cs][is] / (2.0 * vel[cs][is]));
          else
            kval = std::imag(vel[cs][is] / (pos[cs][is] - x));
          A(r, row_of(cs, is)) += sgn * kval * h / kTwoPi;
        }
      }
      for (int k = 0; k < n_holes; ++k)
        A(r, nc * N + k) = std::log(std::abs(x - dom.hole_anchor(k)));
      double f = problem.data[ct](h * it);
      if (!std::isfinite(f))
        throw ValidationError("solve_dirichlet: boundary data is not finite at a node");
      rhs(r) = f;
    }
  }
  // side conditions: \oint_{hole k} mu ds = 0
  for (int k = 0; k < n_holes; ++k) {
    const int r = nc * N + k;
    for (int i = 0; i < N; ++i) A(r, row_of(k + 1, i)) = h * std::abs(vel[k + 1][i]);
    rhs(r) = 0.0;
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  double rcond = lu.rcond();
  if (!(rcond > 1e-13))
    throw NumericalError("solve_dirichlet: boundary system is numerically singular (rcond=" +
                         std::to_string(rcond) + ", N=" + std::to_string(N) + ")");
  Eigen::VectorXd sol = lu.solve(rhs);

  std::vector<std::vector<double>> density(nc, std::vector<double>(N));
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < N; ++i) density[c][i] = sol(row_of(c, i));
  std::vector<double> strengths(n_holes);
  std::vector<Complex> anchors(n_holes);
  for (int k = 0; k < n_holes; ++k) {
    strengths[k] = sol(nc * N + k);
    anchors[k] = dom.hole_anchor(k);
  }

  // Boundary fidelity at inter-node checkpoints, using the jump relation
  // (the interior limit along the inward normal): the double-layer kernel
  // is smooth on an analytic curve, so the trapezoid sum remains valid with
  // the target between nodes; the density there comes from trigonometric
  // interpolation.
  double resid = 0.0;
  for (int ct = 0; ct < nc; ++ct) {
    for (int im = 0; im < N; ++im) {
      double t = h * (im + 0.5);
      Complex x = dom.curve(ct).point(t);
      double val = 0.5 * trig_interpolate(density[ct], t);
      for (int cs = 0; cs < nc; ++cs) {
        const double sgn = (cs == 0) ? 1.0 : -1.0;
        double s = 0.0;
        for (int is = 0; is < N; ++is) s += density[cs][is] * std::imag(vel[cs][is] / (pos[cs][is] - x));
        val += sgn * s * h / kTwoPi;
      }
      for (int k = 0; k < n_holes; ++k)
        val += strengths[k] * std::log(std::abs(x - anchors[k]));
      resid = std::max(resid, std::abs(val - problem.data[ct](t)));
    }
  }

  return HarmonicSolution(dom, N, std::move(density), std::move(strengths), std::move(anchors),
                          resid, rcond);
}

// Harmonic measures u_1..u_{n-1}: u_j = 1 on hole j's curve, 0 elsewhere.
// The last measure u_n = 1 - sum u_j is available by evaluation.
class HarmonicMeasureSet {
 public:
  HarmonicMeasureSet() = default;
  explicit HarmonicMeasureSet(std::vector<HarmonicSolution> measures)
      : measures_(std::move(measures)) {}

  int count() const { return static_cast<int>(measures_.size()); }  // n-1
  const HarmonicSolution& measure(int j) const { return measures_[j]; }
  const PlanarDomain& domain() const { return measures_.front().domain(); }
  bool empty() const { return measures_.empty(); }

  // values u_1..u_{n-1} and the derived u_n
  std::vector<double> evaluate_all(Complex p) const {
    std::vector<double> v;
    double sum = 0.0;
    for (const auto& m : measures_) {
      double x = m.evaluate(p);
      v.push_back(x);
      sum += x;
    }
    v.push_back(1.0 - sum);
    return v;
  }

 private:
  std::vector<HarmonicSolution> measures_;
};

inline HarmonicMeasureSet harmonic_measures(const PlanarDomain& domain, int nodes) {
  std::vector<HarmonicSolution> out;
  const int n_holes = domain.connectivity() - 1;
  for (int j = 0; j < n_holes; ++j) {
    std::vector<std::function<double(double)>> data;
    for (int c = 0; c < domain.curve_count(); ++c) {
      double val = (c == j + 1) ? 1.0 : 0.0;
      data.push_back([val](double) { return val; });
    }
    out.push_back(solve_dirichlet({domain, std::move(data), nodes}));
  }
  return HarmonicMeasureSet(std::move(out));
}

}  // namespace suita
