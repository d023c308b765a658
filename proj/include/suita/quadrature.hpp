#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace suita {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Nodes of the N-point periodic trapezoid rule on [0, 2pi); every node has
// weight 2pi/N. Spectrally accurate for periodic analytic integrands.
inline std::vector<double> trapezoid_nodes(int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = kTwoPi * i / n;
  return t;
}

// Gauss-Legendre nodes and weights on [-1,1], by Newton iteration on the
// three-term recurrence.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  return {x, w};
}

// Trigonometric (band-limited) interpolation of samples f_j taken at the
// N equispaced nodes t_j = 2pi j / N, evaluated at s. N must be even.
inline double trig_interpolate(const std::vector<double>& f, double s) {
  const int n = static_cast<int>(f.size());
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    double d = s - kTwoPi * j / n;
    // wrap to (-pi, pi]
    d -= kTwoPi * std::floor(d / kTwoPi + 0.5);
    if (std::abs(d) < 1e-12) return f[j];
    acc += f[j] * std::sin(0.5 * n * d) / std::tan(0.5 * d);
  }
  return acc / n;
}

}  // namespace suita
