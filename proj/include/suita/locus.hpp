#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "suita/errors.hpp"
#include "suita/geometry.hpp"
#include "suita/laplace.hpp"
#include "suita/parallel.hpp"
#include "suita/periods.hpp"

namespace suita {

// max_j dist((k+1) u_j(z) + c_j, Z); zero when the domain has no holes.
inline double condition_residual(Complex z, const HarmonicMeasureSet& measures,
                                 const PeriodVector& periods, int k) {
  double r = 0.0;
  for (int j = 0; j < measures.count(); ++j)
    r = std::max(r, distance_to_integer((k + 1) * measures.measure(j).evaluate(z) +
                                        periods.values[j]));
  return r;
}

struct LocusQuery {
  PlanarDomain domain;
  WeightSpec weight;
  int grid = 256;
  double tol = 1e-4;
  bool refine = true;
  int nodes = 256;  // boundary nodes per curve for the Dirichlet solves
};

struct LocusCurve {
  int level;                    // integer m of (k+1)u_1 + c_1 = m
  std::vector<Complex> points;  // closed polyline
};

struct LocusPoint {
  std::vector<int> levels;
  Complex z;
  double residual;
};

// Sampled residual field on a uniform grid over the bounding box; NaN marks
// points that are outside or too close to the boundary to evaluate.
struct ResidualField {
  int nx = 0, ny = 0;
  double x0 = 0, y0 = 0, dx = 0, dy = 0;
  std::vector<double> values;  // row-major, index iy * nx + ix
  double at(int ix, int iy) const { return values[static_cast<size_t>(iy) * nx + ix]; }
  Complex point(int ix, int iy) const { return {x0 + ix * dx, y0 + iy * dy}; }
  double min_residual() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values)
      if (std::isfinite(v)) m = std::min(m, v);
    return m;
  }
};

struct LocusReport {
  std::vector<LocusCurve> curves;        // n = 2
  std::vector<LocusPoint> points;        // n >= 3
  std::vector<Complex> unresolved;       // seeds whose refinement failed
  ResidualField field;
  std::vector<double> periods;           // calibrated c_j
  int k = 0;
};

namespace detail {

struct GridEval {
  ResidualField field;                       // residual values
  std::vector<std::vector<double>> u;        // per measure j, grid values (NaN masked)
  double mask_margin = 0.0;
};

// Evaluate all harmonic measures on the grid; points outside the domain or
// within the evaluation trust margin of a boundary are masked.
inline GridEval evaluate_grid(const PlanarDomain& domain, const HarmonicMeasureSet& measures,
                              const PeriodVector& periods, int k, int grid) {
  GridEval ev;
  // bounding box of the outer curve with a small margin
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (int i = 0; i < 512; ++i) {
    Complex z = domain.outer().point(kTwoPi * i / 512.0);
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymin = std::min(ymin, z.imag());
    ymax = std::max(ymax, z.imag());
  }
  ResidualField& f = ev.field;
  f.nx = grid;
  f.ny = grid;
  f.x0 = xmin;
  f.y0 = ymin;
  f.dx = (xmax - xmin) / (grid - 1);
  f.dy = (ymax - ymin) / (grid - 1);
  f.values.assign(static_cast<size_t>(grid) * grid, std::numeric_limits<double>::quiet_NaN());

  double cell_diag = std::hypot(f.dx, f.dy);
  // per-curve margin: evaluation trust distance or two grid cells
  std::vector<double> margin(domain.curve_count());
  double margin_max = 0.0;
  for (int c = 0; c < domain.curve_count(); ++c) {
    margin[c] = std::max(measures.measure(0).trust_distance(c), 2.0 * cell_diag);
    margin_max = std::max(margin_max, margin[c]);
  }
  ev.mask_margin = margin_max;

  const int nj = measures.count();
  ev.u.assign(nj, std::vector<double>(f.values.size(), std::numeric_limits<double>::quiet_NaN()));

  parallel_for(grid, [&](int iy) {
    for (int ix = 0; ix < grid; ++ix) {
      Complex z = f.point(ix, iy);
      if (!domain.strictly_inside(z)) continue;
      std::vector<double> d = domain.curve_distances(z);
      bool masked = false;
      for (int c = 0; c < domain.curve_count(); ++c)
        if (d[c] < margin[c]) masked = true;
      if (masked) continue;
      size_t idx = static_cast<size_t>(iy) * grid + ix;
      double r = 0.0;
      for (int j = 0; j < nj; ++j) {
        double uj = measures.measure(j).evaluate_unchecked(z);
        ev.u[j][idx] = uj;
        r = std::max(r, distance_to_integer((k + 1) * uj + periods.values[j]));
      }
      f.values[idx] = r;
    }
  });
  return ev;
}

// Integer target combinations for one grid cell: for each j the integers
// reachable by (k+1)u_j + c_j over the cell corners plus a Lipschitz margin.
// Empty when some corner is masked or some condition cannot reach an integer.
inline std::vector<std::vector<int>> cell_seed_levels(const GridEval& ev,
                                                      const PeriodVector& periods, int k, int ix,
                                                      int iy, int lo_level, int hi_level) {
  const int grid = ev.field.nx;
  const int nj = static_cast<int>(ev.u.size());
  std::vector<std::vector<int>> cands(nj);
  for (int j = 0; j < nj; ++j) {
    double lo = 1e300, hi = -1e300;
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx) {
        double u = ev.u[j][static_cast<size_t>(iy + dy) * grid + (ix + dx)];
        if (!std::isfinite(u)) return {};
        double f = (k + 1) * u + periods.values[j];
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
    double margin = 0.5 * (hi - lo) + 1e-9;
    for (int m = static_cast<int>(std::ceil(lo - margin)); m <= static_cast<int>(std::floor(hi + margin)); ++m) {
      if (m < lo_level || m > hi_level) continue;
      cands[j].push_back(m);
      if (cands[j].size() >= 3) break;
    }
    if (cands[j].empty()) return {};
  }
  std::vector<std::vector<int>> combos{{}};
  for (int j = 0; j < nj; ++j) {
    std::vector<std::vector<int>> next;
    for (const auto& base : combos)
      for (int m : cands[j]) {
        auto c = base;
        c.push_back(m);
        next.push_back(std::move(c));
      }
    combos = std::move(next);
  }
  return combos;
}

// Newton refinement of z toward (k+1)u_j(z) + c_j = m_j for all j, damped,
// least-squares when more conditions than unknowns.
inline bool newton_refine(Complex& z, double& resid, const HarmonicMeasureSet& measures,
                          const PeriodVector& periods, int k, const std::vector<int>& m,
                          double tol, const PlanarDomain& domain, double safe_margin) {
  const int nj = measures.count();
  for (int iter = 0; iter < 40; ++iter) {
    Eigen::VectorXd F(nj);
    Eigen::MatrixXd J(nj, 2);
    Location loc = domain.locate(z);
    if (loc.kind != PointLocation::Inside || loc.boundary_distance < safe_margin) return false;
    double r = 0.0;
    for (int j = 0; j < nj; ++j) {
      double uj = measures.measure(j).evaluate_unchecked(z);
      Complex g = measures.measure(j).gradient_unchecked(z);
      F(j) = (k + 1) * uj + periods.values[j] - m[j];
      J(j, 0) = (k + 1) * g.real();
      J(j, 1) = (k + 1) * g.imag();
      r = std::max(r, std::abs(F(j)));
    }
    resid = r;
    if (r <= tol) return true;
    Eigen::Vector2d step = J.colPivHouseholderQr().solve(-F);
    if (!step.allFinite()) return false;
    double cap = 4.0 * safe_margin;  // keep steps at grid scale
    double len = step.norm();
    if (len > cap) step *= cap / len;
    z += 0.5 * Complex(step(0), step(1));
  }
  return false;
}

}  // namespace detail

// Extract the equality locus {z : (k+1)u_j(z) + c_j in Z for all j}.
// n = 2: marching squares on (k+1)u_1 + c_1 at each admissible integer
// level, vertices Newton-refined. n >= 3: cells whose corner intervals can
// satisfy all conditions simultaneously are seeded and refined by damped
// Newton; converged points are deduplicated by distance clustering.
inline LocusReport extract_locus(const LocusQuery& q) {
  if (!(q.tol > 0.0 && q.tol < 0.5)) throw ValidationError("locus: tol must be in (0, 0.5)");
  if (q.grid < 16) throw ValidationError("locus: grid resolution must be >= 16");
  q.weight.validate(q.domain);

  LocusReport rep;
  rep.k = q.weight.k;
  const int n = q.domain.connectivity();
  if (n == 1) return rep;  // no conditions: nothing to extract

  HarmonicMeasureSet measures = harmonic_measures(q.domain, q.nodes);
  auto cycles = standard_cycles(q.domain);
  PeriodVector periods = weight_periods(q.weight, q.domain, cycles);
  rep.periods = periods.values;

  detail::GridEval ev = detail::evaluate_grid(q.domain, measures, periods, q.weight.k, q.grid);
  rep.field = ev.field;
  const int k = q.weight.k;

  if (n == 2) {
    const double c1 = periods.values[0];
    // admissible integer levels: u_1 = (m - c1)/(k+1) must fall in (0,1)
    std::vector<int> levels;
    for (int m = static_cast<int>(std::floor(c1)) - 1; m <= static_cast<int>(std::ceil(c1 + k + 1)) + 1; ++m)
      if (m - c1 > 1e-12 && m - c1 < k + 1 - 1e-12) levels.push_back(m);

    const auto& ugrid = ev.u[0];
    auto fval = [&](int ix, int iy) -> double {
      double u = ugrid[static_cast<size_t>(iy) * q.grid + ix];
      return (k + 1) * u + c1;
    };

    for (int m : levels) {
      // marching squares: collect level-crossing segments per cell
      std::map<int64_t, int> edge_vertex;   // edge key -> vertex index
      std::vector<Complex> verts;
      std::vector<std::pair<int, int>> segs;
      auto edge_key = [&](int ix, int iy, bool horizontal) {
        return (static_cast<int64_t>(iy) * q.grid + ix) * 2 + (horizontal ? 0 : 1);
      };
      auto vertex_on_edge = [&](int ix, int iy, bool horizontal) {
        int64_t key = edge_key(ix, iy, horizontal);
        auto it = edge_vertex.find(key);
        if (it != edge_vertex.end()) return it->second;
        double fa = fval(ix, iy) - m;
        double fb = (horizontal ? fval(ix + 1, iy) : fval(ix, iy + 1)) - m;
        double s = fa / (fa - fb);
        Complex a = ev.field.point(ix, iy);
        Complex b = horizontal ? ev.field.point(ix + 1, iy) : ev.field.point(ix, iy + 1);
        verts.push_back(a + s * (b - a));
        edge_vertex[key] = static_cast<int>(verts.size()) - 1;
        return static_cast<int>(verts.size()) - 1;
      };
      for (int iy = 0; iy + 1 < q.grid; ++iy) {
        for (int ix = 0; ix + 1 < q.grid; ++ix) {
          double f00 = fval(ix, iy), f10 = fval(ix + 1, iy);
          double f01 = fval(ix, iy + 1), f11 = fval(ix + 1, iy + 1);
          if (!std::isfinite(f00) || !std::isfinite(f10) || !std::isfinite(f01) ||
              !std::isfinite(f11))
            continue;
          int code = (f00 > m) | ((f10 > m) << 1) | ((f11 > m) << 2) | ((f01 > m) << 3);
          if (code == 0 || code == 15) continue;
          // edges: 0 bottom, 1 right, 2 top, 3 left
          auto ev_edge = [&](int e) {
            switch (e) {
              case 0: return vertex_on_edge(ix, iy, true);
              case 1: return vertex_on_edge(ix + 1, iy, false);
              case 2: return vertex_on_edge(ix, iy + 1, true);
              default: return vertex_on_edge(ix, iy, false);
            }
          };
          static const int table[16][4] = {
              {-1, -1, -1, -1}, {3, 0, -1, -1}, {0, 1, -1, -1}, {3, 1, -1, -1},
              {1, 2, -1, -1},   {-2, 0, 0, 0},  {0, 2, -1, -1}, {3, 2, -1, -1},
              {2, 3, -1, -1},   {2, 0, -1, -1}, {-2, 0, 0, 0},  {2, 1, -1, -1},
              {1, 3, -1, -1},   {1, 0, -1, -1}, {0, 3, -1, -1}, {-1, -1, -1, -1}};
          if (table[code][0] == -2) {
            // saddle: disambiguate with the cell-center average
            double fc = 0.25 * (f00 + f10 + f01 + f11);
            bool center_hi = fc > m;
            if (code == 5) {
              if (center_hi) {
                segs.emplace_back(ev_edge(3), ev_edge(2));
                segs.emplace_back(ev_edge(1), ev_edge(0));
              } else {
                segs.emplace_back(ev_edge(3), ev_edge(0));
                segs.emplace_back(ev_edge(1), ev_edge(2));
              }
            } else {  // code == 10
              if (center_hi) {
                segs.emplace_back(ev_edge(0), ev_edge(3));
                segs.emplace_back(ev_edge(2), ev_edge(1));
              } else {
                segs.emplace_back(ev_edge(0), ev_edge(1));
                segs.emplace_back(ev_edge(2), ev_edge(3));
              }
            }
          } else if (table[code][0] >= 0) {
            segs.emplace_back(ev_edge(table[code][0]), ev_edge(table[code][1]));
          }
        }
      }
      if (segs.empty()) continue;

      // refine vertices along the gradient of F
      std::vector<bool> ok(verts.size(), true);
      if (q.refine) {
        for (size_t i = 0; i < verts.size(); ++i) {
          Complex z = verts[i];
          double resid = 0.0;
          bool conv = detail::newton_refine(z, resid, measures, periods, k, {m}, q.tol, q.domain,
                                            ev.mask_margin * 0.5);
          if (conv)
            verts[i] = z;
          else {
            ok[i] = false;
            rep.unresolved.push_back(verts[i]);
          }
        }
      }

      // chain segments into closed polylines
      std::multimap<int, int> adj;
      for (auto [a, b] : segs) {
        adj.emplace(a, b);
        adj.emplace(b, a);
      }
      std::vector<bool> used(verts.size(), false);
      for (size_t start = 0; start < verts.size(); ++start) {
        if (used[start]) continue;
        std::vector<int> chain{static_cast<int>(start)};
        used[start] = true;
        int cur = static_cast<int>(start), prev = -1;
        while (true) {
          auto range = adj.equal_range(cur);
          int next = -1;
          for (auto it = range.first; it != range.second; ++it) {
            if (it->second != prev && !used[it->second]) {
              next = it->second;
              break;
            }
          }
          if (next < 0) break;
          chain.push_back(next);
          used[next] = true;
          prev = cur;
          cur = next;
        }
        if (chain.size() < 8) continue;  // discard grid-noise fragments
        LocusCurve curve;
        curve.level = m;
        for (int idx : chain)
          if (ok[idx]) curve.points.push_back(verts[idx]);
        if (curve.points.size() >= 8) rep.curves.push_back(std::move(curve));
      }
    }
    // deterministic ordering: by level, then by first point
    std::sort(rep.curves.begin(), rep.curves.end(), [](const LocusCurve& a, const LocusCurve& b) {
      if (a.level != b.level) return a.level < b.level;
      if (a.points.front().real() != b.points.front().real())
        return a.points.front().real() < b.points.front().real();
      return a.points.front().imag() < b.points.front().imag();
    });
    return rep;
  }

  // n >= 3: seeded simultaneous refinement
  const double cell_diag = std::hypot(ev.field.dx, ev.field.dy);
  std::vector<LocusPoint> found;
  for (int iy = 0; iy + 1 < q.grid; ++iy) {
    for (int ix = 0; ix + 1 < q.grid; ++ix) {
      auto combos = detail::cell_seed_levels(ev, periods, k, ix, iy,
                                             std::numeric_limits<int>::min(),
                                             std::numeric_limits<int>::max());
      for (const auto& m : combos) {
        Complex z = ev.field.point(ix, iy) + Complex(0.5 * ev.field.dx, 0.5 * ev.field.dy);
        double resid = 0.0;
        if (detail::newton_refine(z, resid, measures, periods, k, m, q.tol, q.domain,
                                  ev.mask_margin * 0.5)) {
          found.push_back({m, z, resid});
        } else {
          rep.unresolved.push_back(z);
        }
      }
    }
  }
  // deduplicate by distance clustering (2 grid cells)
  std::sort(found.begin(), found.end(), [](const LocusPoint& a, const LocusPoint& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });
  for (const auto& p : found) {
    bool dup = false;
    for (const auto& kept : rep.points)
      if (std::abs(kept.z - p.z) < 2.0 * cell_diag && kept.levels == p.levels) dup = true;
    if (!dup) rep.points.push_back(p);
  }
  return rep;
}

enum class Feasibility { Impossible, Possible };

// With trivial weight the equality needs positive integers m_1..m_n summing
// to k+1, which requires k >= n-1.
inline Feasibility feasibility_bound(const PlanarDomain& domain, int k) {
  return k < domain.connectivity() - 1 ? Feasibility::Impossible : Feasibility::Possible;
}

struct EqualityPoint {
  int k;
  Complex z;
  double residual;
};

// Search over k <= k_max for a point where the trivial-weight equality holds
// on a 3-connected domain. Deterministic grid scan plus Newton per k;
// returns the smallest k that admits a point at the target residual.
inline std::optional<EqualityPoint> find_equality_point(const PlanarDomain& domain, int k_max,
                                                        double residual_target, int nodes = 256,
                                                        int grid = 96) {
  if (domain.connectivity() != 3)
    throw ValidationError("find_equality_point: the search requires a 3-connected domain");
  if (k_max > 200) throw ValidationError("find_equality_point: k_max is capped at 200");
  if (feasibility_bound(domain, k_max) == Feasibility::Impossible) return std::nullopt;

  HarmonicMeasureSet measures = harmonic_measures(domain, nodes);
  PeriodVector zero{std::vector<double>(measures.count(), 0.0)};
  detail::GridEval ev = detail::evaluate_grid(domain, measures, zero, 0, grid);

  for (int k = domain.connectivity() - 1; k <= k_max; ++k) {
    std::vector<LocusPoint> found;
    for (int iy = 0; iy + 1 < grid; ++iy) {
      for (int ix = 0; ix + 1 < grid; ++ix) {
        // trivial weight: admissible levels are the positive integers 1..k
        auto combos = detail::cell_seed_levels(ev, zero, k, ix, iy, 1, k);
        for (const auto& m : combos) {
          Complex z = ev.field.point(ix, iy) + Complex(0.5 * ev.field.dx, 0.5 * ev.field.dy);
          double resid = 0.0;
          if (detail::newton_refine(z, resid, measures, zero, k, m, residual_target, domain,
                                    ev.mask_margin * 0.5))
            found.push_back({m, z, resid});
        }
      }
    }
    if (!found.empty()) {
      std::sort(found.begin(), found.end(), [](const LocusPoint& a, const LocusPoint& b) {
        if (a.residual != b.residual) return a.residual < b.residual;
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
      });
      return EqualityPoint{k, found.front().z, found.front().residual};
    }
  }
  return std::nullopt;
}

}  // namespace suita
