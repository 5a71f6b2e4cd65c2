#include "geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace horizon::geodesic {

namespace {

using HeapEntry = std::pair<double, int>;
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

// Label-setting run; stops once `target` is settled when target >= 0.
std::vector<double> dijkstra(const MetricGrid& g, GridNode source, int target) {
  int n = g.node_count();
  std::vector<double> dist(n, kInf);
  MinHeap heap;
  int s = g.index(source);
  dist[s] = 0.0;
  heap.push({0.0, s});
  const auto& offsets = g.offsets();
  while (!heap.empty()) {
    auto [d, idx] = heap.top();
    heap.pop();
    if (d > dist[idx]) continue;
    if (idx == target) break;
    GridNode a = g.node(idx);
    for (auto [di, dj] : offsets) {
      GridNode b;
      if (!g.neighbor(a.i, a.j, di, dj, &b)) continue;
      double w = g.edge_weight(a.i, a.j, di, dj);
      double nd = d + w;
      int bi = g.index(b);
      if (nd < dist[bi]) {
        dist[bi] = nd;
        heap.push({nd, bi});
      }
    }
  }
  return dist;
}

}  // namespace

DistanceField distance_field(std::shared_ptr<const MetricGrid> grid, GridNode source) {
  if (source.i < 0 || source.i >= grid->nu() || source.j < 0 || source.j >= grid->nv())
    fail(ErrorCode::InvalidParameter, "distance_field source outside the grid");
  DistanceField f;
  f.source = source;
  f.error_bound = grid->error_bound();
  f.values = dijkstra(*grid, source, -1);
  f.grid = std::move(grid);
  return f;
}

double pairwise_distance(const MetricGrid& grid, GridNode p, GridNode q) {
  if (p == q) return 0.0;
  return dijkstra(grid, p, grid.index(q))[grid.index(q)];
}

namespace {

/* Shooting machinery.  In the chart the metric is rho(v)^2 du^2 + dv^2 and a
 * unit-speed geodesic conserves nu = rho^2 du/ds.  Along a v-monotone
 * segment,
 *    du/dv = nu / (rho sqrt(rho^2 - nu^2)),   ds/dv = rho / sqrt(rho^2 - nu^2),
 * with an integrable 1/sqrt singularity at a turning point rho(v_t) = nu.
 */
struct Rho {
  const SurfaceModel* s;
  double operator()(double v) const { return s->metric_radius(v); }
  double deriv(double v) const { return s->metric_radius_deriv(v); }
};

struct SegmentResult {
  double du = 0.0;
  double len = 0.0;
};

// Integrates a v-monotone segment from a to b (either order).  If
// `singular_at_a`, substitutes v = a + (b-a) w^2 to absorb the turning-point
// singularity at a.
SegmentResult integrate_segment(const Rho& rho, double nu, double a, double b,
                                bool singular_at_a, double tol) {
  SegmentResult out;
  if (a == b) return out;
  auto du_den = [&](double v) {
    double r = rho(v);
    double disc = std::max(r * r - nu * nu, 0.0);
    return std::pair<double, double>{r, std::sqrt(disc)};
  };
  if (!singular_at_a) {
    out.du = quad_adaptive(
        [&](double v) {
          auto [r, root] = du_den(v);
          return nu / std::max(r * root, 1e-300);
        },
        a, b, tol, 48);
    out.len = quad_adaptive(
        [&](double v) {
          auto [r, root] = du_den(v);
          return r / std::max(root, 1e-300);
        },
        a, b, tol, 48);
    return out;
  }
  double span = b - a;
  auto v_of_w = [&](double w) { return a + span * w * w; };
  // Near w=0: rho^2-nu^2 ~ 2 nu rho'(a) * span * w^2, so the transformed
  // integrands are bounded; evaluate the w=0 limit analytically.
  double slope = std::fabs(rho.deriv(a));
  double lim_factor = slope > 0 ? 1.0 / std::sqrt(2.0 * nu * slope * std::fabs(span)) : 0.0;
  out.du = quad_adaptive(
      [&](double w) {
        if (w == 0.0) return 2.0 * std::fabs(span) * lim_factor * nu / std::max(nu, 1e-300);
        double v = v_of_w(w);
        auto [r, root] = du_den(v);
        return 2.0 * span * w * nu / std::max(r * root, 1e-300);
      },
      0.0, 1.0, tol, 48);
  out.len = quad_adaptive(
      [&](double w) {
        if (w == 0.0) return 2.0 * std::fabs(span) * lim_factor;
        double v = v_of_w(w);
        auto [r, root] = du_den(v);
        return 2.0 * span * w * r / std::max(root, 1e-300);
      },
      0.0, 1.0, tol, 48);
  return out;
}

struct Branch {
  // Returns (du, len) for Clairaut constant nu, or du = NaN when infeasible.
  std::function<SegmentResult(double)> shoot;
  double nu_lo = 0.0;
  double nu_hi = 0.0;
};

constexpr int kScan = 96;

// Minimum of rho over [a, b], sampled densely.
double rho_min(const Rho& rho, double a, double b) {
  double m = kInf;
  for (int k = 0; k <= kScan; ++k) m = std::min(m, rho(a + (b - a) * k / kScan));
  return m;
}

// Finds v_t below `vmin` (resp. above `vmax`) with rho(v_t) = nu by bisection
// over a scan bracket; returns NaN if none.
double find_turn(const Rho& rho, double nu, double from, double limit) {
  double prev = from;
  double prev_val = rho(prev) - nu;
  for (int k = 1; k <= kScan; ++k) {
    double v = from + (limit - from) * k / kScan;
    double val = rho(v) - nu;
    if ((prev_val > 0) != (val > 0) || val == 0.0) {
      double lo = prev, hi = v;
      for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        ((rho(mid) - nu > 0) == (prev_val > 0) ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = v;
    prev_val = val;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// Solves shoot(nu).du == target over [lo, hi] by bracket scanning + bisection;
// appends every solution's length to `out`.
void solve_du(const Branch& br, double target, double tol, std::vector<double>* out) {
  if (!(br.nu_hi > br.nu_lo)) return;
  double prev_nu = br.nu_lo;
  SegmentResult prev = br.shoot(prev_nu);
  for (int k = 1; k <= kScan; ++k) {
    double nu = br.nu_lo + (br.nu_hi - br.nu_lo) * k / kScan;
    SegmentResult cur = br.shoot(nu);
    bool prev_ok = std::isfinite(prev.du), cur_ok = std::isfinite(cur.du);
    if (prev_ok && std::fabs(prev.du - target) < 1e-12) out->push_back(prev.len);
    if (prev_ok && cur_ok && (prev.du - target) * (cur.du - target) < 0.0) {
      double lo = prev_nu, hi = nu;
      bool lo_below = prev.du < target;
      SegmentResult mid_res;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        mid_res = br.shoot(mid);
        if (!std::isfinite(mid_res.du)) break;
        if (std::fabs(mid_res.du - target) < tol * 1e-3) break;
        ((mid_res.du < target) == lo_below ? lo : hi) = mid;
      }
      if (std::isfinite(mid_res.len)) out->push_back(mid_res.len);
    }
    prev_nu = nu;
    prev = cur;
  }
  if (std::isfinite(prev.du) && std::fabs(prev.du - target) < 1e-12)
    out->push_back(prev.len);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SegmentResult infeasible() { return {kNaN, kNaN}; }

}  // namespace

double clairaut_distance(const SurfaceModel& surface, double u1, double v1, double u2,
                         double v2, double tol) {
  if (surface.kind() == surfaces::SurfaceKind::FlatPlane)
    fail(ErrorCode::InvalidParameter,
         "clairaut_distance needs a rotational cover or warped product");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidParameter, "tol must be positive");

  Rho rho{&surface};
  Interval dom = surface.domain_v();
  double dom_lo = std::max(dom.lo, std::min(v1, v2) - 64.0);
  double dom_hi = std::min(dom.hi, std::max(v1, v2) + 64.0);

  std::vector<double> windings{0.0};
  if (surface.wrapped_u()) {
    double p = surface.u_period();
    windings = {0.0, p, -p, 2 * p, -2 * p};
  }

  double vmin = std::min(v1, v2), vmax = std::max(v1, v2);
  double hull_min = rho_min(rho, vmin, vmax);
  double global_min = std::min(rho_min(rho, dom_lo, dom_hi), hull_min);
  double hull_max_dev = 0.0;
  for (int k = 0; k <= kScan; ++k)
    hull_max_dev =
        std::max(hull_max_dev, std::fabs(rho(vmin + (vmax - vmin) * k / kScan) - hull_min));

  std::vector<double> candidates;
  for (double wind : windings) {
    double du = std::fabs((u2 - u1) + wind);

    // Flat-band shortcut: rho constant on the hull and nowhere smaller
    // outside, so the strip geometry is exactly Euclidean.
    if (hull_max_dev <= 1e-12 * hull_min && global_min >= hull_min * (1.0 - 1e-12)) {
      double dv = vmax - vmin;
      candidates.push_back(std::hypot(hull_min * du, dv));
      continue;
    }

    if (du < 1e-14) {
      candidates.push_back(vmax - vmin);  // meridian
      continue;
    }

    // Parallel circle at a critical level (equator or flat band through both
    // endpoints at equal v).
    if (v1 == v2 && std::fabs(rho.deriv(v1)) < 1e-9)
      candidates.push_back(rho(v1) * du);

    // Monotone branch v1 -> v2.
    if (vmax > vmin) {
      Branch b0;
      b0.nu_lo = 0.0;
      b0.nu_hi = hull_min * (1.0 - 1e-13);
      b0.shoot = [&](double nu) {
        return integrate_segment(rho, nu, vmin, vmax, false, tol * 1e-3);
      };
      solve_du(b0, du, tol, &candidates);
    }

    // Single-turn branches: descend below vmin (or climb above vmax), turn at
    // rho(v_t) = nu, return.  Feasible nu lies below the hull minimum.
    for (int side = 0; side < 2; ++side) {
      double limit = side == 0 ? dom_lo : dom_hi;
      double start = side == 0 ? vmin : vmax;
      double outer_min = rho_min(rho, std::min(start, limit), std::max(start, limit));
      Branch b1;
      b1.nu_lo = std::max(outer_min * (1.0 + 1e-10), 1e-12);
      b1.nu_hi = hull_min * (1.0 - 1e-13);
      if (!(b1.nu_hi > b1.nu_lo)) continue;
      b1.shoot = [&, limit, start, side](double nu) {
        double vt = find_turn(rho, nu, start, limit);
        if (!std::isfinite(vt)) return infeasible();
        // Both legs run from the turning point outward.
        SegmentResult leg1 = integrate_segment(rho, nu, vt, v1, true, tol * 1e-3);
        SegmentResult leg2 = integrate_segment(rho, nu, vt, v2, true, tol * 1e-3);
        (void)side;
        return SegmentResult{std::fabs(leg1.du) + std::fabs(leg2.du),
                             std::fabs(leg1.len) + std::fabs(leg2.len)};
      };
      solve_du(b1, du, tol, &candidates);
    }
  }

  double best = kInf;
  for (double c : candidates)
    if (std::isfinite(c)) best = std::min(best, c);
  if (!std::isfinite(best))
    fail(ErrorCode::NoConvergence, "clairaut shooting failed to bracket the target");
  return best;
}

}  // namespace horizon::geodesic
