#include "boundary.hpp"

#include <algorithm>
#include <cmath>

namespace horizon::boundary {

ProbeSet ProbeSet::uniform(std::vector<GridNode> pts, std::size_t basepoint_index) {
  ProbeSet p;
  p.points = std::move(pts);
  p.basepoint = basepoint_index;
  p.weights.assign(p.points.size(), 1.0 / double(p.points.size()));
  p.validate();
  return p;
}

void ProbeSet::validate() const {
  if (points.empty()) fail(ErrorCode::InvalidParameter, "probe set is empty");
  if (basepoint >= points.size())
    fail(ErrorCode::InvalidParameter, "probe basepoint outside the point list");
  if (weights.size() != points.size())
    fail(ErrorCode::InvalidParameter, "probe weights/points size mismatch");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) fail(ErrorCode::InvalidParameter, "probe weights must be positive");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    fail(ErrorCode::InvalidParameter, "probe weights must sum to 1");
}

GromovPoint gromov_embed(const DistanceField& field, std::shared_ptr<const ProbeSet> probe) {
  probe->validate();
  GromovPoint g;
  g.values.resize(probe->points.size());
  double base = field.at(probe->points[probe->basepoint]);
  for (std::size_t k = 0; k < probe->points.size(); ++k)
    g.values[k] = field.at(probe->points[k]) - base;
  g.probe = std::move(probe);
  return g;
}

double quotient_distance(const GromovPoint& a, const GromovPoint& b) {
  if (a.probe.get() != b.probe.get() || a.values.size() != b.values.size())
    fail(ErrorCode::MismatchedProbe, "quotient_distance needs a shared probe set");
  const auto& w = a.probe->weights;
  double n = double(w.size());
  double best = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k)
    best = std::max(best, w[k] * n * std::fabs(a.values[k] - b.values[k]));
  return best;
}

namespace {

// Embeds a row of truncation values (a function on the probes) as the class
// vanishing at the basepoint.
GromovPoint embed_row(const std::vector<double>& row, std::shared_ptr<const ProbeSet> probe) {
  GromovPoint g;
  g.values.resize(row.size());
  double base = row[probe->basepoint];
  for (std::size_t k = 0; k < row.size(); ++k) g.values[k] = row[k] - base;
  g.probe = std::move(probe);
  return g;
}

double cell_diagonal(const MetricGrid& g) {
  double guu = 0.0;
  for (int j = 0; j < g.nv(); ++j) guu = std::max(guu, g.g_uu_at_row(j));
  return std::sqrt(guu * g.hu() * g.hu() + g.hv() * g.hv());
}

}  // namespace

BusemannSample busemann_truncations(std::shared_ptr<const MetricGrid> grid,
                                    const std::vector<CurveSample>& curve,
                                    std::shared_ptr<const ProbeSet> probe) {
  probe->validate();
  if (curve.size() < 2)
    fail(ErrorCode::InvalidParameter, "curve needs at least two samples");
  for (std::size_t k = 1; k < curve.size(); ++k)
    if (!(curve[k].t > curve[k - 1].t))
      fail(ErrorCode::InvalidParameter, "curve parameters must be strictly increasing");

  BusemannSample s;
  s.grid = grid;
  s.curve = curve;
  s.probe = probe;
  s.curve_nodes.reserve(curve.size());
  for (const auto& c : curve) s.curve_nodes.push_back(grid->nearest(c.u, c.v));

  // Unit-speed-or-lower audit: grid distance between consecutive samples may
  // not exceed the parameter step beyond stencil error and node snapping.
  double snap = 2.0 * cell_diagonal(*grid);
  double eb = grid->error_bound();
  for (std::size_t k = 1; k < s.curve_nodes.size(); ++k) {
    double dt = curve[k].t - curve[k - 1].t;
    double d = geodesic::pairwise_distance(*grid, s.curve_nodes[k - 1], s.curve_nodes[k]);
    if (d > dt * (1.0 + eb) + snap)
      fail(ErrorCode::NotUnitSpeed,
           "curve segment " + std::to_string(k) + " moves faster than unit speed (" +
               format_double(d) + " > " + format_double(dt) + ")");
  }

  s.truncations.assign(curve.size(), std::vector<double>(probe->points.size(), 0.0));
  parallel_for(curve.size(), [&](std::size_t k) {
    DistanceField f = geodesic::distance_field(grid, s.curve_nodes[k]);
    for (std::size_t x = 0; x < probe->points.size(); ++x)
      s.truncations[k][x] = curve[k].t - f.at(probe->points[x]);
  });
  s.status = BusemannStatus::Undetermined;
  return s;
}

BusemannStatus busemann_limit(BusemannSample& sample, const BusemannLimitOptions& opt) {
  int window = opt.window;
  int steps = int(sample.truncations.size());
  if (window < 1) fail(ErrorCode::InvalidParameter, "window must be >= 1");
  if (steps < 2 * window)
    fail(ErrorCode::InsufficientData, "need at least 2*window truncation steps");

  std::size_t probes = sample.probe->points.size();
  double t_last = sample.curve[steps - 1].t;
  double t_win = sample.curve[steps - 1 - window].t;
  double span = t_last - t_win;

  double slope_min = kInf, slope_max = -kInf;
  bool all_small = true;
  for (std::size_t x = 0; x < probes; ++x) {
    for (int k = steps - window; k < steps; ++k) {
      double inc = sample.truncations[k][x] - sample.truncations[k - 1][x];
      if (!(inc < opt.tol)) all_small = false;
    }
    double slope = (sample.truncations[steps - 1][x] - sample.truncations[steps - 1 - window][x]) / span;
    slope_min = std::min(slope_min, slope);
    slope_max = std::max(slope_max, slope);
  }
  sample.final_window_slope_min = slope_min;
  sample.final_window_slope_max = slope_max;

  if (all_small) {
    sample.status = BusemannStatus::Converged;
    sample.limit = embed_row(sample.truncations.back(), sample.probe);
    return sample.status;
  }
  if (std::isfinite(opt.growth_threshold)) {
    for (std::size_t x = 0; x < probes; ++x)
      if (sample.truncations[steps - 1][x] - sample.truncations[0][x] >
          opt.growth_threshold * (t_last - sample.curve[0].t)) {
        sample.status = BusemannStatus::Diverges;
        return sample.status;
      }
  }
  sample.status = BusemannStatus::Undetermined;
  return sample.status;
}

CoincidenceReport coincidence_test(std::shared_ptr<const MetricGrid> grid,
                                   const std::vector<std::vector<GridNode>>& escape_sequences,
                                   const std::vector<std::vector<CurveSample>>& curve_family,
                                   std::shared_ptr<const ProbeSet> probe, double tol) {
  probe->validate();
  if (!(tol > 0.0)) fail(ErrorCode::InvalidParameter, "tol must be positive");
  CoincidenceReport rep;
  rep.tol = tol;
  rep.separation_threshold = 10.0 * tol;

  // Escape audit: distances from the basepoint must keep growing.
  {
    DistanceField base = geodesic::distance_field(grid, probe->points[probe->basepoint]);
    for (const auto& seq : escape_sequences) {
      if (seq.size() < 3)
        fail(ErrorCode::InvalidParameter, "escape sequences need at least 3 points");
      double prev = -kInf;
      for (const auto& n : seq) {
        double d = base.at(n);
        if (d + 2.0 * cell_diagonal(*grid) < prev)
          fail(ErrorCode::InvalidParameter, "sequence does not escape (distance drops)");
        prev = std::max(prev, d);
      }
    }
  }

  // Gromov points of every sequence element, in parallel.
  std::vector<std::vector<GromovPoint>> seq_points(escape_sequences.size());
  std::vector<std::size_t> flat;
  for (std::size_t s = 0; s < escape_sequences.size(); ++s) {
    seq_points[s].resize(escape_sequences[s].size());
    for (std::size_t k = 0; k < escape_sequences[s].size(); ++k) flat.push_back((s << 20) | k);
  }
  parallel_for(flat.size(), [&](std::size_t idx) {
    std::size_t s = flat[idx] >> 20, k = flat[idx] & 0xfffff;
    DistanceField f = geodesic::distance_field(grid, escape_sequences[s][k]);
    seq_points[s][k] = gromov_embed(f, probe);
  });

  for (std::size_t s = 0; s < escape_sequences.size(); ++s) {
    const auto& pts = seq_points[s];
    bool cauchy = true;
    std::size_t n = pts.size();
    for (std::size_t k = (n >= 3 ? n - 3 : 0); k + 1 < n; ++k)
      if (quotient_distance(pts[k], pts[k + 1]) >= tol) cauchy = false;
    if (cauchy) {
      rep.stabilized_sequences.push_back(s);
      rep.gromov_limits.push_back(pts.back());
    }
  }
  if (rep.gromov_limits.empty()) {
    rep.verdict = CoincidenceVerdict::Undetermined;
    return rep;  // no-cauchy-subsequence
  }

  // Converged Busemann family.
  std::vector<BusemannSample> samples(curve_family.size());
  parallel_for(curve_family.size(), [&](std::size_t c) {
    samples[c] = busemann_truncations(grid, curve_family[c], probe);
  });
  BusemannLimitOptions lopt;
  lopt.tol = tol;
  for (std::size_t c = 0; c < samples.size(); ++c) {
    if (busemann_limit(samples[c], lopt) == BusemannStatus::Converged) {
      rep.busemann_family.push_back(*samples[c].limit);
      rep.family_curve_index.push_back(int(c));
    }
  }
  rep.vacuous_family = rep.busemann_family.empty();

  bool any_unmatched = false;
  for (std::size_t g = 0; g < rep.gromov_limits.size(); ++g) {
    CoincidenceMatch m;
    m.sequence_index = rep.stabilized_sequences[g];
    for (std::size_t b = 0; b < rep.busemann_family.size(); ++b) {
      double d = quotient_distance(rep.gromov_limits[g], rep.busemann_family[b]);
      if (d < m.min_distance) {
        m.min_distance = d;
        if (d <= rep.separation_threshold) m.matching_curve = rep.family_curve_index[b];
      }
    }
    if (!(m.min_distance <= rep.separation_threshold)) any_unmatched = true;
    rep.matches.push_back(m);
  }
  rep.verdict = any_unmatched ? CoincidenceVerdict::CounterexampleCandidate
                              : CoincidenceVerdict::CoincideOnSample;
  return rep;
}

int count_ends(const MetricGrid& grid, const std::vector<double>& radii, GridNode basepoint) {
  if (radii.size() < 2) fail(ErrorCode::InvalidParameter, "need at least two radii");
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(radii[k] > radii[k - 1]))
      fail(ErrorCode::InvalidParameter, "radii must be increasing");

  auto gridp = std::make_shared<MetricGrid>(grid);
  DistanceField f = geodesic::distance_field(gridp, basepoint);

  // Largest radius must stay well inside: the ball may not touch the grid
  // boundary.
  double boundary_min = kInf;
  for (int i = 0; i < grid.nu(); ++i) {
    boundary_min = std::min(boundary_min, f.at({i, 0}));
    boundary_min = std::min(boundary_min, f.at({i, grid.nv() - 1}));
  }
  if (!grid.wrap_u())
    for (int j = 0; j < grid.nv(); ++j) {
      boundary_min = std::min(boundary_min, f.at({0, j}));
      boundary_min = std::min(boundary_min, f.at({grid.nu() - 1, j}));
    }
  if (radii.back() >= boundary_min)
    fail(ErrorCode::InvalidParameter, "largest radius reaches the grid boundary");

  std::vector<int> counts;
  std::vector<int> comp(grid.node_count());
  for (double R : radii) {
    std::fill(comp.begin(), comp.end(), -1);
    int ncomp = 0;
    std::vector<int> stack;
    std::vector<char> touches;
    for (int start = 0; start < grid.node_count(); ++start) {
      if (comp[start] >= 0 || f.values[start] <= R) continue;
      bool touch = false;
      stack.push_back(start);
      comp[start] = ncomp;
      while (!stack.empty()) {
        int idx = stack.back();
        stack.pop_back();
        GridNode a = grid.node(idx);
        if (a.j == 0 || a.j == grid.nv() - 1 ||
            (!grid.wrap_u() && (a.i == 0 || a.i == grid.nu() - 1)))
          touch = true;
        for (auto [di, dj] : grid.offsets()) {
          GridNode b;
          if (!grid.neighbor(a.i, a.j, di, dj, &b)) continue;
          int bi = grid.index(b);
          if (comp[bi] >= 0 || f.values[bi] <= R) continue;
          comp[bi] = ncomp;
          stack.push_back(bi);
        }
      }
      touches.push_back(touch ? 1 : 0);
      ++ncomp;
    }
    int unbounded = 0;
    for (char t : touches) unbounded += t;
    counts.push_back(unbounded);
  }
  if (counts[counts.size() - 1] != counts[counts.size() - 2])
    fail(ErrorCode::NotStabilized, "end count did not stabilize over the last two radii");
  return counts.back();
}

WarpedBoundaryKind classify_warped_boundary(const cosmo::ScaleFactorSpec& warp, cosmo::End end,
                                            double split_point, double tol) {
  // Monotonicity hypothesis on the relevant side of the split point.
  Interval dom = warp.domain;
  double lo, hi;
  if (end == cosmo::End::Omega) {
    lo = split_point;
    hi = std::min(dom.hi, split_point + 1e4);
  } else {
    lo = std::max(dom.lo, split_point - 1e4);
    hi = split_point;
  }
  if (!(lo < hi)) fail(ErrorCode::InvalidParameter, "split_point outside the warp domain");
  double prev = warp(end == cosmo::End::Omega ? lo : hi);
  for (int k = 1; k <= 512; ++k) {
    double x = end == cosmo::End::Omega ? lo + (hi - lo) * k / 512.0
                                        : hi - (hi - lo) * k / 512.0;
    double w = warp(x);
    if (w < prev * (1.0 - 1e-9))
      fail(ErrorCode::HypothesisViolated,
           "warp is not monotone toward the chosen end near x = " + format_double(x));
    prev = w;
  }

  cosmo::ConvergenceVerdict v = cosmo::integral_converges(
      warp, cosmo::IntegralTransform::ReciprocalSquare, end, tol, split_point);
  if (v.status == cosmo::ConvergenceStatus::Finite) return WarpedBoundaryKind::ManifoldK;
  if (v.status == cosmo::ConvergenceStatus::Infinite) return WarpedBoundaryKind::Point;
  fail(ErrorCode::UndeterminedRange, "could not decide the 1/a^2 integral");
}

}  // namespace horizon::boundary
