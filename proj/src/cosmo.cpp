#include "cosmo.hpp"

#include <algorithm>
#include <cmath>

#include "boundary.hpp"
#include "geodesic.hpp"

namespace horizon::cosmo {

ScaleFactorSpec make_scale_factor(const std::string& expression_text, Interval domain) {
  ScaleFactorSpec s;
  s.expression = expr::parse(expression_text);
  s.domain = domain;
  double lo = std::max(domain.lo, -1e4), hi = std::min(domain.hi, 1e4);
  if (!(lo < hi)) fail(ErrorCode::InvalidParameter, "scale factor domain is empty");
  for (int k = 0; k <= 4096; ++k) {
    double t = lo + (hi - lo) * k / 4096.0;
    double a = s.expression(t);
    if (!(a > 0.0) || !std::isfinite(a))
      fail(ErrorCode::InvalidParameter,
           "scale factor must be positive and finite (fails near t = " + format_double(t) +
               ")");
  }
  if (domain.hi == kInf) s.asym_plus = s.expression.asymptotic(true);
  if (domain.lo == -kInf) s.asym_minus = s.expression.asymptotic(false);
  return s;
}

namespace {

expr::Asymptotic transform_asym(const expr::Asymptotic& a, IntegralTransform tr) {
  using expr::Asymptotic;
  if (tr == IntegralTransform::Identity) return a;
  int power = tr == IntegralTransform::Reciprocal ? 1 : 2;
  switch (a.kind) {
    case Asymptotic::Poly:
      if (a.coeff == 0.0) return Asymptotic::of(Asymptotic::Indeterminate);
      return Asymptotic::poly(std::pow(a.coeff, -power), -power * a.exponent,
                              -power * a.log_power);
    case Asymptotic::ExpGrowth: return Asymptotic::of(Asymptotic::ExpDecay);
    case Asymptotic::ExpDecay: return Asymptotic::of(Asymptotic::ExpGrowth);
    default: return a;
  }
}

double apply_transform(double a, IntegralTransform tr) {
  switch (tr) {
    case IntegralTransform::Identity: return a;
    case IntegralTransform::Reciprocal: return 1.0 / a;
    case IntegralTransform::ReciprocalSquare: return 1.0 / (a * a);
  }
  return a;
}

// Signed sample coordinate going toward the end: x in [0, inf), point(x).
struct Toward {
  double origin;
  double sign;  // +1 toward +inf / upper, -1 toward -inf / lower
  double at(double x) const { return origin + sign * x; }
};

ConvergenceVerdict asymptotic_rule(const expr::Asymptotic& fa) {
  using expr::Asymptotic;
  ConvergenceVerdict v;
  v.method = DecisionMethod::AsymptoticRule;
  switch (fa.kind) {
    case Asymptotic::ExpDecay: v.status = ConvergenceStatus::Finite; break;
    case Asymptotic::ExpGrowth: v.status = ConvergenceStatus::Infinite; break;
    case Asymptotic::Poly:
      if (fa.exponent < -1.0)
        v.status = ConvergenceStatus::Finite;
      else if (fa.exponent > -1.0)
        v.status = ConvergenceStatus::Infinite;
      else
        v.status = fa.log_power <= -2 ? ConvergenceStatus::Finite
                                      : ConvergenceStatus::Infinite;
      break;
    default: v.status = ConvergenceStatus::Undetermined;
  }
  return v;
}

// Quadrature with geometrically sampled partial integrals; the increment
// ratio separates summable tails from (log-)divergent ones.
ConvergenceVerdict quadrature_decision(const std::function<double(double)>& f,
                                       const Toward& tw, bool infinite_end,
                                       double end_distance, double tol) {
  ConvergenceVerdict v;
  v.method = DecisionMethod::QuadratureWithTailBound;
  std::vector<double> increments;
  double total = 0.0;
  double x0 = 0.0;
  double x1 = infinite_end ? 8.0 : end_distance * 0.5;
  const int kRounds = infinite_end ? 24 : 40;
  for (int round = 0; round < kRounds; ++round) {
    double inc = quad_adaptive([&](double x) { return f(tw.at(x)); }, x0, x1,
                               tol * 1e-3, 36);
    increments.push_back(inc);
    total += inc;
    x0 = x1;
    x1 = infinite_end ? x1 * 2.0 : end_distance - (end_distance - x1) * 0.5;
    if (increments.size() >= 3) {
      double g2 = increments[increments.size() - 1];
      double g1 = increments[increments.size() - 2];
      double g0 = increments[increments.size() - 3];
      if (g1 <= 0.0 || g0 <= 0.0) {
        if (g2 <= tol && g1 <= tol) {  // integrand died out numerically
          v.status = ConvergenceStatus::Finite;
          v.value = total;
          v.tail_bound = std::max(g2, 0.0);
          return v;
        }
        continue;
      }
      double r1 = g2 / g1, r0 = g1 / g0;
      if (r1 <= 0.9 && r0 <= 0.9) {
        double r = std::max(r1, r0);
        double tail = g2 * r / (1.0 - r);
        if (tail < tol || round + 1 == kRounds) {
          v.status = ConvergenceStatus::Finite;
          v.value = total + tail;
          v.tail_bound = tail;
          return v;
        }
      }
      if (r1 >= 0.999 && r0 >= 0.999) {
        v.status = ConvergenceStatus::Infinite;
        return v;
      }
    }
  }
  v.status = ConvergenceStatus::Undetermined;
  return v;
}

// Value of a rule-decided finite integral: quadrature to X plus an analytic
// tail estimate from the leading behavior.
void fill_finite_value(ConvergenceVerdict& v, const std::function<double(double)>& f,
                       const Toward& tw, const expr::Asymptotic& fa, double tol) {
  using expr::Asymptotic;
  double X = 8.0;
  double tail = kInf;
  for (int it = 0; it < 40; ++it) {
    double fx = f(tw.at(X));
    if (fa.kind == Asymptotic::Poly && fa.exponent < -1.0) {
      tail = fx * X / (-fa.exponent - 1.0);
    } else {
      double fx1 = f(tw.at(X + 1.0));
      double lambda = (fx > 0 && fx1 > 0) ? std::log(fx / fx1) : 1.0;
      tail = lambda > 1e-6 ? fx / lambda : fx * X;
    }
    if (tail < 0.5 * tol || X > 1e9) break;
    X *= 2.0;
  }
  double base = quad_adaptive([&](double x) { return f(tw.at(x)); }, 0.0, X, tol * 0.25, 44);
  v.value = base + tail;
  v.tail_bound = tail;
}

}  // namespace

ConvergenceVerdict integral_converges(const ScaleFactorSpec& spec, IntegralTransform transform,
                                      End end, double tol, double from) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidParameter, "tol must be positive");
  double endpoint = end == End::Omega ? spec.domain.hi : spec.domain.lo;
  bool infinite_end = !std::isfinite(endpoint);
  Toward tw{from, end == End::Omega ? 1.0 : -1.0};
  auto f = [&](double t) {
    double a = spec(t);
    if (!(a > 0.0))
      fail(ErrorCode::NonpositiveIntegrand,
           "integrand is not positive at t = " + format_double(t));
    return apply_transform(a, transform);
  };

  if (infinite_end) {
    expr::Asymptotic fa =
        transform_asym(end == End::Omega ? spec.asym_plus : spec.asym_minus, transform);
    ConvergenceVerdict v = asymptotic_rule(fa);
    if (v.status == ConvergenceStatus::Finite) {
      fill_finite_value(v, f, tw, fa, tol);
      return v;
    }
    if (v.status == ConvergenceStatus::Infinite) return v;
    return quadrature_decision(f, tw, true, 0.0, tol);
  }
  double dist = std::fabs(endpoint - from);
  if (!(dist > 0.0)) fail(ErrorCode::InvalidParameter, "from coincides with the end");
  return quadrature_decision(f, tw, false, dist, tol);
}

ConvergenceVerdict integral_converges_forced(const ScaleFactorSpec& spec,
                                             IntegralTransform transform, End end, double tol,
                                             double from, DecisionMethod method) {
  double endpoint = end == End::Omega ? spec.domain.hi : spec.domain.lo;
  bool infinite_end = !std::isfinite(endpoint);
  Toward tw{from, end == End::Omega ? 1.0 : -1.0};
  auto f = [&](double t) { return apply_transform(spec(t), transform); };
  if (method == DecisionMethod::QuadratureWithTailBound)
    return quadrature_decision(f, tw, infinite_end,
                               infinite_end ? 0.0 : std::fabs(endpoint - from), tol);
  if (!infinite_end) {
    ConvergenceVerdict v;
    v.status = ConvergenceStatus::Undetermined;
    return v;
  }
  expr::Asymptotic fa =
      transform_asym(end == End::Omega ? spec.asym_plus : spec.asym_minus, transform);
  ConvergenceVerdict v = asymptotic_rule(fa);
  if (v.status == ConvergenceStatus::Finite) fill_finite_value(v, f, tw, fa, tol);
  return v;
}

ConformalReduction conformal_reduce(const ScaleFactorSpec& spec, double horizon, double tol) {
  if (spec.domain.lo != -kInf || spec.domain.hi != kInf)
    fail(ErrorCode::InvalidParameter, "conformal reduction expects a scale factor on all of R");
  ConformalReduction red;
  const int kSteps = 256;
  std::vector<double> ts(kSteps + 1);
  for (int k = 0; k <= kSteps; ++k) ts[k] = -horizon + 2.0 * horizon * k / kSteps;
  // Cumulative conformal time with tau(0) = 0.
  std::vector<double> tau(kSteps + 1, 0.0);
  int zero_index = kSteps / 2;
  auto rec = [&](double t) { return 1.0 / spec(t); };
  for (int k = zero_index + 1; k <= kSteps; ++k)
    tau[k] = tau[k - 1] + quad_adaptive(rec, ts[k - 1], ts[k], tol, 36);
  for (int k = zero_index - 1; k >= 0; --k)
    tau[k] = tau[k + 1] - quad_adaptive(rec, ts[k], ts[k + 1], tol, 36);
  red.tau_table.reserve(ts.size());
  for (int k = 0; k <= kSteps; ++k) red.tau_table.emplace_back(ts[k], tau[k]);

  ConvergenceVerdict fut =
      integral_converges(spec, IntegralTransform::Reciprocal, End::Omega, tol, 0.0);
  ConvergenceVerdict past =
      integral_converges(spec, IntegralTransform::Reciprocal, End::Alpha, tol, 0.0);
  if (fut.status == ConvergenceStatus::Undetermined ||
      past.status == ConvergenceStatus::Undetermined)
    fail(ErrorCode::UndeterminedRange, "conformal time range could not be decided");
  red.future_finite = fut.status == ConvergenceStatus::Finite;
  red.past_finite = past.status == ConvergenceStatus::Finite;
  red.tau_future = red.future_finite ? fut.value : kInf;
  red.tau_past = red.past_finite ? -past.value : -kInf;
  return red;
}

/* ---------------- obstruction pipelines ---------------- */

namespace {

using boundary::CurveSample;
using boundary::ProbeSet;
using surfaces::GridNode;
using surfaces::MetricGrid;
using surfaces::SurfaceKind;
using surfaces::SurfaceModel;

struct StaticSetup {
  std::shared_ptr<const MetricGrid> grid;
  GridNode basepoint;
  std::vector<double> end_radii;
  std::shared_ptr<const ProbeSet> probe;
  std::vector<std::vector<GridNode>> sequences;
  std::vector<std::vector<CurveSample>> curves;
};

// Chart-straight polyline through the given nodes, parametrized by the exact
// metric length of each segment (unit speed by construction).
std::vector<CurveSample> polyline_curve(const MetricGrid& g, const std::vector<GridNode>& nodes) {
  std::vector<CurveSample> c;
  c.reserve(nodes.size());
  double t = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    auto [u, v] = g.chart_of(nodes[k]);
    if (k > 0) {
      auto [u0, v0] = g.chart_of(nodes[k - 1]);
      const SurfaceModel& s = g.surface();
      double du = u - u0, dv = v - v0;
      t += quad_adaptive(
          [&](double x) {
            double vv = v0 + dv * x;
            return std::sqrt(s.g_uu(vv) * du * du + dv * dv);
          },
          0.0, 1.0, 1e-12, 30);
    }
    c.push_back({t, u, v});
  }
  return c;
}

// Waypoints from + k*(step_i, step_j), clamped at the lattice edge (u wraps
// on periodic grids).
std::vector<GridNode> strided_line(const MetricGrid& g, GridNode from, int step_i,
                                   int step_j, int count) {
  std::vector<GridNode> nodes{from};
  int i = from.i, j = from.j;
  for (int k = 0; k < count; ++k) {
    i += step_i;
    j += step_j;
    if (j < 0 || j >= g.nv()) break;
    int ii = i;
    if (g.wrap_u()) {
      ii %= g.nu();
      if (ii < 0) ii += g.nu();
    } else if (ii < 0 || ii >= g.nu()) {
      break;
    }
    nodes.push_back({ii, j});
  }
  return nodes;
}

StaticSetup plane_setup(std::shared_ptr<const SurfaceModel> surface, const ReportOptions& opt) {
  StaticSetup s;
  double h = 0.15 / opt.resolution;
  Rect extent{-12.0, 12.0, -12.0, 12.0};
  s.grid = std::make_shared<MetricGrid>(
      surfaces::sample_grid(surface, h, h, extent, opt.neighborhood));
  s.basepoint = s.grid->nearest(0.0, 0.0);
  s.end_radii = {4.8, 6.6, 8.4};

  std::vector<GridNode> probe_nodes{s.basepoint};
  for (int ring = 1; ring <= 2; ++ring)
    for (int k = 0; k < 8; ++k) {
      double th = k * 0.25 * 3.14159265358979323846;
      probe_nodes.push_back(
          s.grid->nearest(0.5 * ring * std::cos(th), 0.5 * ring * std::sin(th)));
    }
  s.probe = std::make_shared<ProbeSet>(ProbeSet::uniform(probe_nodes, 0));

  // Escape sequences along the 8 stencil-aligned directions.
  static const int dirs8[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1},
                                  {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
  for (auto& d : dirs8) {
    std::vector<GridNode> seq;
    for (double r = 3.0; r <= 10.51; r += 1.5) {
      double norm = std::hypot(double(d[0]), double(d[1]));
      seq.push_back(s.grid->nearest(r * d[0] / norm, r * d[1] / norm));
    }
    s.sequences.push_back(seq);
  }

  // Ray family in 16 directions, as snapped polylines.
  for (int k = 0; k < 16; ++k) {
    double th = k * 0.125 * 3.14159265358979323846;
    std::vector<GridNode> nodes;
    for (double r = 0.0; r <= 10.51; r += 1.5)
      nodes.push_back(s.grid->nearest(r * std::cos(th), r * std::sin(th)));
    s.curves.push_back(polyline_curve(*s.grid, nodes));
  }
  return s;
}

StaticSetup grapefruit_setup(std::shared_ptr<const SurfaceModel> surface,
                             const ReportOptions& opt) {
  StaticSetup s;
  double hu = 2.0 * 3.14159265358979323846 / (12.0 * opt.resolution);
  double hv = hu / 10.0;
  Rect extent{-9.5 * 2.0 * 3.14159265358979323846, 9.5 * 2.0 * 3.14159265358979323846,
              -3.0, 3.0};
  s.grid = std::make_shared<MetricGrid>(
      surfaces::sample_grid(surface, hu, hv, extent, opt.neighborhood));
  const MetricGrid& g = *s.grid;
  s.basepoint = g.nearest(0.0, 0.0);
  s.end_radii = {1.2, 1.65, 2.1};

  // 50 probes: 10 u-stations x 5 v-rows, with the basepoint first.
  std::vector<GridNode> probe_nodes{s.basepoint};
  for (int iu = -5; iu <= 4; ++iu)
    for (int iv = -2; iv <= 2; ++iv) {
      if (iu == 0 && iv == 0) continue;
      probe_nodes.push_back(g.nearest(iu * 4.0, iv * 1.25));
      if (probe_nodes.size() >= 50) break;
    }
  s.probe = std::make_shared<ProbeSet>(ProbeSet::uniform(probe_nodes, 0));

  double period = surface->u_period();
  double v_stick = surface->v_of_z(2.0);  // well onto the stick

  // Escape sequences: the equator lift (2 pi n, 0) and stick runs both ways.
  std::vector<GridNode> equator;
  for (int n = 0; n <= 8; ++n) equator.push_back(g.nearest(n * period, 0.0));
  s.sequences.push_back(equator);
  for (int dir : {+1, -1}) {
    std::vector<GridNode> stick;
    for (int n = 0; n <= 8; ++n) stick.push_back(g.nearest(dir * n * period, -v_stick));
    s.sequences.push_back(stick);
  }

  // Busemann family: stick-parallel runs at four depths, both directions,
  // plus shallow diagonals that stay on the sticks.
  for (double z : {-2.0, -1.5, 1.5, 2.0}) {
    double v = surface->v_of_z(z);
    for (int dir : {+1, -1}) {
      GridNode start = g.nearest(0.0, v);
      auto nodes = strided_line(g, start, 12 * dir, 0, 8);
      if (nodes.size() >= 8) s.curves.push_back(polyline_curve(g, nodes));
    }
  }
  for (int start_side : {-1, +1})
    for (int dir : {+1, -1})
      for (int drift : {-1, +1}) {
        GridNode start = g.nearest(0.0, start_side * surface->v_of_z(1.8));
        auto nodes = strided_line(g, start, 8 * dir, drift, 12);
        if (nodes.size() >= 8) s.curves.push_back(polyline_curve(g, nodes));
      }
  return s;
}

StaticSetup warped_setup(std::shared_ptr<const SurfaceModel> surface, const ReportOptions& opt) {
  StaticSetup s;
  Interval dom = surface->domain_v();
  double v0 = std::max(dom.lo, -6.0), v1 = std::min(dom.hi, 6.0);
  double period = surface->u_period();
  double rho_mid = surface->metric_radius(0.5 * (v0 + v1));
  double hv = (v1 - v0) / (120.0 * opt.resolution);
  double hu = std::min(period / 16.0, hv / std::max(rho_mid, 1e-6));
  s.grid = std::make_shared<MetricGrid>(surfaces::sample_grid(
      surface, hu, hv, Rect{0.0, period, v0, v1}, opt.neighborhood));
  const MetricGrid& g = *s.grid;
  s.basepoint = g.nearest(0.0, 0.5 * (v0 + v1));

  geodesic::DistanceField f = geodesic::distance_field(s.grid, s.basepoint);
  double r_boundary = kInf;
  for (int i = 0; i < g.nu(); ++i) {
    r_boundary = std::min(r_boundary, f.at({i, 0}));
    r_boundary = std::min(r_boundary, f.at({i, g.nv() - 1}));
  }
  s.end_radii = {0.4 * r_boundary, 0.55 * r_boundary, 0.7 * r_boundary};

  std::vector<GridNode> probe_nodes{s.basepoint};
  for (int iu = 0; iu < 4; ++iu)
    for (int iv = -2; iv <= 2; ++iv) {
      if (iu == 0 && iv == 0) continue;
      probe_nodes.push_back(
          g.nearest(iu * period / 4.0, 0.5 * (v0 + v1) + iv * 0.15 * (v1 - v0)));
    }
  s.probe = std::make_shared<ProbeSet>(ProbeSet::uniform(probe_nodes, 0));

  // Escapes and curves run along +-v.
  for (int dir : {+1, -1}) {
    std::vector<GridNode> seq;
    for (int k = 2; k <= 7; ++k)
      seq.push_back(g.nearest(0.0, 0.5 * (v0 + v1) + dir * k * 0.06 * (v1 - v0)));
    s.sequences.push_back(seq);
    auto nodes = walk(g, s.basepoint, 0, dir, int(0.42 * (v1 - v0) / hv));
    s.curves.push_back(polyline_curve(g, nodes));
  }
  return s;
}

StaticSetup make_setup(std::shared_ptr<const SurfaceModel> surface, const ReportOptions& opt) {
  switch (surface->kind()) {
    case SurfaceKind::FlatPlane: return plane_setup(std::move(surface), opt);
    case SurfaceKind::RotationalCover: return grapefruit_setup(std::move(surface), opt);
    case SurfaceKind::WarpedProduct: return warped_setup(std::move(surface), opt);
  }
  fail(ErrorCode::Internal, "unknown surface kind");
}

std::string fmt_int(long long v) { return std::to_string(v); }

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::NoObstructionFound: return "no_obstruction_found";
    case Verdict::ObstructedEssentiallyNull: return "obstructed_essentially_null";
    case Verdict::ObstructedExtension: return "obstructed_extension";
    case Verdict::Undetermined: return "undetermined";
  }
  return "undetermined";
}

ObstructionReport static_obstruction_report(std::shared_ptr<const surfaces::SurfaceModel> slice,
                                            const ReportOptions& options) {
  ObstructionReport rep;
  rep.input_kind = "standard_static";
  StaticSetup setup = make_setup(slice, options);

  // Theorem 1.1 sufficient condition: more than one end.
  TestOutcome ends_test;
  ends_test.name = "ends_count";
  ends_test.conclusive = true;
  int ends = 0;
  try {
    ends = boundary::count_ends(*setup.grid, setup.end_radii, setup.basepoint);
    ends_test.outcome = fmt_int(ends);
    ends_test.evidence.emplace_back("ends", fmt_int(ends));
  } catch (const Error& e) {
    ends_test.outcome = "not_stabilized";
    ends_test.conclusive = false;
    rep.tests_run.push_back(ends_test);
    rep.verdict = Verdict::Undetermined;
    rep.provenance = std::string("ends counter: ") + e.what();
    return rep;
  }
  rep.tests_run.push_back(ends_test);
  if (ends >= 2) {
    rep.verdict = Verdict::ObstructedExtension;
    rep.evidence_grade = false;
    rep.provenance = "slice has " + fmt_int(ends) + " ends, so it is not a cone";
    return rep;
  }

  // Busemann-vs-Gromov coincidence on the sample.
  TestOutcome co_test;
  co_test.name = "busemann_gromov_coincidence";
  co_test.conclusive = false;  // semi-decision at probe/horizon resolution
  boundary::CoincidenceReport co = boundary::coincidence_test(
      setup.grid, setup.sequences, setup.curves, setup.probe, options.tol);
  co_test.evidence.emplace_back("stabilized_sequences",
                                fmt_int((long long)co.stabilized_sequences.size()));
  co_test.evidence.emplace_back("busemann_family_size",
                                fmt_int((long long)co.busemann_family.size()));
  double worst = 0.0;
  for (const auto& m : co.matches) worst = std::max(worst, m.min_distance);
  co_test.evidence.emplace_back("max_min_match_distance", format_double(worst));
  co_test.evidence.emplace_back("separation_threshold",
                                format_double(co.separation_threshold));
  co_test.evidence.emplace_back("evidence_only", co.evidence_only ? "true" : "false");
  if (co.vacuous_family) co_test.evidence.emplace_back("vacuous_family", "true");

  switch (co.verdict) {
    case boundary::CoincidenceVerdict::CounterexampleCandidate:
      co_test.outcome = "counterexample_candidate";
      rep.tests_run.push_back(co_test);
      rep.verdict = Verdict::ObstructedExtension;
      rep.evidence_grade = true;
      rep.provenance = "a Gromov limit stays away from every sampled Busemann limit";
      return rep;
    case boundary::CoincidenceVerdict::CoincideOnSample:
      co_test.outcome = "coincide_on_sample";
      rep.tests_run.push_back(co_test);
      rep.verdict = Verdict::NoObstructionFound;
      rep.provenance = "every sampled Gromov limit matches a Busemann limit";
      return rep;
    default:
      co_test.outcome = "undetermined";
      rep.tests_run.push_back(co_test);
      rep.verdict = Verdict::Undetermined;
      rep.provenance = "no escape sequence stabilized";
      return rep;
  }
}

ObstructionReport flrw_obstruction_report(const ScaleFactorSpec& spec,
                                          std::shared_ptr<const surfaces::SurfaceModel> slice,
                                          const ReportOptions& options) {
  ObstructionReport rep;
  rep.input_kind = "flrw";

  TestOutcome integral_test;
  integral_test.name = "scale_factor_integrals";
  integral_test.conclusive = true;
  ConvergenceVerdict fut =
      integral_converges(spec, IntegralTransform::Identity, End::Omega, 1e-6, 0.0);
  ConvergenceVerdict past =
      integral_converges(spec, IntegralTransform::Identity, End::Alpha, 1e-6, 0.0);
  auto status_name = [](ConvergenceStatus st) {
    return st == ConvergenceStatus::Finite ? "finite"
           : st == ConvergenceStatus::Infinite ? "infinite"
                                               : "undetermined";
  };
  integral_test.evidence.emplace_back("integral_future", status_name(fut.status));
  integral_test.evidence.emplace_back("integral_past", status_name(past.status));
  if (fut.status == ConvergenceStatus::Finite)
    integral_test.evidence.emplace_back("integral_future_value", format_double(fut.value));
  if (past.status == ConvergenceStatus::Finite)
    integral_test.evidence.emplace_back("integral_past_value", format_double(past.value));

  if (fut.status == ConvergenceStatus::Undetermined ||
      past.status == ConvergenceStatus::Undetermined) {
    integral_test.outcome = "undetermined";
    integral_test.conclusive = false;
    rep.tests_run.push_back(integral_test);
    rep.verdict = Verdict::Undetermined;
    rep.provenance = "scale factor integrals could not be decided";
    return rep;
  }

  if (fut.status == ConvergenceStatus::Finite || past.status == ConvergenceStatus::Finite) {
    integral_test.outcome = "finite_side";
    rep.tests_run.push_back(integral_test);
    rep.verdict = Verdict::ObstructedEssentiallyNull;
    rep.evidence_grade = false;
    rep.provenance = "a scale-factor integral is finite";
    // Ordering contract: the slice tests never run once this clause fires.
    return rep;
  }
  integral_test.outcome = "both_infinite";
  rep.tests_run.push_back(integral_test);

  // Conformal reduction to the standard static form over the same slice.
  TestOutcome reduce_test;
  reduce_test.name = "conformal_reduce";
  reduce_test.conclusive = true;
  try {
    ConformalReduction red = conformal_reduce(spec);
    reduce_test.outcome = "reduced";
    reduce_test.evidence.emplace_back("tau_future",
                                      red.future_finite ? format_double(red.tau_future) : "inf");
    reduce_test.evidence.emplace_back("tau_past",
                                      red.past_finite ? format_double(red.tau_past) : "-inf");
  } catch (const Error& e) {
    reduce_test.outcome = "undetermined";
    reduce_test.conclusive = false;
    rep.tests_run.push_back(reduce_test);
    rep.verdict = Verdict::Undetermined;
    rep.provenance = std::string("conformal reduction failed: ") + e.what();
    return rep;
  }
  rep.tests_run.push_back(reduce_test);

  ObstructionReport inner = static_obstruction_report(std::move(slice), options);
  for (auto& t : inner.tests_run) rep.tests_run.push_back(t);
  rep.evidence_grade = inner.evidence_grade;
  switch (inner.verdict) {
    case Verdict::ObstructedExtension:
      rep.verdict = Verdict::ObstructedExtension;
      rep.provenance = "clause " + std::string(inner.evidence_grade ? "2" : "1") + ": " +
                       inner.provenance;
      break;
    case Verdict::NoObstructionFound:
      rep.verdict = Verdict::NoObstructionFound;
      rep.provenance = inner.provenance;
      break;
    default:
      rep.verdict = Verdict::Undetermined;
      rep.provenance = inner.provenance;
      break;
  }
  return rep;
}

}  // namespace horizon::cosmo
