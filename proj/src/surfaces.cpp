#include "surfaces.hpp"

#include <algorithm>
#include <cmath>

namespace horizon::surfaces {

namespace {

constexpr double kTableHalfSpan = 3.0;  // z-range of the exported tables

// Monotone C^1 smoothing of max(0, q) over [0, eps]: h(x) = 2x^2 - x^3 on
// the unit interval, h(0)=h'(0)=0, h(1)=h'(1)=1.
double smooth_clip(double q, double eps) {
  if (q <= 0.0) return 0.0;
  if (q >= eps) return q;
  double x = q / eps;
  return eps * x * x * (2.0 - x);
}

double smooth_clip_deriv(double q, double eps) {
  if (q <= 0.0) return 0.0;
  if (q >= eps) return 1.0;
  double x = q / eps;
  return x * (4.0 - 3.0 * x);
}

}  // namespace

double ProfileCurve::clip_z() const {
  double R = semicircle_radius();
  return std::sqrt(R * R - stick_radius * stick_radius);
}

double ProfileCurve::blend_z() const {
  double R = semicircle_radius();
  double h = stick_radius + blend_height;
  return std::sqrt(R * R - h * h);
}

double ProfileCurve::radius(double z) const {
  double R = semicircle_radius();
  double az = std::fabs(z);
  if (az >= R) return stick_radius;
  double sc = std::sqrt(R * R - z * z);
  return stick_radius + smooth_clip(sc - stick_radius, blend_height);
}

double ProfileCurve::radius_deriv(double z) const {
  double R = semicircle_radius();
  double az = std::fabs(z);
  if (az >= clip_z()) return 0.0;
  double sc = std::sqrt(R * R - z * z);
  return smooth_clip_deriv(sc - stick_radius, blend_height) * (-z / sc);
}

double ProfileCurve::arclength(double z) const {
  if (z < 0.0) return -arclength(-z);
  double R = semicircle_radius();
  double zb = blend_z(), zc = clip_z();
  // On the exact-semicircle span ds = R/sc dz integrates to R*asin(z/R).
  if (z <= zb) return R * std::asin(z / R);
  auto speed = [this](double t) {
    double d = radius_deriv(t);
    return std::sqrt(1.0 + d * d);
  };
  if (z <= zc) return arc_at_blend_ + quad_adaptive(speed, zb, z, 1e-12, 40);
  return arc_at_clip_ + (z - zc);
}

double ProfileCurve::z_of_arclength(double s) const {
  if (s < 0.0) return -z_of_arclength(-s);
  double R = semicircle_radius();
  if (s <= arc_at_blend_) return R * std::sin(s / R);
  if (s >= arc_at_clip_) return clip_z() + (s - arc_at_clip_);
  // Thin clip band: bisection on the monotone arclength.
  double lo = blend_z(), hi = clip_z();
  for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    (arclength(mid) < s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ProfileCurve build_profile(double stick_radius, double blend_parameter, int resolution) {
  if (!(stick_radius > 0.0))
    fail(ErrorCode::InvalidParameter, "stick_radius must be positive");
  if (!(blend_parameter > 0.0) || !(blend_parameter < stick_radius))
    fail(ErrorCode::InvalidParameter,
         "blend_parameter must satisfy 0 < a < stick_radius");
  if (resolution < 64) fail(ErrorCode::InvalidParameter, "resolution must be >= 64");

  ProfileCurve p;
  p.stick_radius = stick_radius;
  p.blend_parameter = blend_parameter;
  p.resolution = resolution;
  p.blend_height = 0.5 * std::min(stick_radius, p.semicircle_radius() - stick_radius);

  double R = p.semicircle_radius();
  double zb = p.blend_z();
  p.arc_at_blend_ = R * std::asin(zb / R);
  auto speed = [&p](double t) {
    double d = p.radius_deriv(t);
    return std::sqrt(1.0 + d * d);
  };
  p.arc_at_clip_ = p.arc_at_blend_ + quad_adaptive(speed, zb, p.clip_z(), 1e-12, 40);

  p.samples.reserve(resolution);
  p.arclength_table.reserve(resolution);
  for (int k = 0; k < resolution; ++k) {
    double z = -kTableHalfSpan + 2.0 * kTableHalfSpan * k / (resolution - 1);
    p.samples.emplace_back(z, p.radius(z));
    p.arclength_table.emplace_back(z, p.arclength(z));
  }
  return p;
}

SurfaceModel SurfaceModel::flat_plane() {
  SurfaceModel s;
  s.kind_ = SurfaceKind::FlatPlane;
  return s;
}

SurfaceModel SurfaceModel::rotational_cover(ProfileCurve profile, bool unwrapped) {
  SurfaceModel s;
  s.kind_ = SurfaceKind::RotationalCover;
  s.profile_ = std::make_shared<ProfileCurve>(std::move(profile));
  s.wrapped_ = !unwrapped;
  return s;
}

SurfaceModel SurfaceModel::warped_product(expr::Expression warp, double fiber_circumference,
                                          Interval domain) {
  if (!(fiber_circumference > 0.0))
    fail(ErrorCode::InvalidParameter, "fiber_circumference must be positive");
  if (!(domain.lo < domain.hi))
    fail(ErrorCode::InvalidParameter, "warped product domain is empty");
  SurfaceModel s;
  s.kind_ = SurfaceKind::WarpedProduct;
  s.warp_ = std::move(warp);
  s.fiber_scale_ = fiber_circumference / s.u_period();
  s.domain_v_ = domain;
  s.wrapped_ = true;
  // Positivity audit over a dense sample of the (possibly clipped) domain.
  double lo = std::max(domain.lo, -1e6), hi = std::min(domain.hi, 1e6);
  for (int k = 0; k <= 4096; ++k) {
    double v = lo + (hi - lo) * k / 4096.0;
    double w = s.warp_(v);
    if (!(w > 0.0) || !std::isfinite(w))
      fail(ErrorCode::InvalidParameter,
           "warp must be positive on its domain (fails near v = " + format_double(v) + ")");
  }
  return s;
}

double SurfaceModel::z_of_v(double v) const {
  return profile_ ? profile_->z_of_arclength(v) : v;
}

double SurfaceModel::v_of_z(double z) const {
  return profile_ ? profile_->arclength(z) : z;
}

double SurfaceModel::g_uu(double v) const {
  double rho = metric_radius(v);
  return rho * rho;
}

double SurfaceModel::metric_radius(double v) const {
  switch (kind_) {
    case SurfaceKind::FlatPlane: return 1.0;
    case SurfaceKind::RotationalCover: return profile_->radius(profile_->z_of_arclength(v));
    case SurfaceKind::WarpedProduct: return warp_(v) * fiber_scale_;
  }
  return 1.0;
}

double SurfaceModel::metric_radius_deriv(double v) const {
  switch (kind_) {
    case SurfaceKind::FlatPlane: return 0.0;
    case SurfaceKind::RotationalCover: {
      double z = profile_->z_of_arclength(v);
      double rp = profile_->radius_deriv(z);
      return rp / std::sqrt(1.0 + rp * rp);
    }
    case SurfaceKind::WarpedProduct: {
      double h = 1e-6;
      return (metric_radius(v + h) - metric_radius(v - h)) / (2.0 * h);
    }
  }
  return 0.0;
}

double stencil_directional_bound(int order, double su, double sv) {
  static const std::pair<int, int> dirs8[] = {{1, 0}, {1, 1}, {0, 1}};
  static const std::pair<int, int> dirs16[] = {{1, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 1}};
  std::vector<double> angles;
  auto add = [&](const std::pair<int, int>* d, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k)
      angles.push_back(std::atan2(d[k].second * sv, d[k].first * su));
  };
  if (order == 8)
    add(dirs8, 3);
  else
    add(dirs16, 5);
  std::sort(angles.begin(), angles.end());
  double worst = 1.0;
  for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
    double half = 0.5 * (angles[k + 1] - angles[k]);
    worst = std::max(worst, 1.0 / std::cos(half));
  }
  return worst - 1.0;
}

GridNode MetricGrid::nearest(double u, double v) const {
  double uu = u;
  if (wrap_u_) {
    double period = surface_->u_period();
    uu = std::fmod(uu - extent_.u0, period);
    if (uu < 0) uu += period;
    uu += extent_.u0;
  }
  int i = static_cast<int>(std::lround((uu - extent_.u0) / hu_));
  int j = static_cast<int>(std::lround((v - extent_.v0) / hv_));
  i = std::clamp(i, 0, nu_ - 1);
  j = std::clamp(j, 0, nv_ - 1);
  return {i, j};
}

bool MetricGrid::neighbor(int i, int j, int di, int dj, GridNode* out) const {
  int jj = j + dj;
  if (jj < 0 || jj >= nv_) return false;
  int ii = i + di;
  if (wrap_u_) {
    ii %= nu_;
    if (ii < 0) ii += nu_;
  } else if (ii < 0 || ii >= nu_) {
    return false;
  }
  *out = {ii, jj};
  return true;
}

double MetricGrid::edge_weight(int i, int j, int di, int dj) const {
  GridNode n;
  if (!neighbor(i, j, di, dj, &n)) return std::numeric_limits<double>::quiet_NaN();
  double guu = guu_half_[2 * j + dj];
  double du = di * hu_, dv = dj * hv_;
  return std::sqrt(guu * du * du + dv * dv);
}

MetricGrid sample_grid(std::shared_ptr<const SurfaceModel> surface, double spacing_u,
                       double spacing_v, const Rect& extent, int neighborhood_order) {
  if (!(spacing_u > 0.0) || !(spacing_v > 0.0))
    fail(ErrorCode::InvalidParameter, "grid spacing must be positive");
  if (neighborhood_order != 8 && neighborhood_order != 16)
    fail(ErrorCode::InvalidParameter, "neighborhood_order must be 8 or 16");
  if (!(extent.u0 < extent.u1) || !(extent.v0 < extent.v1))
    fail(ErrorCode::InvalidParameter, "grid extent is empty");
  Interval dom = surface->domain_v();
  if (extent.v0 < dom.lo - 1e-12 || extent.v1 > dom.hi + 1e-12)
    fail(ErrorCode::OutOfDomain, "extent exceeds the surface chart domain in v");

  MetricGrid g;
  g.surface_ = std::move(surface);
  g.extent_ = extent;
  g.hv_ = spacing_v;
  g.order_ = neighborhood_order;
  g.wrap_u_ = g.surface_->wrapped_u();
  if (g.wrap_u_) {
    double period = g.surface_->u_period();
    if (std::fabs((extent.u1 - extent.u0) - period) > 1e-9)
      fail(ErrorCode::OutOfDomain,
           "wrapped surfaces require a full-period u extent");
    g.nu_ = std::max(4, static_cast<int>(std::lround(period / spacing_u)));
    g.hu_ = period / g.nu_;
  } else {
    g.nu_ = 1 + static_cast<int>(std::floor((extent.u1 - extent.u0) / spacing_u + 1e-9));
    g.hu_ = spacing_u;
  }
  g.nv_ = 1 + static_cast<int>(std::floor((extent.v1 - extent.v0) / spacing_v + 1e-9));
  if (g.nu_ < 2 || g.nv_ < 2)
    fail(ErrorCode::InvalidParameter, "grid must have at least 2 nodes per axis");

  static const std::pair<int, int> base8[] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                              {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
  static const std::pair<int, int> knight[] = {{2, 1},  {2, -1},  {-2, 1}, {-2, -1},
                                               {1, 2},  {1, -2},  {-1, 2}, {-1, -2}};
  g.offsets_.assign(std::begin(base8), std::end(base8));
  if (neighborhood_order == 16)
    g.offsets_.insert(g.offsets_.end(), std::begin(knight), std::end(knight));

  g.guu_half_.resize(2 * g.nv_ - 1);
  for (int m = 0; m < 2 * g.nv_ - 1; ++m)
    g.guu_half_[m] = g.surface_->g_uu(extent.v0 + 0.5 * m * g.hv_);

  double worst = 0.0;
  for (int j = 0; j < g.nv_; ++j) {
    double su = std::sqrt(g.guu_half_[2 * j]) * g.hu_;
    worst = std::max(worst, stencil_directional_bound(neighborhood_order, su, g.hv_));
  }
  g.error_bound_ = worst;
  return g;
}

}  // namespace horizon::surfaces
