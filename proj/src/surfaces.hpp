#ifndef HORIZON_SURFACES_HPP
#define HORIZON_SURFACES_HPP

#include <memory>
#include <utility>
#include <vector>

#include "common.hpp"
#include "expr.hpp"

namespace horizon::surfaces {

/* Rotational profile: constant radius away from a near-unit spherical bulge.
 *
 * The radius is stick_radius outside the bulge, equals the semicircle
 * sqrt((1-a)^2 - z^2) where that clears the stick comfortably, and joins the
 * two through a monotone C^1 cubic clip applied in the radius variable.  The
 * clip acts on q = semicircle - stick_radius over q in [0, blend_height], so
 * the profile is exactly the semicircle where q >= blend_height and exactly
 * the stick once the semicircle dips to stick level.
 */
struct ProfileCurve {
  double stick_radius = 0.1;
  double blend_parameter = 0.05;  // semicircle truncation a, 0 < a < stick_radius
  Interval bulge_interval{-1.0, 1.0};
  int resolution = 512;
  double blend_height = 0.05;  // q-extent of the C^1 clip

  // Sampled tables over z in [-3, 3] (export + invariant checks).
  std::vector<std::pair<double, double>> samples;          // (z, r)
  std::vector<std::pair<double, double>> arclength_table;  // (z, s)

  double semicircle_radius() const { return 1.0 - blend_parameter; }
  // z where the semicircle meets stick level resp. the top of the clip band.
  double clip_z() const;
  double blend_z() const;

  double radius(double z) const;
  double radius_deriv(double z) const;

  // Signed arc length s(z) along the profile from z = 0; odd in z.
  double arclength(double z) const;
  double z_of_arclength(double s) const;

 private:
  double arc_at_blend_ = 0.0;  // s(blend_z())
  double arc_at_clip_ = 0.0;   // s(clip_z())
  friend ProfileCurve build_profile(double, double, int);
};

ProfileCurve build_profile(double stick_radius, double blend_parameter, int resolution);

enum class SurfaceKind { FlatPlane, RotationalCover, WarpedProduct };

/* Two-dimensional Riemannian model in a global (u, v) chart with diagonal
 * metric g = g_uu(v) du^2 + dv^2.  v is the profile arc-length coordinate on
 * rotational covers and the base coordinate of warped products. */
class SurfaceModel {
 public:
  static SurfaceModel flat_plane();
  static SurfaceModel rotational_cover(ProfileCurve profile, bool unwrapped);
  static SurfaceModel warped_product(expr::Expression warp, double fiber_circumference,
                                     Interval domain);

  SurfaceKind kind() const { return kind_; }
  bool wrapped_u() const { return wrapped_; }
  double u_period() const { return 6.283185307179586476925287; }

  double g_uu(double v) const;
  double g_vv(double) const { return 1.0; }
  // sqrt(g_uu); the Clairaut radius.
  double metric_radius(double v) const;
  double metric_radius_deriv(double v) const;

  Interval domain_v() const { return domain_v_; }
  const ProfileCurve* profile() const { return profile_.get(); }
  double z_of_v(double v) const;
  double v_of_z(double z) const;

 private:
  SurfaceKind kind_ = SurfaceKind::FlatPlane;
  std::shared_ptr<const ProfileCurve> profile_;
  bool wrapped_ = false;
  expr::Expression warp_;
  double fiber_scale_ = 1.0;  // fiber_circumference / (2 pi)
  Interval domain_v_;
};

struct GridNode {
  int i = 0;
  int j = 0;
  bool operator==(const GridNode&) const = default;
};

/* Edge-weighted lattice sampled from a SurfaceModel over a chart rectangle.
 * neighborhood_order 8 uses axis+diagonal offsets, 16 adds knight moves. */
class MetricGrid {
 public:
  const SurfaceModel& surface() const { return *surface_; }
  std::shared_ptr<const SurfaceModel> surface_ptr() const { return surface_; }

  double hu() const { return hu_; }
  double hv() const { return hv_; }
  const Rect& extent() const { return extent_; }
  int nu() const { return nu_; }
  int nv() const { return nv_; }
  int node_count() const { return nu_ * nv_; }
  int neighborhood_order() const { return order_; }
  bool wrap_u() const { return wrap_u_; }
  double error_bound() const { return error_bound_; }

  int index(GridNode n) const { return n.j * nu_ + n.i; }
  GridNode node(int idx) const { return {idx % nu_, idx / nu_}; }
  double u_of(int i) const { return extent_.u0 + i * hu_; }
  double v_of(int j) const { return extent_.v0 + j * hv_; }
  std::pair<double, double> chart_of(GridNode n) const { return {u_of(n.i), v_of(n.j)}; }

  GridNode nearest(double u, double v) const;

  // Directed stencil offsets (full set, 8 or 16 entries).
  const std::vector<std::pair<int, int>>& offsets() const { return offsets_; }

  // Weight of the edge leaving (i, j) by (di, dj); quiet NaN when the
  // neighbor falls outside the lattice.
  double edge_weight(int i, int j, int di, int dj) const;
  bool neighbor(int i, int j, int di, int dj, GridNode* out) const;

  double g_uu_at_row(int j) const { return guu_half_[2 * j]; }

 private:
  friend MetricGrid sample_grid(std::shared_ptr<const SurfaceModel>, double, double,
                                const Rect&, int);
  std::shared_ptr<const SurfaceModel> surface_;
  double hu_ = 0, hv_ = 0;
  Rect extent_;
  int nu_ = 0, nv_ = 0;
  int order_ = 16;
  bool wrap_u_ = false;
  double error_bound_ = 0;
  std::vector<std::pair<int, int>> offsets_;
  std::vector<double> guu_half_;  // g_uu at v0 + m*hv/2, m in [0, 2nv-2]
};

MetricGrid sample_grid(std::shared_ptr<const SurfaceModel> surface, double spacing_u,
                       double spacing_v, const Rect& extent, int neighborhood_order);

// Worst-case relative overestimate of graph distances for the stencil under a
// constant diagonal metric (su, sv) = (sqrt(g_uu)*hu, hv).
double stencil_directional_bound(int order, double su, double sv);

}  // namespace horizon::surfaces

#endif  // HORIZON_SURFACES_HPP
