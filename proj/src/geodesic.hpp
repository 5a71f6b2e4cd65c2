#ifndef HORIZON_GEODESIC_HPP
#define HORIZON_GEODESIC_HPP

#include <memory>
#include <vector>

#include "surfaces.hpp"

namespace horizon::geodesic {

using surfaces::GridNode;
using surfaces::MetricGrid;
using surfaces::SurfaceModel;

/* Exact single-source shortest-path distances over a MetricGrid. */
struct DistanceField {
  std::shared_ptr<const MetricGrid> grid;
  GridNode source;
  std::vector<double> values;  // per node index; +inf marks unreachable
  double error_bound = 0.0;    // inherited relative stencil bound

  double at(GridNode n) const { return values[grid->index(n)]; }
};

DistanceField distance_field(std::shared_ptr<const MetricGrid> grid, GridNode source);

// Equals distance_field(grid, p).values[q] exactly; early-exits at q.
double pairwise_distance(const MetricGrid& grid, GridNode p, GridNode q);

/* Length of a minimizing geodesic between chart points on a surface of
 * revolution or warped product, found by shooting on the Clairaut constant
 * over monotone and single-turn branches (and u-windings on wrapped
 * surfaces).  Throws NoConvergence when no branch brackets the target. */
double clairaut_distance(const SurfaceModel& surface, double u1, double v1, double u2,
                         double v2, double tol);

}  // namespace horizon::geodesic

#endif  // HORIZON_GEODESIC_HPP
