#ifndef HORIZON_BOUNDARY_HPP
#define HORIZON_BOUNDARY_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cosmo.hpp"
#include "geodesic.hpp"

namespace horizon::boundary {

using geodesic::DistanceField;
using surfaces::GridNode;
using surfaces::MetricGrid;

/* Finite probe set standing in for the function-space domain: normalized
 * distance profiles are compared pointwise on these nodes. */
struct ProbeSet {
  std::vector<GridNode> points;
  std::size_t basepoint = 0;     // index into points
  std::vector<double> weights;   // positive, sum 1

  static ProbeSet uniform(std::vector<GridNode> pts, std::size_t basepoint_index);
  void validate() const;
};

/* Class of a 1-Lipschitz function modulo constants, pinned by the section
 * that vanishes at the basepoint. */
struct GromovPoint {
  std::shared_ptr<const ProbeSet> probe;
  std::vector<double> values;  // values[basepoint] == 0
};

GromovPoint gromov_embed(const DistanceField& field, std::shared_ptr<const ProbeSet> probe);

// Weighted max metric on GromovPoints over a common probe set; weights enter
// relative to uniform, so uniform weights give the plain sup metric.
double quotient_distance(const GromovPoint& a, const GromovPoint& b);

struct CurveSample {
  double t;
  double u;
  double v;
};

enum class BusemannStatus { Undetermined, Converged, Diverges };

struct BusemannSample {
  std::shared_ptr<const MetricGrid> grid;
  std::vector<CurveSample> curve;      // strictly increasing t
  std::vector<GridNode> curve_nodes;   // snapped
  std::shared_ptr<const ProbeSet> probe;
  // truncations[k][x] = t_k - d(probe x, c(t_k))
  std::vector<std::vector<double>> truncations;
  BusemannStatus status = BusemannStatus::Undetermined;
  std::optional<GromovPoint> limit;    // set when converged
  double final_window_slope_min = 0.0; // min over probes, per unit t
  double final_window_slope_max = 0.0;
};

BusemannSample busemann_truncations(std::shared_ptr<const MetricGrid> grid,
                                    const std::vector<CurveSample>& curve,
                                    std::shared_ptr<const ProbeSet> probe);

struct BusemannLimitOptions {
  double tol = 0.02;
  int window = 4;
  // Truncations are monotone, so divergence means escape to +infinity; a
  // finite horizon cannot certify that, and by default no threshold is set
  // and non-convergence is reported as Undetermined with the window slope.
  double growth_threshold = kInf;
};

BusemannStatus busemann_limit(BusemannSample& sample, const BusemannLimitOptions& opt);

enum class CoincidenceVerdict { CoincideOnSample, CounterexampleCandidate, Undetermined };

struct CoincidenceMatch {
  std::size_t sequence_index;
  double min_distance = kInf;
  int matching_curve = -1;  // index into the converged family, -1 when above threshold
};

struct CoincidenceReport {
  std::vector<GromovPoint> gromov_limits;        // one per stabilized sequence
  std::vector<std::size_t> stabilized_sequences; // indices of sequences that were Cauchy
  std::vector<GromovPoint> busemann_family;      // converged curve limits
  std::vector<int> family_curve_index;           // source curve index per family member
  std::vector<CoincidenceMatch> matches;
  CoincidenceVerdict verdict = CoincidenceVerdict::Undetermined;
  bool evidence_only = true;   // probe/horizon resolution, not a proof
  bool vacuous_family = false;
  double tol = 0.0;
  double separation_threshold = 0.0;  // 10 * tol
};

CoincidenceReport coincidence_test(std::shared_ptr<const MetricGrid> grid,
                                   const std::vector<std::vector<GridNode>>& escape_sequences,
                                   const std::vector<std::vector<CurveSample>>& curve_family,
                                   std::shared_ptr<const ProbeSet> probe, double tol);

// Stabilized count of complement components of metric balls that touch the
// grid boundary.  Throws NotStabilized when the last two radii disagree.
int count_ends(const MetricGrid& grid, const std::vector<double>& radii,
               GridNode basepoint);

enum class WarpedBoundaryKind { Point, ManifoldK };

WarpedBoundaryKind classify_warped_boundary(const cosmo::ScaleFactorSpec& warp,
                                            cosmo::End end, double split_point,
                                            double tol = 1e-6);

}  // namespace horizon::boundary

#endif  // HORIZON_BOUNDARY_HPP
