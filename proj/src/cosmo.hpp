#ifndef HORIZON_COSMO_HPP
#define HORIZON_COSMO_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "expr.hpp"
#include "surfaces.hpp"

namespace horizon::cosmo {

enum class End { Alpha, Omega };  // lower / upper domain endpoint

/* Scale factor a(t) of an FLRW metric, or the warping function of a warped
 * product, over an interval domain.  Positivity is audited at construction;
 * leading asymptotics at infinite ends are derived from the expression. */
struct ScaleFactorSpec {
  expr::Expression expression;
  Interval domain{-kInf, kInf};
  expr::Asymptotic asym_plus;   // toward +infinity (when the domain reaches it)
  expr::Asymptotic asym_minus;  // toward -infinity

  double operator()(double t) const { return expression(t); }
};

ScaleFactorSpec make_scale_factor(const std::string& expression_text, Interval domain);

enum class IntegralTransform { Identity, ReciprocalSquare, Reciprocal };

enum class ConvergenceStatus { Finite, Infinite, Undetermined };

enum class DecisionMethod { AsymptoticRule, QuadratureWithTailBound };

struct ConvergenceVerdict {
  ConvergenceStatus status = ConvergenceStatus::Undetermined;
  double value = 0.0;       // set when Finite
  double tail_bound = 0.0;  // remainder estimate folded into value
  DecisionMethod method = DecisionMethod::AsymptoticRule;
};

// Decides |integral of the transformed scale factor from `from` toward the
// chosen domain end|.  Prefers the exponent rule; falls back to adaptive
// quadrature with monotone tail bounding.
ConvergenceVerdict integral_converges(const ScaleFactorSpec& spec, IntegralTransform transform,
                                      End end, double tol, double from = 0.0);

// Test hook: force one decision path (throws Undetermined-style verdict when
// the forced path does not apply).
ConvergenceVerdict integral_converges_forced(const ScaleFactorSpec& spec,
                                             IntegralTransform transform, End end, double tol,
                                             double from, DecisionMethod method);

struct ConformalReduction {
  std::vector<std::pair<double, double>> tau_table;  // (t, tau), strictly increasing
  bool future_finite = false;
  bool past_finite = false;
  double tau_future = kInf;   // sup of conformal time (finite when future_finite)
  double tau_past = -kInf;
};

ConformalReduction conformal_reduce(const ScaleFactorSpec& spec, double horizon = 32.0,
                                    double tol = 1e-9);

enum class Verdict {
  NoObstructionFound,
  ObstructedEssentiallyNull,
  ObstructedExtension,
  Undetermined,
};

struct TestOutcome {
  std::string name;
  std::string outcome;
  bool conclusive = false;
  std::vector<std::pair<std::string, std::string>> evidence;
};

struct ObstructionReport {
  std::string input_kind;  // "flrw" | "standard_static"
  std::vector<TestOutcome> tests_run;
  Verdict verdict = Verdict::Undetermined;
  bool evidence_grade = false;  // true when the verdict rests on a semi-decision
  std::string provenance;       // which theorem / clause fired
};

struct ReportOptions {
  double tol = 0.02;
  std::uint64_t seed = 1;
  int resolution = 1;       // >= 1; scales default grid spacings down
  int neighborhood = 16;
  bool keep_artifacts = false;
};

ObstructionReport static_obstruction_report(std::shared_ptr<const surfaces::SurfaceModel> slice,
                                            const ReportOptions& options);

ObstructionReport flrw_obstruction_report(const ScaleFactorSpec& spec,
                                          std::shared_ptr<const surfaces::SurfaceModel> slice,
                                          const ReportOptions& options);

const char* verdict_name(Verdict v);

}  // namespace horizon::cosmo

#endif  // HORIZON_COSMO_HPP
