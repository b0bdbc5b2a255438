#ifndef TBI_OVERLAP_HPP
#define TBI_OVERLAP_HPP

#include <span>
#include <string>
#include <vector>

#include "tbi/inequalities.hpp"

namespace tbi {

/// Overlap sums below this floor count as zero; absorbs roundoff in the
/// positive/zero decision.
inline constexpr double kOverlapFloor = 1e-14;

/// Half-width resolution threshold (2 ln 2)^(-1/2) in units of |X|.
inline constexpr double kHalfWidthXi = 0.84932180028801907;

enum class CriterionName { half_width, unit, max, custom };

/// A resolution criterion: accept a measurement as unambiguous when its
/// effective uncertainty is at most xi (units of |X|, xi in [0, 2]).
struct ResolutionCriterion {
  double xi = 0.0;
  CriterionName name = CriterionName::custom;
};

ResolutionCriterion criterion(CriterionName name);
ResolutionCriterion criterion(const std::string& name);

/// True iff the cell violates the bound and every attached uncertainty is
/// resolved at threshold xi.
bool admissible(const ViolationCell& cell, double xi);

/// Midpoint-rule overlap integral (1/tau^2) sum_admissible DeltaP (tau/N)^2
/// = sum_admissible DeltaP / N^2 over an N x N cell grid.
double overlap_integral(std::span<const ViolationCell> cells, int n, double xi);
double overlap_integral(InequalityType type, const SignAssignment& signs, double xi, int n,
                        const Dynamics& dynamics);

/// Bisection bracket for the smallest xi with positive overlap:
/// overlap(lower) = 0, overlap(upper) > 0, upper - lower <= tolerance.
struct XiThreshold {
  double lower = 0.0;
  double upper = 0.0;

  double value() const { return upper; }
};

/// Throws PhysicsError when the inequality is violated nowhere on the grid
/// (overlap at xi = 2 below the floor).
XiThreshold xi_threshold(std::span<const ViolationCell> cells, int n, double tolerance);
XiThreshold xi_threshold(InequalityType type, const SignAssignment& signs, int n,
                         double tolerance, const Dynamics& dynamics);

struct OverlapSample {
  double xi = 0.0;
  double overlap_I = 0.0;
  double overlap_II = 0.0;
};

/// O_alpha(xi) for types I and II sampled on n_xi uniform points of [0, 2],
/// with the extracted thresholds.
struct OverlapCurve {
  std::vector<OverlapSample> samples;
  int n_time = 0;
  int n_xi = 0;
  XiThreshold xi_I;
  XiThreshold xi_II;
};

OverlapCurve overlap_curve(const SignAssignment& signs, int n_time, int n_xi,
                           double xi_tolerance, const Dynamics& dynamics);

} // namespace tbi

#endif
