#include "tbi/overlap.hpp"

#include <cmath>
#include <stdexcept>

#include "tbi/errors.hpp"

namespace tbi {

ResolutionCriterion criterion(CriterionName name) {
  switch (name) {
    case CriterionName::half_width: return {kHalfWidthXi, name};
    case CriterionName::unit: return {1.0, name};
    case CriterionName::max: return {2.0, name};
    case CriterionName::custom: break;
  }
  throw std::invalid_argument("criterion: custom thresholds have no preset value");
}

ResolutionCriterion criterion(const std::string& name) {
  if (name == "half_width") return criterion(CriterionName::half_width);
  if (name == "unit") return criterion(CriterionName::unit);
  if (name == "max") return criterion(CriterionName::max);
  throw std::invalid_argument("unknown resolution criterion: " + name);
}

bool admissible(const ViolationCell& cell, double xi) {
  if (!(xi >= 0.0 && xi <= 2.0)) {
    throw std::invalid_argument("admissible: xi must lie in [0, 2] units of |X|");
  }
  return cell.delta_p > 0.0 && cell.max_dx() <= xi;
}

double overlap_integral(std::span<const ViolationCell> cells, int n, double xi) {
  if (n < 2 || cells.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("overlap_integral: cell count does not match grid size");
  }
  double sum = 0.0;
  for (const auto& cell : cells) {
    if (admissible(cell, xi)) {
      sum += cell.delta_p;
    }
  }
  return sum / (static_cast<double>(n) * n);
}

double overlap_integral(InequalityType type, const SignAssignment& signs, double xi, int n,
                        const Dynamics& dynamics) {
  const auto cells = violation_map(type, signs, n, dynamics);
  return overlap_integral(cells, n, xi);
}

XiThreshold xi_threshold(std::span<const ViolationCell> cells, int n, double tolerance) {
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("xi_threshold: tolerance must be > 0");
  }
  if (overlap_integral(cells, n, 2.0) <= kOverlapFloor) {
    throw PhysicsError("xi_threshold: no violation region on this grid");
  }
  double lo = 0.0;
  double hi = 2.0;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (overlap_integral(cells, n, mid) > kOverlapFloor) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi};
}

XiThreshold xi_threshold(InequalityType type, const SignAssignment& signs, int n,
                         double tolerance, const Dynamics& dynamics) {
  const auto cells = violation_map(type, signs, n, dynamics);
  return xi_threshold(cells, n, tolerance);
}

OverlapCurve overlap_curve(const SignAssignment& signs, int n_time, int n_xi,
                           double xi_tolerance, const Dynamics& dynamics) {
  if (n_xi < 2) {
    throw std::invalid_argument("overlap_curve: n_xi must be >= 2");
  }
  const auto cells_I = violation_map(InequalityType::I, signs, n_time, dynamics);
  const auto cells_II = violation_map(InequalityType::II, signs, n_time, dynamics);

  OverlapCurve curve;
  curve.n_time = n_time;
  curve.n_xi = n_xi;
  curve.samples.reserve(n_xi);
  for (int j = 0; j < n_xi; ++j) {
    const double xi = 2.0 * j / (n_xi - 1);
    curve.samples.push_back({xi, overlap_integral(cells_I, n_time, xi),
                             overlap_integral(cells_II, n_time, xi)});
  }
  curve.xi_I = xi_threshold(cells_I, n_time, xi_tolerance);
  curve.xi_II = xi_threshold(cells_II, n_time, xi_tolerance);
  return curve;
}

} // namespace tbi
