#ifndef TBI_DYNAMICS_HPP
#define TBI_DYNAMICS_HPP

#include "tbi/two_level.hpp"

namespace tbi {

/// Source of correlation probabilities for one bistable system. All
/// implementations are pure: correlations() depends only on its arguments
/// and immutable construction state, so grids may be evaluated in parallel
/// as long as reductions keep a deterministic order.
class Dynamics {
 public:
  virtual ~Dynamics() = default;

  virtual CorrelationTable correlations(double t_ab, double t_bc) const = 0;

  /// Oscillation period tau of the system state; time grids cover (0, tau]^2.
  virtual double period() const = 0;

  /// Magnitude |X| of the dichotomic observable.
  virtual double magnitude() const = 0;
};

/// Spin-1/2 precession about x, measured along z. Probabilities come from
/// amplitude propagation; spin_closed_form() is the independent cross-check.
class SpinDynamics final : public Dynamics {
 public:
  explicit SpinDynamics(const RabiParams& params, double magnitude = 0.5);

  CorrelationTable correlations(double t_ab, double t_bc) const override;
  double period() const override;
  double magnitude() const override { return magnitude_; }

  const RabiParams& params() const { return params_; }

 private:
  RabiParams params_;
  double magnitude_;
};

} // namespace tbi

#endif
