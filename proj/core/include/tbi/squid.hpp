#ifndef TBI_SQUID_HPP
#define TBI_SQUID_HPP

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "tbi/dynamics.hpp"
#include "tbi/two_level.hpp"

namespace tbi {

inline constexpr double kHbar = 1.054571817e-34;        // J s
inline constexpr double kFluxQuantum = 2.067833848e-15; // Wb, h/2e

enum class PotentialForm { quartic, full_cosine };

std::string to_string(PotentialForm form);
PotentialForm parse_potential_form(const std::string& text);

/// rf-SQUID circuit parameters. The external flux is fixed at the symmetric
/// bias (flux_bias_integer + 1/2) flux quanta, where the ring potential in
/// the dimensionless flux coordinate phi is a double well for 1 < beta < 5pi/2.
struct SquidParams {
  double inductance = 0.0;       // H
  double capacitance = 0.0;      // F
  double critical_current = 0.0; // A
  int flux_bias_integer = 0;
  PotentialForm potential_form = PotentialForm::quartic;

  /// Kinetic-term mass for the dimensionless coordinate: C Phi_0^2.
  double effective_mass() const { return capacitance * kFluxQuantum * kFluxQuantum; }
};

/// Derived double-well quantities, SI units; phi0 and sigma0_sq are in the
/// dimensionless flux coordinate.
struct DoubleWellSummary {
  double beta = 0.0;
  double phi0 = 0.0;
  double barrier = 0.0;       // J
  double omega0 = 0.0;        // rad/s
  double sigma0_sq = 0.0;
  double splitting = 0.0;     // J, E1 - E0
  double tunnel_period = 0.0; // s, 2 pi hbar / splitting
};

/// Uniform mesh of n_points interior points on (phi_min, phi_max) with
/// Dirichlet boundaries at the ends.
struct SpatialGrid {
  double phi_min = 0.0;
  double phi_max = 0.0;
  int n_points = 0;

  double step() const { return (phi_max - phi_min) / (n_points + 1); }
  double point(int i) const { return phi_min + (i + 1) * step(); }
  static SpatialGrid symmetric(double half_width, int n_points);
};

/// Lowest eigenpairs of the discretized Hamiltonian. Wavefunctions are real,
/// orthonormal under the grid inner product sum_i psi_a(i) psi_b(i) h.
struct SpectralBasis {
  SpatialGrid grid;
  double mass = 0.0;
  std::vector<double> energies;           // ascending, J
  std::vector<std::vector<double>> modes; // modes[k][i]

  int size() const { return static_cast<int>(energies.size()); }
};

/// Complex amplitudes on the grid points of a SpatialGrid.
struct FluxState {
  std::vector<std::complex<double>> amplitudes;

  double norm_sq(double step) const;
};

/// beta = 2 pi L I_c / Phi_0 and whether it lies strictly inside (1, 5pi/2).
std::pair<double, bool> bistability_index(const SquidParams& params);
bool is_bistable_beta(double beta);

/// Positive root phi0 of sin(2 pi phi) = (Phi_0 / L I_c) phi in (0, 1/2),
/// bisected to 1e-12 relative. Throws PhysicsError outside the bistable range.
double find_minima(const SquidParams& params);

/// Ring potential V(phi) in J for the selected form, up to a constant:
/// quartic (pi^3/3) I_c Phi_0 (phi^2 - phi0^2)^2, or the full
/// Phi_0^2 phi^2 / 2L + (I_c Phi_0 / 2pi) cos(2 pi phi).
double squid_potential(const SquidParams& params, double phi0, double phi);

/// Second derivative of the selected potential at the well minimum, J per
/// dimensionless flux squared.
double squid_curvature(const SquidParams& params, double phi0);

/// Lowest `modes` eigenpairs of H = -hbar^2/(2 m) d^2/dphi^2 + V(phi) with
/// second-order central differences and Dirichlet boundaries. The potential
/// is sampled on the grid; the tridiagonal eigenproblem is delegated to
/// LAPACK. check_truncation demands boundary amplitudes below 1e-6 of each
/// mode's maximum.
SpectralBasis solve_schrodinger(const SpatialGrid& grid, const std::function<double(double)>& potential,
                                double mass, int modes, bool check_truncation = false);

/// SQUID eigensolve on the selected potential form, with truncation check.
SpectralBasis eigensolve(const SquidParams& params, const SpatialGrid& grid, int modes);

/// Default grid: symmetric domain +-(phi0 + 10 sigma0 estimate).
SpatialGrid default_grid(const SquidParams& params, int n_points = 2048);

/// Well parameters plus eigensolver splitting and tunneling period.
DoubleWellSummary well_summary(const SquidParams& params, const SpatialGrid& grid, int modes);

/// Doublet combinations (psi_0 +- psi_1)/sqrt(2), labelled by the half-line
/// carrying > 0.9 of the probability. Throws PhysicsError when neither
/// combination localizes. Returned masses are the half-line weights.
struct LocalizedStates {
  FluxState plus;
  FluxState minus;
  double mass_plus = 0.0;  // weight of `plus` on phi > 0
  double mass_minus = 0.0; // weight of `minus` on phi < 0
};
LocalizedStates localized_states(const SpectralBasis& basis);

/// Joint probability of the (mid, fin) flux-sign history: prepares the
/// localized state of the prep sign, propagates with spectral phases in an
/// M-mode basis, applies the half-line projector on the grid (the phi = 0
/// point, when present, carries half weight per side) and re-expands.
/// Throws PhysicsError when re-expansion leaks more than 1e-3 of the norm.
double flux_sign_probability(const SpectralBasis& basis, int prep, double t_ab, int mid,
                             double t_bc, int fin, int modes);

/// Two-time analogue: probability of result after a single evolution.
double flux_pair_probability(const SpectralBasis& basis, int prep, double t, int result,
                             int modes);

/// Full correlation table of the flux sign at one (t_ab, t_bc).
CorrelationTable flux_correlation_table(const SpectralBasis& basis, double t_ab, double t_bc,
                                        int modes);

/// Supremum deviation of the flux tables from the spin closed forms with
/// Omega = pi / tunnel_period over an n x n midpoint time grid.
double two_level_consistency(const SpectralBasis& basis, int n, int modes);

/// Dynamics interface over a solved SQUID spectrum; |X| = 1 (flux sign).
class SquidDynamics final : public Dynamics {
 public:
  SquidDynamics(SpectralBasis basis, int modes);

  CorrelationTable correlations(double t_ab, double t_bc) const override;
  double period() const override { return period_; }
  double magnitude() const override { return 1.0; }

  const SpectralBasis& basis() const { return basis_; }
  double tunnel_period() const { return tunnel_period_; }

 private:
  SpectralBasis basis_;
  int modes_;
  double tunnel_period_;
  double period_;
};

} // namespace tbi

#endif
