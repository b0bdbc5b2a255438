#include "tbi/squid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <lapacke.h>

#include "tbi/errors.hpp"

namespace tbi {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kLeakageTol = 1e-3;
constexpr double kLocalizationMass = 0.9;

void require_positive_circuit(const SquidParams& params) {
  if (!(params.inductance > 0.0 && params.capacitance > 0.0 && params.critical_current > 0.0)) {
    throw std::invalid_argument("squid: L, C and I_c must all be > 0");
  }
}

// Index of the phi = 0 grid point, or -1 when the mesh does not hit zero.
int zero_point_index(const SpatialGrid& grid) {
  const double h = grid.step();
  for (int i = 0; i < grid.n_points; ++i) {
    if (std::abs(grid.point(i)) < 0.25 * h) {
      return i;
    }
  }
  return -1;
}

std::vector<std::complex<double>> expand(const SpectralBasis& basis, const FluxState& state,
                                         int modes) {
  const double h = basis.grid.step();
  std::vector<std::complex<double>> coeffs(modes);
  for (int k = 0; k < modes; ++k) {
    std::complex<double> acc{0.0, 0.0};
    const auto& mode = basis.modes[k];
    for (int i = 0; i < basis.grid.n_points; ++i) {
      acc += mode[i] * state.amplitudes[i];
    }
    coeffs[k] = acc * h;
  }
  return coeffs;
}

FluxState reconstruct(const SpectralBasis& basis, const std::vector<std::complex<double>>& coeffs) {
  FluxState state;
  state.amplitudes.assign(basis.grid.n_points, {0.0, 0.0});
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const auto& mode = basis.modes[k];
    const auto c = coeffs[k];
    for (int i = 0; i < basis.grid.n_points; ++i) {
      state.amplitudes[i] += c * mode[i];
    }
  }
  return state;
}

void evolve_phases(const SpectralBasis& basis, std::vector<std::complex<double>>& coeffs,
                   double t) {
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double phase = -basis.energies[k] * t / kHbar;
    coeffs[k] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
}

// Grid-level Theta(sign * phi): zero the opposite half-line; a phi = 0 point
// keeps amplitude / sqrt(2) so its probability weight splits evenly.
FluxState project_half_line(const SpatialGrid& grid, const FluxState& state, int sign,
                            int zero_index) {
  FluxState out;
  out.amplitudes.assign(grid.n_points, {0.0, 0.0});
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  for (int i = 0; i < grid.n_points; ++i) {
    if (i == zero_index) {
      out.amplitudes[i] = state.amplitudes[i] * kInvSqrt2;
    } else if (sign * grid.point(i) > 0.0) {
      out.amplitudes[i] = state.amplitudes[i];
    }
  }
  return out;
}

double coeff_norm_sq(const std::vector<std::complex<double>>& coeffs) {
  double sum = 0.0;
  for (const auto& c : coeffs) {
    sum += std::norm(c);
  }
  return sum;
}

// Re-expansion in the truncated basis after a projection; errors out when the
// modes cannot carry the projected state.
std::vector<std::complex<double>> reexpand_checked(const SpectralBasis& basis,
                                                   const FluxState& projected, int modes) {
  const double grid_norm = projected.norm_sq(basis.grid.step());
  auto coeffs = expand(basis, projected, modes);
  const double kept = coeff_norm_sq(coeffs);
  if (grid_norm - kept > kLeakageTol * grid_norm) {
    throw PhysicsError("basis truncation: projection leaks " +
                       std::to_string(grid_norm - kept) + " of norm " +
                       std::to_string(grid_norm) + "; increase the mode count");
  }
  return coeffs;
}

void validate_sign(int sign, const char* name) {
  if (sign != +1 && sign != -1) {
    throw std::invalid_argument(std::string(name) + " must be +1 or -1");
  }
}

} // namespace

std::string to_string(PotentialForm form) {
  return form == PotentialForm::quartic ? "quartic" : "full_cosine";
}

PotentialForm parse_potential_form(const std::string& text) {
  if (text == "quartic") return PotentialForm::quartic;
  if (text == "full_cosine") return PotentialForm::full_cosine;
  throw std::invalid_argument("unknown potential form: " + text);
}

SpatialGrid SpatialGrid::symmetric(double half_width, int n_points) {
  if (!(half_width > 0.0)) {
    throw std::invalid_argument("SpatialGrid: half_width must be > 0");
  }
  return {-half_width, half_width, n_points};
}

double FluxState::norm_sq(double step) const {
  double sum = 0.0;
  for (const auto& a : amplitudes) {
    sum += std::norm(a);
  }
  return sum * step;
}

bool is_bistable_beta(double beta) { return beta > 1.0 && beta < 2.5 * kPi; }

std::pair<double, bool> bistability_index(const SquidParams& params) {
  require_positive_circuit(params);
  const double beta =
      kTwoPi * params.inductance * params.critical_current / kFluxQuantum;
  return {beta, is_bistable_beta(beta)};
}

double find_minima(const SquidParams& params) {
  const auto [beta, bistable] = bistability_index(params);
  if (!bistable) {
    throw PhysicsError("find_minima: not bistable (no double well), beta = " +
                       std::to_string(beta));
  }
  const double ratio = kFluxQuantum / (params.inductance * params.critical_current);
  const auto residual = [ratio](double phi) { return std::sin(kTwoPi * phi) - ratio * phi; };
  // residual > 0 just above zero for beta > 1 and < 0 at 1/2.
  double lo = 1e-9;
  double hi = 0.5;
  if (!(residual(lo) > 0.0)) {
    throw PhysicsError("find_minima: root bracket failed, beta = " + std::to_string(beta));
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double squid_potential(const SquidParams& params, double phi0, double phi) {
  if (params.potential_form == PotentialForm::quartic) {
    const double d = (phi - phi0) * (phi + phi0);
    return (kPi * kPi * kPi / 3.0) * params.critical_current * kFluxQuantum * d * d;
  }
  return kFluxQuantum * kFluxQuantum * phi * phi / (2.0 * params.inductance) +
         params.critical_current * kFluxQuantum / kTwoPi * std::cos(kTwoPi * phi);
}

double squid_curvature(const SquidParams& params, double phi0) {
  if (params.potential_form == PotentialForm::quartic) {
    return 8.0 * (kPi * kPi * kPi / 3.0) * params.critical_current * kFluxQuantum * phi0 * phi0;
  }
  return kFluxQuantum * kFluxQuantum / params.inductance -
         kTwoPi * params.critical_current * kFluxQuantum * std::cos(kTwoPi * phi0);
}

SpectralBasis solve_schrodinger(const SpatialGrid& grid,
                                const std::function<double(double)>& potential, double mass,
                                int modes, bool check_truncation) {
  if (grid.n_points < 128) {
    throw std::invalid_argument("solve_schrodinger: n_points must be >= 128");
  }
  if (modes < 1 || modes > 32) {
    throw std::invalid_argument("solve_schrodinger: modes must lie in [1, 32]");
  }
  if (!(mass > 0.0)) {
    throw std::invalid_argument("solve_schrodinger: mass must be > 0");
  }
  const int n = grid.n_points;
  const double h = grid.step();
  const double kinetic = kHbar * kHbar / (2.0 * mass * h * h);

  std::vector<double> diag(n);
  std::vector<double> offd(n > 1 ? n - 1 : 1, -kinetic);
  for (int i = 0; i < n; ++i) {
    diag[i] = 2.0 * kinetic + potential(grid.point(i));
  }

  std::vector<double> w(n);
  std::vector<double> z(static_cast<std::size_t>(n) * modes);
  std::vector<lapack_int> isuppz(2 * modes);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), offd.data(), 0.0, 0.0, 1, modes,
      LAPACKE_dlamch('S'), &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0 || found < modes) {
    throw PhysicsError("solve_schrodinger: tridiagonal eigensolver failed, info = " +
                       std::to_string(info));
  }

  SpectralBasis basis;
  basis.grid = grid;
  basis.mass = mass;
  basis.energies.assign(w.begin(), w.begin() + modes);
  basis.modes.resize(modes);
  const double scale = 1.0 / std::sqrt(h);
  for (int k = 0; k < modes; ++k) {
    auto& mode = basis.modes[k];
    mode.resize(n);
    const double* col = z.data() + static_cast<std::size_t>(k) * n;
    // Canonical sign: the largest-magnitude sample is positive.
    int peak = 0;
    for (int i = 1; i < n; ++i) {
      if (std::abs(col[i]) > std::abs(col[peak])) {
        peak = i;
      }
    }
    const double flip = col[peak] < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) {
      mode[i] = flip * scale * col[i];
    }
    if (check_truncation) {
      const double max_abs = std::abs(col[peak]);
      if (std::abs(col[0]) > 1e-6 * max_abs || std::abs(col[n - 1]) > 1e-6 * max_abs) {
        throw PhysicsError("domain truncation: mode " + std::to_string(k) +
                           " has boundary amplitude above 1e-6 of its peak; widen the grid");
      }
    }
  }
  for (int k = 1; k < modes; ++k) {
    if (!(basis.energies[k] >= basis.energies[k - 1])) {
      throw PhysicsError("solve_schrodinger: eigenvalues not ascending");
    }
  }
  return basis;
}

SpectralBasis eigensolve(const SquidParams& params, const SpatialGrid& grid, int modes) {
  require_positive_circuit(params);
  // Only the quartic form needs the well position; the full cosine is
  // defined for any circuit values, bistable or not.
  const double phi0 =
      params.potential_form == PotentialForm::quartic ? find_minima(params) : 0.0;
  const auto potential = [&params, phi0](double phi) {
    return squid_potential(params, phi0, phi);
  };
  return solve_schrodinger(grid, potential, params.effective_mass(), modes, true);
}

SpatialGrid default_grid(const SquidParams& params, int n_points) {
  const double phi0 = find_minima(params);
  const double omega0 = std::sqrt(squid_curvature(params, phi0) / params.effective_mass());
  const double sigma0 = std::sqrt(kHbar / (2.0 * params.effective_mass() * omega0));
  return SpatialGrid::symmetric(phi0 + 10.0 * sigma0, n_points);
}

DoubleWellSummary well_summary(const SquidParams& params, const SpatialGrid& grid, int modes) {
  const auto [beta, bistable] = bistability_index(params);
  if (!bistable) {
    throw PhysicsError("well_summary: not bistable, beta = " + std::to_string(beta));
  }
  DoubleWellSummary summary;
  summary.beta = beta;
  summary.phi0 = find_minima(params);
  summary.barrier = (kPi * kPi * kPi / 3.0) * params.critical_current * kFluxQuantum *
                    summary.phi0 * summary.phi0 * summary.phi0 * summary.phi0;
  summary.omega0 = std::sqrt(squid_curvature(params, summary.phi0) / params.effective_mass());
  summary.sigma0_sq = kHbar / (2.0 * params.effective_mass() * summary.omega0);

  const auto basis = eigensolve(params, grid, std::max(2, modes));
  summary.splitting = basis.energies[1] - basis.energies[0];
  summary.tunnel_period = kTwoPi * kHbar / summary.splitting;
  return summary;
}

LocalizedStates localized_states(const SpectralBasis& basis) {
  if (basis.size() < 2) {
    throw std::invalid_argument("localized_states: need at least 2 modes");
  }
  const int n = basis.grid.n_points;
  const double h = basis.grid.step();
  const int zero_index = zero_point_index(basis.grid);
  constexpr double kInvSqrt2 = 0.70710678118654752440;

  FluxState sum_state, diff_state;
  sum_state.amplitudes.resize(n);
  diff_state.amplitudes.resize(n);
  for (int i = 0; i < n; ++i) {
    sum_state.amplitudes[i] = kInvSqrt2 * (basis.modes[0][i] + basis.modes[1][i]);
    diff_state.amplitudes[i] = kInvSqrt2 * (basis.modes[0][i] - basis.modes[1][i]);
  }

  const auto half_mass = [&](const FluxState& state, int sign) {
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
      const double weight = i == zero_index ? 0.5 : (sign * basis.grid.point(i) > 0.0 ? 1.0 : 0.0);
      mass += weight * std::norm(state.amplitudes[i]);
    }
    return mass * h;
  };

  const double sum_right = half_mass(sum_state, +1);
  LocalizedStates states;
  if (sum_right > kLocalizationMass) {
    states.plus = std::move(sum_state);
    states.minus = std::move(diff_state);
    states.mass_plus = sum_right;
  } else if (1.0 - sum_right > kLocalizationMass) {
    states.plus = std::move(diff_state);
    states.minus = std::move(sum_state);
    states.mass_plus = half_mass(states.plus, +1);
  } else {
    throw PhysicsError("localized_states: two-level regime invalid, half-line mass " +
                       std::to_string(sum_right));
  }
  states.mass_minus = half_mass(states.minus, -1);
  if (states.mass_minus <= kLocalizationMass) {
    throw PhysicsError("localized_states: two-level regime invalid, half-line mass " +
                       std::to_string(states.mass_minus));
  }
  return states;
}

double flux_pair_probability(const SpectralBasis& basis, int prep, double t, int result,
                             int modes) {
  validate_sign(prep, "prep");
  validate_sign(result, "result");
  if (!(t >= 0.0)) {
    throw std::invalid_argument("t must be >= 0");
  }
  const auto localized = localized_states(basis);
  const auto& start = prep > 0 ? localized.plus : localized.minus;
  auto coeffs = expand(basis, start, modes);
  evolve_phases(basis, coeffs, t);
  const auto state = reconstruct(basis, coeffs);
  const auto projected =
      project_half_line(basis.grid, state, result, zero_point_index(basis.grid));
  return projected.norm_sq(basis.grid.step());
}

double flux_sign_probability(const SpectralBasis& basis, int prep, double t_ab, int mid,
                             double t_bc, int fin, int modes) {
  validate_sign(prep, "prep");
  validate_sign(mid, "mid");
  validate_sign(fin, "fin");
  if (!(t_ab >= 0.0 && t_bc >= 0.0)) {
    throw std::invalid_argument("times must be >= 0");
  }
  const int zero_index = zero_point_index(basis.grid);
  const auto localized = localized_states(basis);
  const auto& start = prep > 0 ? localized.plus : localized.minus;

  auto coeffs = expand(basis, start, modes);
  evolve_phases(basis, coeffs, t_ab);
  const auto at_b = reconstruct(basis, coeffs);
  const auto filtered = project_half_line(basis.grid, at_b, mid, zero_index);

  auto mid_coeffs = reexpand_checked(basis, filtered, modes);
  evolve_phases(basis, mid_coeffs, t_bc);
  const auto at_c = reconstruct(basis, mid_coeffs);
  const auto final_state = project_half_line(basis.grid, at_c, fin, zero_index);
  return final_state.norm_sq(basis.grid.step());
}

CorrelationTable flux_correlation_table(const SpectralBasis& basis, double t_ab, double t_bc,
                                        int modes) {
  if (!(t_ab >= 0.0 && t_bc >= 0.0)) {
    throw std::invalid_argument("times must be >= 0");
  }
  const double h = basis.grid.step();
  const int zero_index = zero_point_index(basis.grid);
  const auto localized = localized_states(basis);

  CorrelationTable table;
  table.t_ab = t_ab;
  table.t_bc = t_bc;
  for (int a = 0; a < 2; ++a) {
    const auto& start = a == 0 ? localized.plus : localized.minus;
    auto coeffs = expand(basis, start, modes);

    auto ac_coeffs = coeffs;
    evolve_phases(basis, ac_coeffs, t_ab + t_bc);
    const auto at_c = reconstruct(basis, ac_coeffs);
    for (int c = 0; c < 2; ++c) {
      table.p_ac[a][c] =
          project_half_line(basis.grid, at_c, index_sign(c), zero_index).norm_sq(h);
    }

    evolve_phases(basis, coeffs, t_ab);
    const auto at_b = reconstruct(basis, coeffs);
    for (int b = 0; b < 2; ++b) {
      const auto filtered = project_half_line(basis.grid, at_b, index_sign(b), zero_index);
      table.p_ab[a][b] = filtered.norm_sq(h);

      auto mid_coeffs = reexpand_checked(basis, filtered, modes);
      evolve_phases(basis, mid_coeffs, t_bc);
      const auto later = reconstruct(basis, mid_coeffs);
      for (int c = 0; c < 2; ++c) {
        table.p_bc[a][b][c] =
            project_half_line(basis.grid, later, index_sign(c), zero_index).norm_sq(h);
      }
    }
  }
  return table;
}

double two_level_consistency(const SpectralBasis& basis, int n, int modes) {
  if (n < 2) {
    throw std::invalid_argument("two_level_consistency: grid size must be >= 2");
  }
  if (basis.size() < 2) {
    throw std::invalid_argument("two_level_consistency: need at least 2 modes");
  }
  const double splitting = basis.energies[1] - basis.energies[0];
  const double tunnel_period = kTwoPi * kHbar / splitting;
  const auto rabi = RabiParams::from_omega(kPi / tunnel_period);
  const double tau = rabi.period;
  const double step = tau / n;

  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t_ab = (i + 0.5) * step;
    for (int j = 0; j < n; ++j) {
      const double t_bc = (j + 0.5) * step;
      const auto flux = flux_correlation_table(basis, t_ab, t_bc, modes);
      const auto spin = spin_closed_form(t_ab, t_bc, rabi);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          sup = std::max(sup, std::abs(flux.p_ab[a][b] - spin.p_ab[a][b]));
          sup = std::max(sup, std::abs(flux.p_ac[a][b] - spin.p_ac[a][b]));
          for (int c = 0; c < 2; ++c) {
            sup = std::max(sup, std::abs(flux.p_bc[a][b][c] - spin.p_bc[a][b][c]));
          }
        }
      }
    }
  }
  return sup;
}

SquidDynamics::SquidDynamics(SpectralBasis basis, int modes)
    : basis_(std::move(basis)), modes_(modes) {
  if (basis_.size() < 2 || modes_ < 2 || modes_ > basis_.size()) {
    throw std::invalid_argument("SquidDynamics: need 2 <= modes <= basis size");
  }
  const double splitting = basis_.energies[1] - basis_.energies[0];
  if (!(splitting > 0.0)) {
    throw PhysicsError("SquidDynamics: degenerate doublet, no tunneling period");
  }
  tunnel_period_ = kTwoPi * kHbar / splitting;
  // The flux-sign probabilities oscillate as sin^2(pi t / tunnel_period);
  // the matching two-level state period is twice that.
  period_ = 2.0 * tunnel_period_;
}

CorrelationTable SquidDynamics::correlations(double t_ab, double t_bc) const {
  return flux_correlation_table(basis_, t_ab, t_bc, modes_);
}

} // namespace tbi
