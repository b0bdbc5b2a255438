#include "tbi/two_level.hpp"

#include <cmath>
#include <stdexcept>

#include "tbi/dynamics.hpp"

namespace tbi {

namespace {

const std::complex<double> kMinusI{0.0, -1.0};

void require_nonnegative_time(double t, const char* name) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be >= 0");
  }
}

// cos^2 / sin^2 of the folded angle, picked by whether the two signs agree.
double transition(double angle, int from, int to) {
  const double a = fold_angle(angle);
  const double c = std::cos(a);
  const double s = std::sin(a);
  return from == to ? c * c : s * s;
}

} // namespace

double fold_angle(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) {
    a += kTwoPi;
  }
  return a;
}

RabiParams RabiParams::from_omega(double omega) {
  if (!(omega >= 0.0)) {
    throw std::invalid_argument("omega must be >= 0");
  }
  RabiParams p;
  p.omega = omega;
  p.period = omega > 0.0 ? kTwoPi / omega : std::numeric_limits<double>::infinity();
  return p;
}

TwoLevelState evolve(const TwoLevelState& state, const RabiParams& params, double dt) {
  require_nonnegative_time(dt, "dt");
  const double angle = fold_angle(params.omega * dt);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  TwoLevelState out;
  out.c_plus = c * state.c_plus + kMinusI * s * state.c_minus;
  out.c_minus = c * state.c_minus + kMinusI * s * state.c_plus;
  return out;
}

std::pair<TwoLevelState, double> apply_projector(const TwoLevelState& state,
                                                 const Outcome& outcome) {
  const double in_norm = state.norm_sq();
  if (in_norm == 0.0) {
    throw std::domain_error("apply_projector: zero-norm state, measurement branch impossible");
  }
  TwoLevelState filtered = state;
  if (outcome.sign > 0) {
    filtered.c_minus = 0.0;
  } else {
    filtered.c_plus = 0.0;
  }
  return {filtered, filtered.norm_sq() / in_norm};
}

double pair_probability(const Outcome& prep, double t, const Outcome& result,
                        const RabiParams& params) {
  require_nonnegative_time(t, "t");
  if (prep.magnitude != result.magnitude) {
    throw std::invalid_argument("pair_probability: outcome magnitudes differ");
  }
  auto state = evolve(TwoLevelState::prepared(prep.sign), params, t);
  if (result.sign > 0) {
    state.c_minus = 0.0;
  } else {
    state.c_plus = 0.0;
  }
  return state.norm_sq();
}

double sequential_joint_probability(const Outcome& prep, double t_ab, const Outcome& mid,
                                    double t_bc, const Outcome& fin,
                                    const RabiParams& params) {
  require_nonnegative_time(t_ab, "t_ab");
  require_nonnegative_time(t_bc, "t_bc");
  if (prep.magnitude != mid.magnitude || prep.magnitude != fin.magnitude) {
    throw std::invalid_argument("sequential_joint_probability: outcome magnitudes differ");
  }
  auto state = evolve(TwoLevelState::prepared(prep.sign), params, t_ab);
  if (mid.sign > 0) {
    state.c_minus = 0.0;
  } else {
    state.c_plus = 0.0;
  }
  state = evolve(state, params, t_bc);
  if (fin.sign > 0) {
    state.c_minus = 0.0;
  } else {
    state.c_plus = 0.0;
  }
  return state.norm_sq();
}

double effective_uncertainty(UncertaintyKind kind, const Outcome& prep, const Outcome& mid,
                             const Outcome& fin, double t_ab, double t_bc,
                             const RabiParams& params) {
  require_nonnegative_time(t_ab, "t_ab");
  require_nonnegative_time(t_bc, "t_bc");
  const double x = prep.magnitude;
  // The assigned value differs from one of the two outcome values by 0 and
  // from the other by 2|X|, so the variance reduces to 4 X^2 times the
  // probability of the complementary result.
  switch (kind) {
    case UncertaintyKind::ab:
      return 2.0 * x * std::sqrt(pair_probability(prep, t_ab, mid.flipped(), params));
    case UncertaintyKind::ac:
      return 2.0 * x * std::sqrt(pair_probability(prep, t_ab + t_bc, fin.flipped(), params));
    case UncertaintyKind::bc:
      return 2.0 * x *
             std::sqrt(sequential_joint_probability(prep, t_ab, mid, t_bc, fin.flipped(), params));
  }
  throw std::invalid_argument("effective_uncertainty: unknown kind");
}

CorrelationTable correlation_table(double t_ab, double t_bc, const RabiParams& params) {
  require_nonnegative_time(t_ab, "t_ab");
  require_nonnegative_time(t_bc, "t_bc");
  CorrelationTable table;
  table.t_ab = t_ab;
  table.t_bc = t_bc;
  for (int a = 0; a < 2; ++a) {
    const auto prep = TwoLevelState::prepared(index_sign(a));
    const auto at_b = evolve(prep, params, t_ab);
    const auto at_c = evolve(prep, params, t_ab + t_bc);
    for (int b = 0; b < 2; ++b) {
      TwoLevelState filtered = at_b;
      (b == 0 ? filtered.c_minus : filtered.c_plus) = 0.0;
      table.p_ab[a][b] = filtered.norm_sq();

      const auto later = evolve(filtered, params, t_bc);
      for (int c = 0; c < 2; ++c) {
        TwoLevelState fin = later;
        (c == 0 ? fin.c_minus : fin.c_plus) = 0.0;
        table.p_bc[a][b][c] = fin.norm_sq();
      }
    }
    for (int c = 0; c < 2; ++c) {
      TwoLevelState fin = at_c;
      (c == 0 ? fin.c_minus : fin.c_plus) = 0.0;
      table.p_ac[a][c] = fin.norm_sq();
    }
  }
  return table;
}

CorrelationTable spin_closed_form(double t_ab, double t_bc, const RabiParams& params) {
  require_nonnegative_time(t_ab, "t_ab");
  require_nonnegative_time(t_bc, "t_bc");
  const double angle_ab = params.omega * t_ab;
  const double angle_bc = params.omega * t_bc;
  const double angle_ac = params.omega * (t_ab + t_bc);
  CorrelationTable table;
  table.t_ab = t_ab;
  table.t_bc = t_bc;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      table.p_ab[a][b] = transition(angle_ab, a, b);
      for (int c = 0; c < 2; ++c) {
        table.p_bc[a][b][c] = transition(angle_ab, a, b) * transition(angle_bc, b, c);
      }
    }
    for (int c = 0; c < 2; ++c) {
      table.p_ac[a][c] = transition(angle_ac, a, c);
    }
  }
  return table;
}

SpinDynamics::SpinDynamics(const RabiParams& params, double magnitude)
    : params_(params), magnitude_(magnitude) {
  if (!(magnitude > 0.0)) {
    throw std::invalid_argument("SpinDynamics: magnitude must be > 0");
  }
}

CorrelationTable SpinDynamics::correlations(double t_ab, double t_bc) const {
  return correlation_table(t_ab, t_bc, params_);
}

double SpinDynamics::period() const {
  // Frozen dynamics has no intrinsic time scale; grids then span (0, 1] s.
  return std::isfinite(params_.period) ? params_.period : 1.0;
}

} // namespace tbi
