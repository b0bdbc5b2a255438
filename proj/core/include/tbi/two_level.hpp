#ifndef TBI_TWO_LEVEL_HPP
#define TBI_TWO_LEVEL_HPP

#include <complex>
#include <limits>
#include <utility>

namespace tbi {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Pure state of a bistable system on the {|+>, |->} basis. States may be
/// subnormalized: after projective filtering the squared norm carries the
/// probability weight of the surviving branch.
struct TwoLevelState {
  std::complex<double> c_plus{0.0, 0.0};
  std::complex<double> c_minus{0.0, 0.0};

  double norm_sq() const { return std::norm(c_plus) + std::norm(c_minus); }

  static TwoLevelState plus() { return {{1.0, 0.0}, {0.0, 0.0}}; }
  static TwoLevelState minus() { return {{0.0, 0.0}, {1.0, 0.0}}; }
  /// Basis state for a prepared outcome sign (+1 or -1).
  static TwoLevelState prepared(int sign) { return sign > 0 ? plus() : minus(); }
};

/// One value of a dichotomic observable: sign * magnitude, with magnitude |X|.
/// Spin components use |X| = 1/2, the trapped-flux sign uses |X| = 1.
struct Outcome {
  int sign = +1;          // +1 or -1
  double magnitude = 0.5; // |X| > 0

  double value() const { return static_cast<double>(sign) * magnitude; }
  Outcome flipped() const { return {-sign, magnitude}; }
};

inline Outcome spin_outcome(int sign) { return {sign, 0.5}; }
inline Outcome flux_outcome(int sign) { return {sign, 1.0}; }

/// Maps an outcome sign to the fixed enumeration index (+ before -).
inline int sign_index(int sign) { return sign > 0 ? 0 : 1; }
inline int index_sign(int index) { return index == 0 ? +1 : -1; }

/// Rabi precession parameters. period = 2*pi/omega; a zero frequency means
/// frozen dynamics and an infinite period.
struct RabiParams {
  double omega = 0.0;
  double period = std::numeric_limits<double>::infinity();

  static RabiParams from_omega(double omega);
};

/// Two-time and sequential joint probabilities at fixed (t_ab, t_bc),
/// indexed by outcome signs through sign_index().
struct CorrelationTable {
  double t_ab = 0.0;
  double t_bc = 0.0;
  double p_ab[2][2] = {};       // [prep][result at t_ab]
  double p_ac[2][2] = {};       // [prep][result at t_ab + t_bc]
  double p_bc[2][2][2] = {};    // [prep][mid at t_ab][fin after t_bc], joint

  double ab(int s_a, int s_b) const { return p_ab[sign_index(s_a)][sign_index(s_b)]; }
  double ac(int s_a, int s_c) const { return p_ac[sign_index(s_a)][sign_index(s_c)]; }
  double bc(int s_a, int s_b, int s_c) const {
    return p_bc[sign_index(s_a)][sign_index(s_b)][sign_index(s_c)];
  }
};

/// Folds an angle into [0, 2*pi). Applied to every trigonometric argument so
/// large phase accumulations do not lose precision in sin/cos.
double fold_angle(double angle);

/// Applies exp(-i Omega sigma_x dt). Norm preserving; dt must be >= 0.
TwoLevelState evolve(const TwoLevelState& state, const RabiParams& params, double dt);

/// Projects onto the outcome's branch. Returns the filtered, unnormalized
/// state plus the branch probability relative to the input's squared norm.
/// Throws std::domain_error on a zero-norm input (impossible branch).
std::pair<TwoLevelState, double> apply_projector(const TwoLevelState& state,
                                                 const Outcome& outcome);

/// p^{ab}-style two-time probability: |Pi_result U(t) |prep>|^2.
double pair_probability(const Outcome& prep, double t, const Outcome& result,
                        const RabiParams& params);

/// Joint probability of (mid, fin) for the measurement chain
/// Pi_fin U(t_bc) Pi_mid U(t_ab) |prep>.
double sequential_joint_probability(const Outcome& prep, double t_ab, const Outcome& mid,
                                    double t_bc, const Outcome& fin,
                                    const RabiParams& params);

enum class UncertaintyKind { ab, ac, bc };

/// Effective uncertainty sqrt(sum_x (assigned - x)^2 p[..x]) in absolute
/// units of the observable. kind=ab uses (prep, mid, t_ab); kind=ac assigns
/// fin after t_ab + t_bc; kind=bc weights with the joint sequential
/// probabilities p^{bc}(prep, mid, .).
double effective_uncertainty(UncertaintyKind kind, const Outcome& prep, const Outcome& mid,
                             const Outcome& fin, double t_ab, double t_bc,
                             const RabiParams& params);

/// Correlation table obtained by amplitude propagation (evolve + projectors).
CorrelationTable correlation_table(double t_ab, double t_bc, const RabiParams& params);

/// Analytic spin-1/2 table: p^{ab}_{+-} = sin^2(Omega t_ab),
/// p^{ac}_{+-} = sin^2(Omega (t_ab + t_bc)),
/// p^{bc}_{+-} = cos^2(Omega t_ab) sin^2(Omega t_bc), plus sign complements.
CorrelationTable spin_closed_form(double t_ab, double t_bc, const RabiParams& params);

} // namespace tbi

#endif
