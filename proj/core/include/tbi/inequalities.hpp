#ifndef TBI_INEQUALITIES_HPP
#define TBI_INEQUALITIES_HPP

#include <array>
#include <string>
#include <vector>

#include "tbi/dynamics.hpp"
#include "tbi/two_level.hpp"

namespace tbi {

enum class InequalityType { I, II, III };

std::string to_string(InequalityType type);
InequalityType parse_inequality_type(const std::string& text);

/// One choice of measurement results (X_a, X_b, X_c) up to magnitude.
struct SignAssignment {
  int s_a = +1;
  int s_b = +1;
  int s_c = +1;

  /// The 8 assignments in fixed lexicographic order, + before -.
  static const std::array<SignAssignment, 8>& all();
  SignAssignment flipped() const { return {-s_a, -s_b, -s_c}; }

  std::string str() const;                           // e.g. "+--"
  static SignAssignment parse(const std::string& s); // inverse of str()
};

/// One (t_ab, t_bc) grid point: inequality excess and the effective
/// uncertainties of its measurement events, in units of |X|.
struct ViolationCell {
  double t_ab = 0.0;
  double t_bc = 0.0;
  double delta_p = 0.0;
  double dx_ab = 0.0;
  double dx_ac = 0.0;
  double dx_bc = 0.0;

  double max_dx() const { return std::max(dx_ab, std::max(dx_ac, dx_bc)); }
};

/// Three-time joint distribution reconstructed from the quantum two-time
/// marginals. Entries q[s_b][s_c] may be negative; the marginal sums match
/// p^{ab} and p^{ac} by construction.
struct PseudoJoint {
  int s_a = +1;
  int reference_branch = +1;
  double q[2][2] = {};

  double entry(int s_b, int s_c) const { return q[sign_index(s_b)][sign_index(s_c)]; }
  double min_entry() const;
  double sum() const;
};

/// Inequality excess Delta P_alpha from an already computed table.
/// Type I:  p^{ac}_{a,c} - p^{ab}_{a,b} - p^{bc}(mid = -s_b, fin = s_c)
/// Type II: p^{ab}_{a,b} - p^{ac}_{a,c} - p^{bc}(mid = s_b, fin = -s_c)
/// Type III is rejected: it requires an undetermined preparation.
double delta_p(InequalityType type, const SignAssignment& signs, const CorrelationTable& table);
double delta_p(InequalityType type, const SignAssignment& signs, double t_ab, double t_bc,
               const Dynamics& dynamics);

/// Reconstructs the pseudo-joint for preparation s_a: the two entries with
/// s_b = reference_branch keep their quantum sequential values, the other two
/// are fixed by the p^{ac} column marginals.
PseudoJoint pseudo_joint(int s_a, int reference_branch, const CorrelationTable& table);
PseudoJoint pseudo_joint(int s_a, double t_ab, double t_bc, int reference_branch,
                         const Dynamics& dynamics);

/// Cell for one grid point. The uncertainties cover every measurement event
/// appearing in the three terms of Delta P with its assigned outcome; in
/// type I the b event is assigned s_b by the ab term and -s_b by the bc
/// term's history, so dx_ab takes the larger of the two readings.
ViolationCell make_cell(InequalityType type, const SignAssignment& signs,
                        const CorrelationTable& table);

/// Midpoint-sampled N x N map over (0, tau]^2, row-major in (t_ab, t_bc).
std::vector<ViolationCell> violation_map(InequalityType type, const SignAssignment& signs,
                                         int n, const Dynamics& dynamics);

} // namespace tbi

#endif
