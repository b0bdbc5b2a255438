#include "tbi/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tbi {

namespace {

constexpr double kMarginalTol = 1e-10;

void reject_type_three(InequalityType type) {
  if (type == InequalityType::III) {
    throw std::invalid_argument(
        "type III inequalities are ruled out by the experimental requirement "
        "that the system is prepared in a definite state at the initial time");
  }
}

// 2 sqrt(p) in units of |X|: the effective uncertainty of a dichotomic
// measurement whose complementary result has probability p. Clamping keeps
// roundoff from pushing probabilities outside [0, 1] and dx past 2.
double uncertainty_from(double p) {
  return 2.0 * std::sqrt(std::clamp(p, 0.0, 1.0));
}

} // namespace

std::string to_string(InequalityType type) {
  switch (type) {
    case InequalityType::I: return "I";
    case InequalityType::II: return "II";
    case InequalityType::III: return "III";
  }
  return "?";
}

InequalityType parse_inequality_type(const std::string& text) {
  if (text == "I") return InequalityType::I;
  if (text == "II") return InequalityType::II;
  if (text == "III") return InequalityType::III;
  throw std::invalid_argument("unknown inequality type: " + text);
}

const std::array<SignAssignment, 8>& SignAssignment::all() {
  static const std::array<SignAssignment, 8> assignments = {{
      {+1, +1, +1}, {+1, +1, -1}, {+1, -1, +1}, {+1, -1, -1},
      {-1, +1, +1}, {-1, +1, -1}, {-1, -1, +1}, {-1, -1, -1},
  }};
  return assignments;
}

std::string SignAssignment::str() const {
  std::string s(3, '+');
  s[0] = s_a > 0 ? '+' : '-';
  s[1] = s_b > 0 ? '+' : '-';
  s[2] = s_c > 0 ? '+' : '-';
  return s;
}

SignAssignment SignAssignment::parse(const std::string& s) {
  if (s.size() != 3 || s.find_first_not_of("+-") != std::string::npos) {
    throw std::invalid_argument("sign assignment must be three of '+'/'-', got: " + s);
  }
  return {s[0] == '+' ? +1 : -1, s[1] == '+' ? +1 : -1, s[2] == '+' ? +1 : -1};
}

double PseudoJoint::min_entry() const {
  double m = q[0][0];
  for (int b = 0; b < 2; ++b) {
    for (int c = 0; c < 2; ++c) {
      m = std::min(m, q[b][c]);
    }
  }
  return m;
}

double PseudoJoint::sum() const { return q[0][0] + q[0][1] + q[1][0] + q[1][1]; }

double delta_p(InequalityType type, const SignAssignment& signs, const CorrelationTable& table) {
  reject_type_three(type);
  if (type == InequalityType::I) {
    return table.ac(signs.s_a, signs.s_c) - table.ab(signs.s_a, signs.s_b) -
           table.bc(signs.s_a, -signs.s_b, signs.s_c);
  }
  return table.ab(signs.s_a, signs.s_b) - table.ac(signs.s_a, signs.s_c) -
         table.bc(signs.s_a, signs.s_b, -signs.s_c);
}

double delta_p(InequalityType type, const SignAssignment& signs, double t_ab, double t_bc,
               const Dynamics& dynamics) {
  reject_type_three(type);
  return delta_p(type, signs, dynamics.correlations(t_ab, t_bc));
}

PseudoJoint pseudo_joint(int s_a, int reference_branch, const CorrelationTable& table) {
  PseudoJoint joint;
  joint.s_a = s_a;
  joint.reference_branch = reference_branch;
  const int ref = sign_index(reference_branch);
  for (int c = 0; c < 2; ++c) {
    joint.q[ref][c] = table.bc(s_a, reference_branch, index_sign(c));
    joint.q[1 - ref][c] = table.ac(s_a, index_sign(c)) - joint.q[ref][c];
  }

  // Marginal consistency is structural; a violation means the table itself
  // is broken.
  if (std::abs(joint.sum() - 1.0) > kMarginalTol) {
    throw std::logic_error("pseudo_joint: entries do not sum to 1");
  }
  for (int b = 0; b < 2; ++b) {
    const double row = joint.q[b][0] + joint.q[b][1];
    if (std::abs(row - table.ab(s_a, index_sign(b))) > kMarginalTol) {
      throw std::logic_error("pseudo_joint: row marginal does not match p_ab");
    }
  }
  for (int c = 0; c < 2; ++c) {
    const double col = joint.q[0][c] + joint.q[1][c];
    if (std::abs(col - table.ac(s_a, index_sign(c))) > kMarginalTol) {
      throw std::logic_error("pseudo_joint: column marginal does not match p_ac");
    }
  }
  return joint;
}

PseudoJoint pseudo_joint(int s_a, double t_ab, double t_bc, int reference_branch,
                         const Dynamics& dynamics) {
  return pseudo_joint(s_a, reference_branch, dynamics.correlations(t_ab, t_bc));
}

ViolationCell make_cell(InequalityType type, const SignAssignment& signs,
                        const CorrelationTable& table) {
  reject_type_three(type);
  ViolationCell cell;
  cell.t_ab = table.t_ab;
  cell.t_bc = table.t_bc;
  cell.delta_p = delta_p(type, signs, table);
  if (type == InequalityType::I) {
    // The b event is assigned s_b by the ab term and -s_b by the bc term's
    // history; both readings must be unambiguous.
    cell.dx_ab = std::max(uncertainty_from(table.ab(signs.s_a, -signs.s_b)),
                          uncertainty_from(table.ab(signs.s_a, signs.s_b)));
    cell.dx_ac = uncertainty_from(table.ac(signs.s_a, -signs.s_c));
    cell.dx_bc = uncertainty_from(table.bc(signs.s_a, -signs.s_b, -signs.s_c));
  } else {
    cell.dx_ab = uncertainty_from(table.ab(signs.s_a, -signs.s_b));
    cell.dx_ac = uncertainty_from(table.ac(signs.s_a, -signs.s_c));
    cell.dx_bc = uncertainty_from(table.bc(signs.s_a, signs.s_b, signs.s_c));
  }
  return cell;
}

std::vector<ViolationCell> violation_map(InequalityType type, const SignAssignment& signs,
                                         int n, const Dynamics& dynamics) {
  reject_type_three(type);
  if (n < 2) {
    throw std::invalid_argument("violation_map: grid size must be >= 2");
  }
  const double tau = dynamics.period();
  const double step = tau / n;
  std::vector<ViolationCell> cells;
  cells.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double t_ab = (i + 0.5) * step;
    for (int j = 0; j < n; ++j) {
      const double t_bc = (j + 0.5) * step;
      cells.push_back(make_cell(type, signs, dynamics.correlations(t_ab, t_bc)));
    }
  }
  return cells;
}

} // namespace tbi
