#ifndef TBI_ERRORS_HPP
#define TBI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tbi {

/// A computation reached a physically or numerically invalid regime
/// (no double well, no violation region, basis truncation, ...).
/// Distinct from std::invalid_argument, which flags caller errors.
class PhysicsError : public std::runtime_error {
 public:
  explicit PhysicsError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tbi

#endif
