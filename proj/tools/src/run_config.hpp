#ifndef TBI_TOOLS_RUN_CONFIG_HPP
#define TBI_TOOLS_RUN_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbi/inequalities.hpp"
#include "tbi/squid.hpp"

namespace tbi::cli {

/// Invalid or inconsistent run configuration; maps to process exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SquidConfig {
  double inductance = 0.0;       // key "L"
  double capacitance = 0.0;      // key "C"
  double critical_current = 0.0; // key "I_c"
  int flux_bias_integer = 0;     // key "n"
  PotentialForm potential_form = PotentialForm::quartic;
  int n_phi = 2048;
  int modes = 16;

  SquidParams params() const;
};

struct RunConfig {
  std::string system; // "spin" or "squid"
  double omega = 0.0; // rad/s, spin only
  std::optional<SquidConfig> squid;

  InequalityType type = InequalityType::I;
  SignAssignment signs{+1, -1, -1};
  bool all_signs = false;

  int n_time = 256;
  int n_xi = 200;
  double xi_tolerance = 1e-3;
  double magnitude = 0.5; // |X|; defaults to 1/2 (spin) or 1 (flux sign)

  std::string output; // explicit artifact path; commands require it
  std::string format = "csv";
};

/// Validates a JSON document into a RunConfig. Strict: unknown keys are
/// rejected, diagnostics name the exact key path. Type III requests are
/// rejected here since no command can evaluate them.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);

/// Applies one "dotted.path=value" override onto the JSON document. Values
/// parse as JSON scalars when possible and fall back to strings.
void apply_override(nlohmann::json& doc, const std::string& assignment);

} // namespace tbi::cli

#endif
