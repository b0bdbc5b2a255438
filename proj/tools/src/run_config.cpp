#include "run_config.hpp"

#include <set>

namespace tbi::cli {

namespace {

using nlohmann::json;

std::string joined(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown_keys(const json& obj, const std::string& prefix,
                         const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown key \"" + joined(prefix, key) + "\"");
    }
  }
}

const json& require_key(const json& obj, const std::string& prefix, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError("missing required key \"" + joined(prefix, key) + "\"");
  }
  return *it;
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) {
    throw ConfigError("key \"" + path + "\": expected a number");
  }
  return value.get<double>();
}

int as_integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) {
    throw ConfigError("key \"" + path + "\": expected an integer");
  }
  return value.get<int>();
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) {
    throw ConfigError("key \"" + path + "\": expected a string");
  }
  return value.get<std::string>();
}

double positive_number(const json& obj, const std::string& prefix, const std::string& key) {
  const double v = as_number(require_key(obj, prefix, key), joined(prefix, key));
  if (!(v > 0.0)) {
    throw ConfigError("key \"" + joined(prefix, key) + "\": must be > 0");
  }
  return v;
}

SquidConfig parse_squid(const json& obj) {
  if (!obj.is_object()) {
    throw ConfigError("key \"squid\": expected an object");
  }
  reject_unknown_keys(obj, "squid",
                      {"L", "C", "I_c", "n", "potential_form", "n_phi", "modes"});
  SquidConfig squid;
  squid.inductance = positive_number(obj, "squid", "L");
  squid.capacitance = positive_number(obj, "squid", "C");
  squid.critical_current = positive_number(obj, "squid", "I_c");
  if (obj.contains("n")) {
    squid.flux_bias_integer = as_integer(obj["n"], "squid.n");
  }
  if (obj.contains("potential_form")) {
    try {
      squid.potential_form = parse_potential_form(as_string(obj["potential_form"], "squid.potential_form"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("key \"squid.potential_form\": ") + e.what());
    }
  }
  if (obj.contains("n_phi")) {
    squid.n_phi = as_integer(obj["n_phi"], "squid.n_phi");
    if (squid.n_phi < 128) {
      throw ConfigError("key \"squid.n_phi\": must be >= 128");
    }
  }
  if (obj.contains("modes")) {
    squid.modes = as_integer(obj["modes"], "squid.modes");
    if (squid.modes < 2 || squid.modes > 32) {
      throw ConfigError("key \"squid.modes\": must lie in [2, 32]");
    }
  }
  return squid;
}

} // namespace

SquidParams SquidConfig::params() const {
  SquidParams p;
  p.inductance = inductance;
  p.capacitance = capacitance;
  p.critical_current = critical_current;
  p.flux_bias_integer = flux_bias_integer;
  p.potential_form = potential_form;
  return p;
}

RunConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("configuration must be a JSON object");
  }
  reject_unknown_keys(doc, "",
                      {"system", "omega", "squid", "inequality", "n_time", "n_xi",
                       "xi_tolerance", "magnitude", "output", "format"});

  RunConfig config;
  config.system = as_string(require_key(doc, "", "system"), "system");
  if (config.system == "spin") {
    if (doc.contains("squid")) {
      throw ConfigError("key \"squid\": not allowed when system is \"spin\"");
    }
    config.omega = as_number(require_key(doc, "", "omega"), "omega");
    if (!(config.omega >= 0.0)) {
      throw ConfigError("key \"omega\": must be >= 0");
    }
    config.magnitude = 0.5;
  } else if (config.system == "squid") {
    if (doc.contains("omega")) {
      throw ConfigError("key \"omega\": not allowed when system is \"squid\"");
    }
    if (!doc.contains("squid")) {
      // Name the first required leaf so the fix is obvious.
      throw ConfigError("missing required key \"squid.L\"");
    }
    config.squid = parse_squid(doc["squid"]);
    config.magnitude = 1.0;
  } else {
    throw ConfigError("key \"system\": must be \"spin\" or \"squid\"");
  }

  if (doc.contains("inequality")) {
    const auto& ineq = doc["inequality"];
    if (!ineq.is_object()) {
      throw ConfigError("key \"inequality\": expected an object");
    }
    reject_unknown_keys(ineq, "inequality", {"type", "signs"});
    if (ineq.contains("type")) {
      try {
        config.type = parse_inequality_type(as_string(ineq["type"], "inequality.type"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("key \"inequality.type\": ") + e.what());
      }
      if (config.type == InequalityType::III) {
        throw ConfigError(
            "key \"inequality.type\": type III inequalities are ruled out by the "
            "experimental requirement that the system is prepared in a definite state");
      }
    }
    if (ineq.contains("signs")) {
      const auto text = as_string(ineq["signs"], "inequality.signs");
      if (text == "all") {
        config.all_signs = true;
      } else {
        try {
          config.signs = SignAssignment::parse(text);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("key \"inequality.signs\": ") + e.what());
        }
      }
    }
  }

  if (doc.contains("n_time")) {
    config.n_time = as_integer(doc["n_time"], "n_time");
    if (config.n_time < 2) {
      throw ConfigError("key \"n_time\": must be >= 2");
    }
  }
  if (doc.contains("n_xi")) {
    config.n_xi = as_integer(doc["n_xi"], "n_xi");
    if (config.n_xi < 2) {
      throw ConfigError("key \"n_xi\": must be >= 2");
    }
  }
  if (doc.contains("xi_tolerance")) {
    config.xi_tolerance = as_number(doc["xi_tolerance"], "xi_tolerance");
    if (!(config.xi_tolerance > 0.0)) {
      throw ConfigError("key \"xi_tolerance\": must be > 0");
    }
  }
  if (doc.contains("magnitude")) {
    config.magnitude = as_number(doc["magnitude"], "magnitude");
    if (!(config.magnitude > 0.0)) {
      throw ConfigError("key \"magnitude\": must be > 0");
    }
  }
  if (doc.contains("output")) {
    config.output = as_string(doc["output"], "output");
  }
  if (doc.contains("format")) {
    config.format = as_string(doc["format"], "format");
    if (config.format != "csv" && config.format != "json") {
      throw ConfigError("key \"format\": must be \"csv\" or \"json\"");
    }
  }
  return config;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("configuration is not well-formed JSON: ") + e.what());
  }
  return parse_config(doc);
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--set expects key=value, got: " + assignment);
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text; // bare words are strings
  }

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) {
      throw ConfigError("--set path has an empty segment: " + path);
    }
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

} // namespace tbi::cli
