#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <vector>

#include "tbi/errors.hpp"
#include "tbi/overlap.hpp"

namespace tbi::cli {

namespace {

using nlohmann::ordered_json;

std::string fmt(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

void write_json(const std::string& path, const ordered_json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

void require_output(const RunConfig& config) {
  if (config.output.empty()) {
    throw ConfigError("missing required key \"output\"");
  }
}

void require_single_signs(const RunConfig& config, const char* command) {
  if (config.all_signs) {
    throw ConfigError(std::string("key \"inequality.signs\": \"all\" is only supported by "
                                  "overlap-curve, not ") +
                      command);
  }
}

std::unique_ptr<Dynamics> make_dynamics(const RunConfig& config) {
  if (config.system == "spin") {
    return std::make_unique<SpinDynamics>(RabiParams::from_omega(config.omega),
                                          config.magnitude);
  }
  const auto params = config.squid->params();
  auto basis = eigensolve(params, default_grid(params, config.squid->n_phi),
                          config.squid->modes);
  return std::make_unique<SquidDynamics>(std::move(basis), config.squid->modes);
}

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

ordered_json curve_rows(const OverlapCurve& curve, const std::string& signs) {
  ordered_json rows = ordered_json::array();
  for (const auto& sample : curve.samples) {
    ordered_json row;
    if (!signs.empty()) {
      row["signs"] = signs;
    }
    row["xi_over_absX"] = sample.xi;
    row["overlap_I"] = sample.overlap_I;
    row["overlap_II"] = sample.overlap_II;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string curve_csv(const std::vector<std::pair<std::string, OverlapCurve>>& curves,
                      bool with_signs) {
  std::string csv = with_signs ? "signs,xi_over_absX,overlap_I,overlap_II\n"
                               : "xi_over_absX,overlap_I,overlap_II\n";
  for (const auto& [signs, curve] : curves) {
    for (const auto& sample : curve.samples) {
      if (with_signs) {
        csv += signs;
        csv += ',';
      }
      csv += fmt(sample.xi) + "," + fmt(sample.overlap_I) + "," + fmt(sample.overlap_II) + "\n";
    }
  }
  return csv;
}

double max_pairwise_deviation(const std::vector<std::pair<std::string, OverlapCurve>>& curves) {
  double worst = 0.0;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    for (std::size_t j = i + 1; j < curves.size(); ++j) {
      const auto& a = curves[i].second.samples;
      const auto& b = curves[j].second.samples;
      for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max(worst, std::abs(a[k].overlap_I - b[k].overlap_I));
        worst = std::max(worst, std::abs(a[k].overlap_II - b[k].overlap_II));
      }
    }
  }
  return worst;
}

} // namespace

std::string sidecar_path(const std::string& output) { return output + ".meta.json"; }

int cmd_overlap_curve(const RunConfig& config) {
  return run_guarded([&] {
    require_output(config);
    const auto dynamics = make_dynamics(config);

    std::vector<std::pair<std::string, OverlapCurve>> curves;
    if (config.all_signs) {
      for (const auto& signs : SignAssignment::all()) {
        curves.emplace_back(signs.str(), overlap_curve(signs, config.n_time, config.n_xi,
                                                       config.xi_tolerance, *dynamics));
      }
    } else {
      curves.emplace_back(config.signs.str(),
                          overlap_curve(config.signs, config.n_time, config.n_xi,
                                        config.xi_tolerance, *dynamics));
    }

    if (config.format == "csv") {
      write_file(config.output, curve_csv(curves, config.all_signs));
    } else {
      ordered_json rows = ordered_json::array();
      for (const auto& [signs, curve] : curves) {
        for (auto& row : curve_rows(curve, config.all_signs ? signs : "")) {
          rows.push_back(std::move(row));
        }
      }
      write_json(config.output, rows);
    }

    ordered_json meta;
    meta["system"] = config.system;
    meta["signs"] = config.all_signs ? "all" : config.signs.str();
    meta["n_time"] = config.n_time;
    meta["n_xi"] = config.n_xi;
    meta["xi_tolerance"] = config.xi_tolerance;
    meta["xi_I"] = curves.front().second.xi_I.value();
    meta["xi_II"] = curves.front().second.xi_II.value();
    if (config.all_signs) {
      ordered_json thresholds;
      for (const auto& [signs, curve] : curves) {
        thresholds[signs] = {{"xi_I", curve.xi_I.value()}, {"xi_II", curve.xi_II.value()}};
      }
      meta["thresholds"] = std::move(thresholds);
      meta["max_pairwise_deviation"] = max_pairwise_deviation(curves);
    }
    write_json(sidecar_path(config.output), meta);
  });
}

int cmd_violation_map(const RunConfig& config) {
  return run_guarded([&] {
    require_output(config);
    require_single_signs(config, "violation-map");
    const auto dynamics = make_dynamics(config);
    const auto cells = violation_map(config.type, config.signs, config.n_time, *dynamics);

    if (config.format == "csv") {
      std::string csv = "t_ab,t_bc,delta_p,dx_ab,dx_ac,dx_bc\n";
      for (const auto& cell : cells) {
        csv += fmt(cell.t_ab) + "," + fmt(cell.t_bc) + "," + fmt(cell.delta_p) + "," +
               fmt(cell.dx_ab) + "," + fmt(cell.dx_ac) + "," + fmt(cell.dx_bc) + "\n";
      }
      write_file(config.output, csv);
    } else {
      ordered_json rows = ordered_json::array();
      for (const auto& cell : cells) {
        rows.push_back({{"t_ab", cell.t_ab},
                        {"t_bc", cell.t_bc},
                        {"delta_p", cell.delta_p},
                        {"dx_ab", cell.dx_ab},
                        {"dx_ac", cell.dx_ac},
                        {"dx_bc", cell.dx_bc}});
      }
      write_json(config.output, rows);
    }
  });
}

int cmd_pseudo_map(const RunConfig& config) {
  return run_guarded([&] {
    require_output(config);
    require_single_signs(config, "pseudo-map");
    const auto dynamics = make_dynamics(config);

    // Reference branch -s_b reproduces Delta P_I = -q[-s_b][s_c] exactly.
    const int reference = -config.signs.s_b;
    const double tau = dynamics->period();
    const double step = tau / config.n_time;

    std::string csv = "t_ab,t_bc,q_pp,q_pm,q_mp,q_mm\n";
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < config.n_time; ++i) {
      const double t_ab = (i + 0.5) * step;
      for (int j = 0; j < config.n_time; ++j) {
        const double t_bc = (j + 0.5) * step;
        const auto joint =
            pseudo_joint(config.signs.s_a, t_ab, t_bc, reference, *dynamics);
        if (config.format == "csv") {
          csv += fmt(t_ab) + "," + fmt(t_bc) + "," + fmt(joint.entry(+1, +1)) + "," +
                 fmt(joint.entry(+1, -1)) + "," + fmt(joint.entry(-1, +1)) + "," +
                 fmt(joint.entry(-1, -1)) + "\n";
        } else {
          rows.push_back({{"t_ab", t_ab},
                          {"t_bc", t_bc},
                          {"q_pp", joint.entry(+1, +1)},
                          {"q_pm", joint.entry(+1, -1)},
                          {"q_mp", joint.entry(-1, +1)},
                          {"q_mm", joint.entry(-1, -1)}});
        }
      }
    }
    if (config.format == "csv") {
      write_file(config.output, csv);
    } else {
      write_json(config.output, rows);
    }
  });
}

int cmd_squid_report(const RunConfig& config) {
  return run_guarded([&] {
    require_output(config);
    if (config.system != "squid" || !config.squid) {
      throw ConfigError("squid-report requires \"system\": \"squid\"");
    }
    const auto& squid = *config.squid;

    ordered_json report;
    bool beta_written = false;
    for (const auto form : {PotentialForm::quartic, PotentialForm::full_cosine}) {
      auto params = squid.params();
      params.potential_form = form;
      const auto grid = default_grid(params, squid.n_phi);
      const auto summary = well_summary(params, grid, squid.modes);
      if (!beta_written) {
        report["beta"] = summary.beta;
        report["phi0"] = summary.phi0;
        report["bistable"] = true;
        beta_written = true;
      }
      const auto doubled = well_summary(params, default_grid(params, 2 * squid.n_phi),
                                        squid.modes);
      const double rel_change =
          std::abs(doubled.splitting - summary.splitting) / summary.splitting;
      report[to_string(form)] = {
          {"barrier_J", summary.barrier},
          {"omega0_rad_s", summary.omega0},
          {"sigma0_sq_over_phi0_sq", summary.sigma0_sq / (summary.phi0 * summary.phi0)},
          {"deltaE0_J", summary.splitting},
          {"tunnel_freq_Hz", 1.0 / summary.tunnel_period},
          {"convergence",
           {{"n_phi", squid.n_phi}, {"deltaE0_rel_change_on_doubling", rel_change}}},
      };
    }
    write_json(config.output, report);
  });
}

} // namespace tbi::cli
