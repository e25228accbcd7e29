#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "autolim/error.hpp"
#include "autolim/limits.hpp"
#include "autolim/sim.hpp"

namespace autolim::cli {
namespace {

Json nullable(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Output goes to the file when one is named, else to the stream.
class Sink {
 public:
  Sink(const std::optional<std::string>& path, std::ostream& fallback) : stream_(&fallback) {
    if (path) {
      file_.open(*path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ConfigError("cannot open output file '" + *path + "'");
      stream_ = &file_;
    }
  }

  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

int run_limits(const RunConfig& config, const Invocation& inv, std::ostream& out) {
  const HardLimitReport report = analyze(*config.model, config.initial_state);
  Sink sink(inv.out ? inv.out : config.out, out);
  sink.stream() << dump(limits_json(report));
  return exit_ok;
}

int run_sweep(const RunConfig& config, const Invocation& inv, std::ostream& out) {
  const PathwayModel& model = *config.model;
  const SweepBase base = model.family() == Family::chain ? SweepBase{model.chain_params()}
                                                         : SweepBase{model.two_state_params()};
  const SweepTable table = sweep(base, config.axes);
  Sink sink(inv.out ? inv.out : config.out, out);
  write_sweep_csv(sink.stream(), table);
  return exit_ok;
}

int run_simulate(const RunConfig& config, const Invocation& inv, std::ostream& out) {
  const PathwayModel& model = *config.model;
  const Vector x0 = config.initial_state ? *config.initial_state : equilibrium(model).state();
  const SimulateBlock& s = config.simulate;
  const Trajectory traj =
      integrate(model, s.controller, s.disturbance, x0, s.t_end, s.dt, {s.record_stride});

  const auto path = inv.out ? inv.out : config.out;
  if (path) {
    Sink sink(path, out);
    write_trajectory_csv(sink.stream(), model, traj);
  }

  Json summary{{"status", "ok"},
               {"l2_y_dev", traj.l2_y_dev},
               {"l2_y_dev_tail", traj.l2_y_dev_tail},
               {"l2_delta", traj.l2_delta},
               {"empirical_gain", traj.l2_delta > 0.0 ? Json(empirical_gain(traj)) : Json(nullptr)},
               {"converged", traj.converged},
               {"sustained_oscillation", traj.sustained_oscillation},
               {"samples", traj.t.size()},
               {"trajectory_csv", path ? Json(*path) : Json(nullptr)}};
  // Hard limits for side-by-side comparison; absent when the model has none.
  try {
    summary["gamma_closed"] = gamma_closed_form(model);
  } catch (const Error&) {
    summary["gamma_closed"] = nullptr;
  }
  if (model.family() != Family::cyclic) {
    const int m = model.state_dim() - 1;
    const EnergyLimit H = energy_closed_form(model, x0.head(m), x0[m]);
    summary["energy_closed"] = H.H;
    summary["z_tilde0"] = H.z_tilde0;
  } else {
    summary["energy_closed"] = nullptr;
    summary["z_tilde0"] = nullptr;
  }
  out << dump(summary);
  return exit_ok;
}

int run_verify(const RunConfig& config, const Invocation& inv, std::ostream& out) {
  VerifyOptions options;
  options.suites = config.verify.suites;
  options.inject_fault = config.verify.inject_fault;
  options.seed = inv.seed ? *inv.seed : config.verify.seed.value_or(42);
  options.tol_scale = inv.tol_scale;
  const VerifyReport report = run_verification(options);
  Sink sink(inv.out ? inv.out : config.out, out);
  sink.stream() << dump(to_json(report));
  return report.passed ? exit_ok : exit_verification;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::hypothesis_violation:
    case ErrorKind::assumption_violation:
    case ErrorKind::degenerate_control:
      return exit_hypothesis;
    case ErrorKind::contract_violation:
    case ErrorKind::domain:
    case ErrorKind::invalid_model:
    case ErrorKind::invalid_parameter:
    case ErrorKind::unsupported:
      return exit_config;
    case ErrorKind::numeric:
    case ErrorKind::spectrum_degeneracy:
    case ErrorKind::synthesis:
    case ErrorKind::convergence:
    case ErrorKind::precondition:
    case ErrorKind::positivity:
    case ErrorKind::blow_up:
    case ErrorKind::bracket:
    case ErrorKind::undefined_ratio:
      return exit_integration;
  }
  return exit_integration;
}

Json error_json(const std::string& status, const std::string& message, int exit_code) {
  return {{"status", status}, {"error", message}, {"exit_code", exit_code}};
}

Json limits_json(const HardLimitReport& report) {
  return {
      {"status", report.status},
      {"family", to_string(report.family)},
      {"gamma_closed", report.gamma_closed},
      {"gamma_oracle", report.gamma_oracle},
      {"energy_closed", nullable(report.energy_closed)},
      {"energy_oracle", report.energy_oracle},
      {"energy_qualifier", report.energy_qualifier},
      {"gamma_approx", nullable(report.gamma_approx)},
      {"energy_coeff_approx", nullable(report.energy_coeff_approx)},
      {"lambda_dom", report.lambda_dom},
      {"unstable_count", report.unstable_count},
      {"z_tilde0", report.z_tilde0},
      {"discrepancies",
       {{"gamma", report.discrepancies.gamma}, {"energy", nullable(report.discrepancies.energy)}}},
  };
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  for (const auto& axis : table.axes) out << axis << ',';
  out << "gamma_closed,gamma_approx,approx_rel_err,energy_coeff,energy_coeff_approx\n";
  for (const auto& row : table.rows) {
    for (double v : row.point) out << csv_number(v) << ',';
    out << csv_number(row.gamma_closed) << ',' << csv_number(row.gamma_approx) << ','
        << csv_number(row.approx_rel_err) << ',' << csv_number(row.energy_coeff) << ','
        << csv_number(row.energy_coeff_approx) << '\n';
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

int run(const RunConfig& config, const Invocation& inv, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::limits: return run_limits(config, inv, out);
      case Command::sweep: return run_sweep(config, inv, out);
      case Command::simulate: return run_simulate(config, inv, out);
      case Command::verify: return run_verify(config, inv, out);
    }
  } catch (const ConfigError& e) {
    out << dump(error_json("config_error", e.what(), exit_config));
    err << "autolim: " << e.what() << '\n';
    return exit_config;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    out << dump(error_json(std::string(to_string(e.kind())), e.what(), code));
    err << "autolim: " << e.what() << '\n';
    return code;
  }
  return exit_config;
}

}  // namespace autolim::cli
