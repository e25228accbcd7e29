#include "autolim/limits.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "autolim/error.hpp"
#include "autolim/tolerances.hpp"

namespace autolim {
namespace {

double chain_rho(const ChainParams& p) { return std::pow((p.alpha + 1.0) / p.alpha, 1.0 / p.n); }

void require_unstable_mode(const ZeroDynamics& zd) {
  if (!(zd.lambda_dom > 0.0)) {
    fail(ErrorKind::hypothesis_violation, "zero dynamics have no unstable dominant mode");
  }
}

double projected_control(const ZeroDynamics& zd) {
  require_unstable_mode(zd);
  require(zd.v_dom.size() == zd.B.size(), ErrorKind::contract_violation,
          "zero-dynamics eigenvector and B differ in dimension");
  const double vB = zd.v_dom.dot(zd.B);
  if (!(std::abs(vB) >= tol::degenerate_control)) {
    fail(ErrorKind::degenerate_control, "output cannot act on the dominant mode (v'B = 0)");
  }
  return vB;
}

ChainParams as_chain(const TwoStateParams& p) { return {p.alpha, p.k, p.g, p.h, p.a, 1}; }

std::string describe_point(const std::vector<SweepAxis>& axes, const std::vector<double>& point) {
  std::string text;
  char buf[64];
  for (std::size_t i = 0; i < axes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%s=%.17g", i ? ", " : "", axes[i].name.c_str(), point[i]);
    text += buf;
  }
  return text;
}

}  // namespace

double gamma_closed_form(const PathwayModel& model) {
  switch (model.family()) {
    case Family::two_state: {
      const auto& p = model.two_state_params();
      return p.alpha / (p.k + p.g * p.alpha);
    }
    case Family::chain: {
      const auto& p = model.chain_params();
      const double rho = chain_rho(p);
      return 1.0 / ((p.K + p.g * p.alpha * std::pow(rho, p.n - 1)) * (rho - 1.0));
    }
    case Family::cyclic: {
      const auto& net = model.cyclic_network();
      const double a = net.a();
      const double r = net.r();
      if (!(r > a)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "hypothesis r > a fails: r = %.17g, a = %.17g", r, a);
        fail(ErrorKind::hypothesis_violation, buf);
      }
      return 1.0 / (net.sink_slope() + r - a);
    }
  }
  fail(ErrorKind::contract_violation, "unknown model family");
}

double gamma_dominant_oracle(const ZeroDynamics& zd) {
  const double vB = projected_control(zd);
  return std::abs(zd.v_dom.dot(zd.C)) / std::abs(vB);
}

EnergyLimit energy_closed_form(const PathwayModel& model, const Vector& x0, double y0) {
  if (model.family() == Family::cyclic) {
    fail(ErrorKind::unsupported, "no closed-form energy limit for general cyclic networks");
  }
  const int m = model.state_dim() - 1;
  require(x0.size() == m, ErrorKind::contract_violation,
          "initial intermediate vector has the wrong dimension");
  require(y0 >= 0.0 && (x0.array() >= 0.0).all(), ErrorKind::domain,
          "initial concentrations must be nonnegative");
  const Equilibrium eq = equilibrium(model);
  const double alpha = model.alpha();

  double z = (y0 - eq.y_star) / alpha;
  if (model.family() == Family::two_state) {
    z += x0[0] - eq.x_star[0];
  } else {
    const double rho = chain_rho(model.chain_params());
    double w = 1.0;
    for (int i = 0; i < m; ++i, w *= rho) z += w * (x0[i] - eq.x_star[i]);
  }
  return {energy_coefficient(model) * z * z, z};
}

double energy_oracle(const ZeroDynamics& zd, const Vector& zbar0) {
  const double vB = projected_control(zd);
  require(zbar0.size() == zd.v_dom.size(), ErrorKind::contract_violation,
          "zero-coordinate deviation has the wrong dimension");
  const double z = zd.v_dom.dot(zbar0);
  return zd.lambda_dom * z * z / (vB * vB);
}

double energy_coefficient(const PathwayModel& model) {
  switch (model.family()) {
    case Family::two_state: {
      const auto& p = model.two_state_params();
      const double d = p.g * p.alpha + p.k;
      return p.alpha * p.alpha * p.alpha * p.k / (d * d);
    }
    case Family::chain: {
      const auto& p = model.chain_params();
      const double rho = chain_rho(p);
      const double d = p.K + p.g * p.alpha * std::pow(rho, p.n - 1);
      return p.alpha * p.alpha * p.K / ((rho - 1.0) * d * d);
    }
    case Family::cyclic:
      break;
  }
  fail(ErrorKind::unsupported, "no closed-form energy limit for general cyclic networks");
}

Approximations approximations(const ChainParams& p) {
  validate(p);
  const double log_ratio = std::log1p(1.0 / p.alpha);
  const double d = p.K + p.g * (p.alpha + 1.0);
  return {p.n / (d * log_ratio), p.alpha * p.alpha * p.K * p.n / (d * d * log_ratio)};
}

RowVector dominant_mode_gain(const ZeroDynamics& zd, double margin) {
  const double vB = projected_control(zd);
  return ((zd.lambda_dom + margin) / vB) * zd.v_dom.transpose();
}

double relative_discrepancy(double closed, double oracle) {
  return std::abs(closed - oracle) / std::max(std::abs(closed), tol::discrepancy_floor);
}

HardLimitReport analyze(const PathwayModel& model, const std::optional<Vector>& initial_state) {
  HardLimitReport report;
  report.family = model.family();

  const ZeroDynamics zd = zero_dynamics(model);
  report.gamma_closed = gamma_closed_form(model);
  report.gamma_oracle = gamma_dominant_oracle(zd);
  report.lambda_dom = zd.lambda_dom;
  report.unstable_count = zd.unstable_count;
  report.discrepancies.gamma = relative_discrepancy(report.gamma_closed, report.gamma_oracle);

  Vector state = equilibrium(model).state();
  if (initial_state) {
    require(initial_state->size() == state.size(), ErrorKind::contract_violation,
            "initial state has the wrong dimension");
    require((initial_state->array() >= 0.0).all(), ErrorKind::domain,
            "initial concentrations must be nonnegative");
    state = *initial_state;
  } else {
    state[0] += 1.0;
  }
  const Vector zbar0 = zero_coordinates(model, state);
  report.z_tilde0 = zd.v_dom.dot(zbar0);
  report.energy_oracle = energy_oracle(zd, zbar0);

  if (model.family() != Family::cyclic) {
    const int m = model.state_dim() - 1;
    const EnergyLimit H = energy_closed_form(model, state.head(m), state[m]);
    report.energy_closed = H.H;
    report.discrepancies.energy = relative_discrepancy(H.H, report.energy_oracle);
  }
  if (model.family() == Family::chain) {
    const Approximations approx = approximations(model.chain_params());
    report.gamma_approx = approx.gamma_approx;
    report.energy_coeff_approx = approx.energy_coeff_approx;
  }
  return report;
}

SweepTable sweep(const SweepBase& base, const std::vector<SweepAxis>& axes) {
  const bool chain = std::holds_alternative<ChainParams>(base);
  SweepTable table;
  require(!axes.empty(), ErrorKind::invalid_parameter, "sweep needs at least one axis");
  for (const auto& axis : axes) {
    const bool known = axis.name == "alpha" || axis.name == "g" ||
                       (chain ? axis.name == "K" || axis.name == "n" : axis.name == "k");
    if (!known) {
      fail(ErrorKind::invalid_parameter,
           "unknown sweep axis '" + axis.name + "' for the " + (chain ? "chain" : "two-state") +
               " family");
    }
    if (axis.values.empty()) fail(ErrorKind::invalid_parameter, "sweep axis '" + axis.name + "' is empty");
    if (std::count_if(axes.begin(), axes.end(), [&](const SweepAxis& a) { return a.name == axis.name; }) > 1) {
      fail(ErrorKind::invalid_parameter, "sweep axis '" + axis.name + "' is repeated");
    }
    table.axes.push_back(axis.name);
  }

  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.values.size();
  table.rows.reserve(total);

  std::vector<std::size_t> index(axes.size(), 0);
  for (std::size_t row = 0; row < total; ++row) {
    std::vector<double> point(axes.size());
    ChainParams p = chain ? std::get<ChainParams>(base) : as_chain(std::get<TwoStateParams>(base));
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const double v = axes[i].values[index[i]];
      point[i] = v;
      const std::string& name = axes[i].name;
      if (name == "alpha") {
        p.alpha = v;
      } else if (name == "K" || name == "k") {
        p.K = v;
      } else if (name == "g") {
        p.g = v;
      } else if (!(v >= 1.0 && v == std::floor(v) && v <= 1e6)) {
        fail(ErrorKind::invalid_parameter, "row " + std::to_string(row) + " (" +
                                               describe_point(axes, point) +
                                               "): n must be a positive integer");
      } else {
        p.n = static_cast<int>(v);
      }
    }

    SweepRow out;
    try {
      const PathwayModel model =
          chain ? PathwayModel::chain(p)
                : PathwayModel::two_state({p.alpha, p.K, p.g, p.h, p.a});
      out.gamma_closed = gamma_closed_form(model);
      out.energy_coeff = energy_coefficient(model);
      const Approximations approx = approximations(p);
      out.gamma_approx = approx.gamma_approx;
      out.energy_coeff_approx = approx.energy_coeff_approx;
      out.approx_rel_err = relative_discrepancy(out.gamma_closed, out.gamma_approx);
    } catch (const Error& e) {
      fail(ErrorKind::invalid_parameter,
           "row " + std::to_string(row) + " (" + describe_point(axes, point) + "): " + e.what());
    }
    out.point = std::move(point);
    table.rows.push_back(std::move(out));

    // Advance the odometer, last axis fastest.
    for (std::size_t i = axes.size(); i-- > 0;) {
      if (++index[i] < axes[i].values.size()) break;
      index[i] = 0;
    }
  }
  return table;
}

}  // namespace autolim
