#include "autolim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/LU>

#include "autolim/error.hpp"
#include "autolim/linearize.hpp"
#include "autolim/tolerances.hpp"

namespace autolim {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) fail(ErrorKind::invalid_parameter, std::string(what) + " must be finite");
}

void require_window(double start, double stop, const char* what) {
  require_finite(start, what);
  require_finite(stop, what);
  if (!(stop > start)) {
    fail(ErrorKind::invalid_parameter, std::string(what) + " needs stop > start");
  }
}

// Snaps rounding-level negatives to zero; anything lower is a model escape.
void enforce_positivity(const PathwayModel& model, Eigen::Ref<Vector> state, double t) {
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    const double v = state[i];
    if (!std::isfinite(v)) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "state blew up at t = %.17g (component %s)", t,
                    component_name(model, static_cast<int>(i)).c_str());
      fail(ErrorKind::blow_up, buf);
    }
    if (v < 0.0) {
      if (v < -tol::positivity_snap) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "positivity violated at t = %.17g: component %s = %.17g", t,
                      component_name(model, static_cast<int>(i)).c_str(), v);
        fail(ErrorKind::positivity, buf);
      }
      state[i] = 0.0;
    }
  }
}

}  // namespace

void validate(const DisturbanceSpec& dist) {
  std::visit(overloaded{
                 [](const ZeroDisturbance&) {},
                 [](const StepDisturbance& d) {
                   require_finite(d.magnitude, "step magnitude");
                   require_finite(d.onset, "step onset");
                 },
                 [](const SineDisturbance& d) {
                   require_finite(d.amplitude, "sine amplitude");
                   require_finite(d.omega, "sine frequency");
                   require_window(d.start, d.stop, "sine disturbance");
                 },
                 [](const PulseDisturbance& d) {
                   require_finite(d.magnitude, "pulse magnitude");
                   require_window(d.start, d.stop, "pulse disturbance");
                 },
             },
             dist);
}

double disturbance_value(const DisturbanceSpec& dist, double t) {
  return std::visit(
      overloaded{
          [](const ZeroDisturbance&) { return 0.0; },
          [t](const StepDisturbance& d) { return t >= d.onset ? d.magnitude : 0.0; },
          [t](const SineDisturbance& d) {
            return t >= d.start && t < d.stop ? d.amplitude * std::sin(d.omega * (t - d.start))
                                              : 0.0;
          },
          [t](const PulseDisturbance& d) {
            return t >= d.start && t < d.stop ? d.magnitude : 0.0;
          },
      },
      dist);
}

void validate(const ControllerSpec& controller, const PathwayModel& model) {
  std::visit(overloaded{
                 [&](const NaturalController&) {
                   if (model.family() == Family::cyclic) {
                     fail(ErrorKind::unsupported, "cyclic networks have no natural controller");
                   }
                 },
                 [](const ConstantController& c) { require_finite(c.value, "constant control"); },
                 [&](const LinearStateFeedback& c) {
                   if (c.gain.size() != model.state_dim()) {
                     fail(ErrorKind::invalid_parameter,
                          "feedback gain needs " + std::to_string(model.state_dim()) + " entries");
                   }
                   if (!c.gain.allFinite()) {
                     fail(ErrorKind::invalid_parameter, "feedback gain must be finite");
                   }
                   require_finite(c.offset, "feedback offset");
                 },
             },
             controller);
}

double control_value(const ControllerSpec& controller, const PathwayModel& model,
                     const Eigen::Ref<const Vector>& state) {
  return std::visit(overloaded{
                        [&](const NaturalController&) {
                          return natural_control(model, state[state.size() - 1]);
                        },
                        [](const ConstantController& c) { return c.value; },
                        [&](const LinearStateFeedback& c) {
                          const Equilibrium eq = equilibrium(model);
                          return eq.u_star + c.offset - c.gain.dot(state - eq.state());
                        },
                    },
                    controller);
}

Trajectory integrate(const PathwayModel& model, const ControllerSpec& controller,
                     const DisturbanceSpec& dist, const Vector& x0, double t_end, double dt,
                     const IntegrateOptions& options) {
  validate(controller, model);
  validate(dist);
  const int N = model.state_dim();
  require(x0.size() == N, ErrorKind::contract_violation, "initial state has the wrong dimension");
  require(std::isfinite(t_end) && t_end > 0.0, ErrorKind::contract_violation,
          "t_end must be positive");
  require(std::isfinite(dt) && dt > 0.0 && dt <= t_end / 10.0, ErrorKind::contract_violation,
          "dt must be positive and at most t_end/10");
  require(options.record_stride >= 1, ErrorKind::contract_violation,
          "record stride must be positive");
  for (int i = 0; i < N; ++i) {
    if (!(x0[i] >= 0.0)) {
      fail(ErrorKind::domain, "initial component " + component_name(model, i) + " is negative");
    }
  }

  const Equilibrium eq = equilibrium(model);
  const Vector x_star = eq.state();
  const double y_star = eq.y_star;

  // Affine feedback is evaluated inline to keep the stage loop allocation-free.
  const auto* feedback = std::get_if<LinearStateFeedback>(&controller);
  const auto control = [&](const Vector& s) {
    if (feedback) return eq.u_star + feedback->offset - feedback->gain.dot(s - x_star);
    return control_value(controller, model, s);
  };

  const long steps = std::max(10L, static_cast<long>(std::ceil(t_end / dt - 1e-9)));
  const double h = t_end / static_cast<double>(steps);
  const long tail_start = static_cast<long>(std::ceil(0.9 * static_cast<double>(steps)));
  const long head_end = steps / 10;

  Trajectory traj;
  traj.y_star = y_star;
  const std::size_t samples = static_cast<std::size_t>(steps / options.record_stride + 2);
  traj.t.reserve(samples);
  traj.x.reserve(samples);
  traj.y.reserve(samples);
  traj.u.reserve(samples);
  traj.delta.reserve(samples);

  Vector x = x0;
  Vector k1(N), k2(N), k3(N), k4(N), stage(N);
  double head_swing = 0.0;
  double tail_swing = 0.0;

  auto record = [&](double t, double u, double d) {
    traj.t.push_back(t);
    traj.x.push_back(x);
    traj.y.push_back(x[N - 1]);
    traj.u.push_back(u);
    traj.delta.push_back(d);
  };

  double t = 0.0;
  double u = control(x);
  double d = disturbance_value(dist, t);
  record(t, u, d);
  double ydev_prev = x[N - 1] - y_star;
  double d_prev = d;
  head_swing = std::abs(ydev_prev);

  for (long i = 0; i < steps; ++i) {
    t = static_cast<double>(i) * h;
    const double th = t + 0.5 * h;
    const double t1 = static_cast<double>(i + 1) * h;

    vector_field(model, x, u, d, k1);
    stage = x + 0.5 * h * k1;
    enforce_positivity(model, stage, th);
    const double d_half = disturbance_value(dist, th);
    vector_field(model, stage, control(stage), d_half, k2);
    stage = x + 0.5 * h * k2;
    enforce_positivity(model, stage, th);
    vector_field(model, stage, control(stage), d_half, k3);
    stage = x + h * k3;
    enforce_positivity(model, stage, t1);
    vector_field(model, stage, control(stage), disturbance_value(dist, t1), k4);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    enforce_positivity(model, x, t1);

    u = control(x);
    d = disturbance_value(dist, t1);
    const double ydev = x[N - 1] - y_star;
    const double y_piece = 0.5 * h * (ydev_prev * ydev_prev + ydev * ydev);
    traj.l2_y_dev += y_piece;
    traj.l2_delta += 0.5 * h * (d_prev * d_prev + d * d);
    if (i >= tail_start) {
      traj.l2_y_dev_tail += y_piece;
      tail_swing = std::max(tail_swing, std::abs(ydev));
    }
    if (i < head_end) head_swing = std::max(head_swing, std::abs(ydev));
    ydev_prev = ydev;
    d_prev = d;

    if ((i + 1) % options.record_stride == 0 || i + 1 == steps) record(t1, u, d);
  }

  traj.converged = (x - x_star).lpNorm<Eigen::Infinity>() <= tol::converged_state;
  traj.sustained_oscillation =
      !traj.converged && tail_swing >= tol::oscillation_swing_ratio * head_swing;
  return traj;
}

double empirical_gain(const Trajectory& traj) {
  if (!(traj.l2_delta > 0.0)) {
    fail(ErrorKind::undefined_ratio, "disturbance has zero energy; gain is undefined");
  }
  return std::sqrt(traj.l2_y_dev / traj.l2_delta);
}

double natural_closed_loop_abscissa(const TwoStateParams& p) {
  const PathwayModel model = PathwayModel::two_state(p);
  const Matrix A = closed_loop(linearize_full(model), natural_feedback_gain(model));
  const double half_trace = 0.5 * A.trace();
  const double disc = half_trace * half_trace - A.determinant();
  return disc >= 0.0 ? half_trace + std::sqrt(disc) : half_trace;
}

double stability_boundary_probe(const TwoStateParams& p, double h_lo, double h_hi) {
  require(std::isfinite(h_lo) && std::isfinite(h_hi) && h_lo < h_hi && h_lo >= 0.0,
          ErrorKind::contract_violation, "h range must be a finite interval in [0, inf)");
  TwoStateParams q = p;
  const auto abscissa = [&](double h) {
    q.h = h;
    return natural_closed_loop_abscissa(q);
  };
  double lo = h_lo;
  double hi = h_hi;
  if (!(abscissa(lo) < 0.0 && abscissa(hi) > 0.0)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "no stable-to-unstable crossing in h range [%.17g, %.17g]", h_lo, h_hi);
    fail(ErrorKind::bracket, buf);
  }
  while (hi - lo > tol::boundary_width) {
    const double mid = 0.5 * (lo + hi);
    (abscissa(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

EnergyRun energy_run(const PathwayModel& model, const ControllerSpec& controller,
                     const Vector& x0, const EnergyRunOptions& options) {
  double horizon = options.horizon;
  for (int doublings = 0;; ++doublings, horizon *= 2.0) {
    Trajectory traj = integrate(model, controller, ZeroDisturbance{}, x0, horizon, options.dt,
                                {options.record_stride});
    if (traj.converged && traj.l2_y_dev_tail <= tol::energy_tail_fraction * traj.l2_y_dev) {
      return {std::move(traj), horizon, doublings};
    }
    if (doublings >= tol::energy_max_doublings) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "energy run did not settle within horizon %.17g (converged=%s)", horizon,
                    traj.converged ? "true" : "false");
      fail(ErrorKind::convergence, buf);
    }
  }
}

void write_trajectory_csv(std::ostream& out, const PathwayModel& model, const Trajectory& traj) {
  const int N = model.state_dim();
  out << 't';
  for (int i = 0; i < N - 1; ++i) out << ",x" << (i + 1);
  out << ",y,u,delta\n";
  char buf[32];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t s = 0; s < traj.t.size(); ++s) {
    put(traj.t[s]);
    for (int i = 0; i < N; ++i) {
      out << ',';
      put(traj.x[s][i]);
    }
    out << ',';
    put(traj.u[s]);
    out << ',';
    put(traj.delta[s]);
    out << '\n';
  }
}

}  // namespace autolim
