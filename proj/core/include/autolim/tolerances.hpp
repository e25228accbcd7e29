#pragma once

// Numerical thresholds shared by the library. Everything that decides
// pass/fail or convergence lives here.

namespace autolim::tol {

inline constexpr double equilibrium_residual = 1e-10;
inline constexpr double cyclic_equilibrium_residual = 1e-8;
inline constexpr double assumption_relative = 1e-9;
inline constexpr double derivative_fd_step = 1e-6;
inline constexpr double derivative_fd_relative = 1e-5;

inline constexpr double jacobian_fd_step = 1e-6;

inline constexpr double degenerate_control = 1e-14;
inline constexpr double discrepancy_floor = 1e-300;

inline constexpr double lyapunov_residual = 1e-10;   // relative to ||Q||
inline constexpr double lyapunov_rcond = 1e-15;
inline constexpr double riccati_stop = 1e-11;        // relative to 1 + ||P||
inline constexpr double riccati_accept = 1e-10;      // relative to 1 + ||P||
inline constexpr int riccati_max_iterations = 100;
inline constexpr double riccati_deadbeat_margin = 1.0;
inline constexpr double symmetry = 1e-12;

inline constexpr double hinf_omega_min = 1e-4;
inline constexpr double hinf_omega_max = 1e4;
inline constexpr int hinf_grid_points = 4000;
inline constexpr double hinf_refine_relative = 1e-8;
inline constexpr double hinf_endpoint_ratio = 0.9;
inline constexpr int hinf_max_extensions = 3;

inline constexpr double positivity_snap = 1e-9;
inline constexpr double converged_state = 1e-6;
inline constexpr double oscillation_swing_ratio = 0.9;   // tail vs head swing of y
inline constexpr double energy_tail_fraction = 1e-3;
inline constexpr int energy_max_doublings = 3;
inline constexpr double default_dt = 1e-3;
inline constexpr double default_energy_horizon = 200.0;

inline constexpr double boundary_width = 1e-4;

}  // namespace autolim::tol
