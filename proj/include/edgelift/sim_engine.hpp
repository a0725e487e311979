#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "edgelift/edge_space.hpp"
#include "edgelift/lift_control.hpp"

namespace edgelift {

/// Closed-loop record on a uniform time grid. Write-once; immutable after
/// simulate() returns.
struct Trajectory {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<Eigen::VectorXd> inputs;
    std::vector<Eigen::VectorXd> edge_values;      // z(t)
    std::vector<double> lyapunov;                  // V_e = 0.5 ||z||^2
    std::vector<double> lift_residual;             // ||A u - b||
    std::vector<double> realization_rel_err;       // ||A u - b|| / (1 + ||v*||)

    std::size_t size() const { return times.size(); }
};

/// Classical fourth-order Runge–Kutta update.
Eigen::VectorXd rk4_step(const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& deriv,
                         double t, const Eigen::VectorXd& x, double dt);

struct SimulationParams {
    double t_final = 10.0;
    double dt = 1e-3;
    double gain = 1.0;              // edge-flow gain used for the recorded v*
    bool zero_order_hold = false;   // hold u across a step instead of per-stage evaluation
    ToleranceParams tol;
};

/// Fixed-step closed-loop integration. The controller is evaluated at
/// every RK4 stage state unless zero_order_hold is set. DomainError and
/// NonFiniteStateError carry the failure time.
Trajectory simulate(const NetworkSystem& sys, const StateFeedback& controller,
                    const Eigen::VectorXd& x0, const SimulationParams& params);

struct MetricsWindow {
    double rate_lo = 0.0;
    double rate_hi = 0.0;
    double tail_lo = 0.0;
    double tail_hi = 0.0;

    /// Rate fit over [0.1, 0.5] * t_final (skips transients and the
    /// numerical floor); tail over the last half.
    static MetricsWindow defaults_for(double t_final);
};

struct SyncMetrics {
    double fitted_rate = 0.0;        // least-squares slope of log V_e
    double final_edge_norm = 0.0;    // ||z|| at the last grid point
    double residual_floor = 0.0;     // min ||z|| over the tail window
    double max_realization_rel_err = 0.0;
    std::optional<double> phase_offset_drift;  // oscillator scenarios only
};

/// Deterministic metrics over the given windows. The rate fit uses grid
/// points with V_e > 1e-14; throws DegenerateWindowError when a window
/// contains too few points.
SyncMetrics compute_metrics(const Trajectory& traj, const MetricsWindow& window);

/// Max drift of pairwise phase differences relative to their initial
/// values; defined only when every agent is a Hopf oscillator.
std::optional<double> hopf_phase_offset_drift(const NetworkSystem& sys, const Trajectory& traj);

/// CSV: t, x_1..x_n, u_1..u_p, z_1..z_md, V_e, lift_residual; floats at
/// 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

}  // namespace edgelift
