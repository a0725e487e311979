#include "edgelift/sim_engine.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "edgelift/errors.hpp"
#include "edgelift/log.hpp"

namespace edgelift {

Eigen::VectorXd rk4_step(const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& deriv,
                         double t, const Eigen::VectorXd& x, double dt) {
    if (!(dt > 0.0)) throw InvalidArgumentError("rk4 step size must be positive");
    const Eigen::VectorXd k1 = deriv(t, x);
    const Eigen::VectorXd k2 = deriv(t + 0.5 * dt, x + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = deriv(t + 0.5 * dt, x + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = deriv(t + dt, x + dt * k3);
    Eigen::VectorXd next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) {
        throw NonFiniteStateError("integration produced a non-finite state", t + dt);
    }
    return next;
}

Trajectory simulate(const NetworkSystem& sys, const StateFeedback& controller,
                    const Eigen::VectorXd& x0, const SimulationParams& params) {
    if (!(params.dt > 0.0)) throw InvalidArgumentError("dt must be positive");
    if (!(params.t_final > 0.0)) throw InvalidArgumentError("t_final must be positive");
    if (x0.size() != sys.total_state_dim()) {
        throw InvalidArgumentError("x0 has dimension " + std::to_string(x0.size()) +
                                   ", expected " + std::to_string(sys.total_state_dim()));
    }
    const auto num_steps = static_cast<long>(std::llround(params.t_final / params.dt));
    if (num_steps < 1) throw InvalidArgumentError("t_final must cover at least one step");
    if (std::abs(num_steps * params.dt - params.t_final) > 1e-9 * std::max(1.0, params.t_final)) {
        log::warn("t_final is not an integer multiple of dt; grid ends at " +
                  std::to_string(num_steps * params.dt));
    }

    Trajectory traj;
    traj.dt = params.dt;
    traj.times.reserve(num_steps + 1);

    Eigen::VectorXd x = x0;
    double current_time = 0.0;
    try {
        for (long step = 0; step <= num_steps; ++step) {
            const double t = step * params.dt;
            current_time = t;

            const EdgeOperators ops = assemble_edge_operators(sys, x, params.gain, params.tol);
            const Eigen::VectorXd u = controller(x);
            const double residual = (ops.lift_matrix * u - ops.lift_rhs).norm();

            traj.times.push_back(t);
            traj.states.push_back(x);
            traj.inputs.push_back(u);
            traj.edge_values.push_back(ops.edge_value);
            traj.lyapunov.push_back(0.5 * ops.edge_value.squaredNorm());
            traj.lift_residual.push_back(residual);
            traj.realization_rel_err.push_back(residual / (1.0 + ops.edge_flow.norm()));

            if (step == num_steps) break;

            if (params.zero_order_hold) {
                const Eigen::VectorXd held = u;
                x = rk4_step(
                    [&](double, const Eigen::VectorXd& xs) {
                        return (sys.stacked_drift(xs) + sys.stacked_input_map(xs) * held).eval();
                    },
                    t, x, params.dt);
            } else {
                x = rk4_step(
                    [&](double, const Eigen::VectorXd& xs) {
                        return (sys.stacked_drift(xs) + sys.stacked_input_map(xs) * controller(xs))
                            .eval();
                    },
                    t, x, params.dt);
            }
        }
    } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) + " (at t = " + std::to_string(current_time) + ")",
                          current_time);
    }
    return traj;
}

MetricsWindow MetricsWindow::defaults_for(double t_final) {
    MetricsWindow w;
    w.rate_lo = 0.1 * t_final;
    w.rate_hi = 0.5 * t_final;
    w.tail_lo = 0.5 * t_final;
    w.tail_hi = t_final;
    return w;
}

SyncMetrics compute_metrics(const Trajectory& traj, const MetricsWindow& window) {
    if (traj.size() == 0) throw DegenerateWindowError("trajectory is empty");

    SyncMetrics metrics;
    metrics.final_edge_norm = traj.edge_values.back().norm();

    // rate fit: least squares of log V_e against t, above the floor
    std::vector<double> ts, logs;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        if (t < window.rate_lo || t > window.rate_hi) continue;
        if (traj.lyapunov[i] > 1e-14) {
            ts.push_back(t);
            logs.push_back(std::log(traj.lyapunov[i]));
        }
    }
    if (ts.size() < 2) {
        throw DegenerateWindowError("rate window [" + std::to_string(window.rate_lo) + ", " +
                                    std::to_string(window.rate_hi) +
                                    "] contains fewer than two usable points");
    }
    double mean_t = 0.0, mean_v = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mean_t += ts[i];
        mean_v += logs[i];
    }
    mean_t /= static_cast<double>(ts.size());
    mean_v /= static_cast<double>(ts.size());
    double cov = 0.0, var = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        cov += (ts[i] - mean_t) * (logs[i] - mean_v);
        var += (ts[i] - mean_t) * (ts[i] - mean_t);
    }
    metrics.fitted_rate = var > 0.0 ? cov / var : 0.0;

    double floor = std::numeric_limits<double>::infinity();
    bool tail_seen = false;
    double max_rel = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        max_rel = std::max(max_rel, traj.realization_rel_err[i]);
        const double t = traj.times[i];
        if (t >= window.tail_lo && t <= window.tail_hi) {
            floor = std::min(floor, traj.edge_values[i].norm());
            tail_seen = true;
        }
    }
    if (!tail_seen) {
        throw DegenerateWindowError("tail window [" + std::to_string(window.tail_lo) + ", " +
                                    std::to_string(window.tail_hi) + "] contains no grid points");
    }
    metrics.residual_floor = floor;
    metrics.max_realization_rel_err = max_rel;
    return metrics;
}

std::optional<double> hopf_phase_offset_drift(const NetworkSystem& sys, const Trajectory& traj) {
    for (const AgentModel& agent : sys.agents()) {
        if (agent.kind != "hopf") return std::nullopt;
    }
    if (traj.size() == 0) return std::nullopt;
    const int n_agents = sys.num_agents();
    auto phase = [&](const Eigen::VectorXd& x, int i) { return x(sys.state_offset(i) + 1); };
    double drift = 0.0;
    for (int i = 0; i < n_agents; ++i) {
        for (int j = i + 1; j < n_agents; ++j) {
            const double initial = phase(traj.states.front(), i) - phase(traj.states.front(), j);
            for (const Eigen::VectorXd& x : traj.states) {
                drift = std::max(drift, std::abs((phase(x, i) - phase(x, j)) - initial));
            }
        }
    }
    return drift;
}

namespace {

void print_value(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
    if (traj.size() == 0) return;
    const auto n = traj.states.front().size();
    const auto p = traj.inputs.front().size();
    const auto md = traj.edge_values.front().size();
    os << "t";
    for (Eigen::Index i = 0; i < n; ++i) os << ",x_" << (i + 1);
    for (Eigen::Index i = 0; i < p; ++i) os << ",u_" << (i + 1);
    for (Eigen::Index i = 0; i < md; ++i) os << ",z_" << (i + 1);
    os << ",V_e,lift_residual\n";
    for (std::size_t row = 0; row < traj.size(); ++row) {
        print_value(os, traj.times[row]);
        for (Eigen::Index i = 0; i < n; ++i) {
            os << ',';
            print_value(os, traj.states[row](i));
        }
        for (Eigen::Index i = 0; i < p; ++i) {
            os << ',';
            print_value(os, traj.inputs[row](i));
        }
        for (Eigen::Index i = 0; i < md; ++i) {
            os << ',';
            print_value(os, traj.edge_values[row](i));
        }
        os << ',';
        print_value(os, traj.lyapunov[row]);
        os << ',';
        print_value(os, traj.lift_residual[row]);
        os << '\n';
    }
}

}  // namespace edgelift
