#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace edgelift {

/// One agent's control-affine data: drift f, input map G, output h and its
/// analytic Jacobian Dh. Hooks are pure; the analytic Jacobian is the one
/// used everywhere at runtime (finite differences only validate it).
struct AgentModel {
    int state_dim = 0;   // n_i
    int input_dim = 0;   // p_i
    int output_dim = 0;  // d

    std::string kind;
    std::vector<std::string> input_channel_names;  // size input_dim

    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> drift;            // f_i
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> input_map;        // G_i
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> output;           // h_i
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> output_jacobian;  // Dh_i
};

struct HopfOscillatorParams {
    enum class Actuation { full, radial_only };

    double omega = 1.0;
    Actuation actuation = Actuation::full;
};

/// f = 0, G = I, h = identity; n = p = d = dim.
AgentModel make_single_integrator(int dim);

/// Planar limit-cycle oscillator in polar state (r, theta): the unit
/// circle is attracting and the phase advances at constant rate omega.
/// Output is the Cartesian position. Radial-only actuation zeroes the
/// phase input channel. Evaluation requires r > 1e-6 (polar chart guard).
AgentModel make_hopf_oscillator(const HopfOscillatorParams& params);

/// f = Ax, G = B, h = Cx. Dimensions are taken from the matrix shapes.
AgentModel make_linear_agent(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const Eigen::MatrixXd& c);

struct OutputDynamics {
    Eigen::VectorXd drift_rate;   // a_i = Dh_i f_i
    Eigen::MatrixXd input_gain;   // H_i = Dh_i G_i
};

/// First-order output dynamics: ydot = a_i + H_i u_i.
OutputDynamics output_dynamics(const AgentModel& model, const Eigen::VectorXd& x);

/// Max-norm relative error between the analytic output Jacobian and a
/// central finite difference of the output map over the given states.
double validate_jacobian(const AgentModel& model, std::span<const Eigen::VectorXd> states,
                         double step);

}  // namespace edgelift
