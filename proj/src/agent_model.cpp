#include "edgelift/agent_model.hpp"

#include <cmath>

#include "edgelift/errors.hpp"

namespace edgelift {

namespace {

constexpr double kRadiusGuard = 1e-6;

void require_state_dim(const Eigen::VectorXd& x, int dim, const std::string& kind) {
    if (x.size() != dim) {
        throw InvalidArgumentError(kind + " expects state of dimension " + std::to_string(dim));
    }
}

}  // namespace

AgentModel make_single_integrator(int dim) {
    if (dim < 1) throw InvalidArgumentError("integrator dimension must be >= 1");
    AgentModel m;
    m.state_dim = m.input_dim = m.output_dim = dim;
    m.kind = "single_integrator";
    for (int i = 0; i < dim; ++i) m.input_channel_names.push_back(std::to_string(i + 1));
    m.drift = [dim](const Eigen::VectorXd& x) {
        require_state_dim(x, dim, "single_integrator");
        return Eigen::VectorXd::Zero(dim).eval();
    };
    m.input_map = [dim](const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Identity(dim, dim).eval();
    };
    m.output = [dim](const Eigen::VectorXd& x) {
        require_state_dim(x, dim, "single_integrator");
        return x;
    };
    m.output_jacobian = [dim](const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Identity(dim, dim).eval();
    };
    return m;
}

AgentModel make_hopf_oscillator(const HopfOscillatorParams& params) {
    if (!(params.omega > 0.0)) throw InvalidArgumentError("hopf omega must be positive");
    const double omega = params.omega;
    const bool radial_only = params.actuation == HopfOscillatorParams::Actuation::radial_only;

    auto guard = [](const Eigen::VectorXd& x) {
        require_state_dim(x, 2, "hopf");
        if (!(x(0) > kRadiusGuard)) {
            throw DomainError("hopf oscillator evaluated at radius r <= 1e-6");
        }
    };

    AgentModel m;
    m.state_dim = 2;
    m.input_dim = 2;
    m.output_dim = 2;
    m.kind = "hopf";
    m.input_channel_names = {"r", "theta"};
    m.drift = [guard, omega](const Eigen::VectorXd& x) {
        guard(x);
        Eigen::VectorXd f(2);
        f << (1.0 - x(0) * x(0)) * x(0), omega;
        return f;
    };
    m.input_map = [guard, radial_only](const Eigen::VectorXd& x) {
        guard(x);
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
        if (radial_only) g(1, 1) = 0.0;
        return g;
    };
    m.output = [guard](const Eigen::VectorXd& x) {
        guard(x);
        Eigen::VectorXd y(2);
        y << x(0) * std::cos(x(1)), x(0) * std::sin(x(1));
        return y;
    };
    m.output_jacobian = [guard](const Eigen::VectorXd& x) {
        guard(x);
        const double c = std::cos(x(1));
        const double s = std::sin(x(1));
        Eigen::MatrixXd j(2, 2);
        j << c, -x(0) * s, s, x(0) * c;
        return j;
    };
    return m;
}

AgentModel make_linear_agent(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const Eigen::MatrixXd& c) {
    const auto n = a.rows();
    if (a.cols() != n) throw InvalidArgumentError("linear agent: A must be square");
    if (b.rows() != n) throw InvalidArgumentError("linear agent: B row count must match A");
    if (c.cols() != n) throw InvalidArgumentError("linear agent: C column count must match A");
    AgentModel m;
    m.state_dim = static_cast<int>(n);
    m.input_dim = static_cast<int>(b.cols());
    m.output_dim = static_cast<int>(c.rows());
    m.kind = "linear";
    for (int i = 0; i < m.input_dim; ++i) m.input_channel_names.push_back(std::to_string(i + 1));
    const int dim = m.state_dim;
    m.drift = [a, dim](const Eigen::VectorXd& x) {
        require_state_dim(x, dim, "linear");
        return (a * x).eval();
    };
    m.input_map = [b](const Eigen::VectorXd&) { return b; };
    m.output = [c, dim](const Eigen::VectorXd& x) {
        require_state_dim(x, dim, "linear");
        return (c * x).eval();
    };
    m.output_jacobian = [c](const Eigen::VectorXd&) { return c; };
    return m;
}

OutputDynamics output_dynamics(const AgentModel& model, const Eigen::VectorXd& x) {
    const Eigen::MatrixXd dh = model.output_jacobian(x);
    return {dh * model.drift(x), dh * model.input_map(x)};
}

double validate_jacobian(const AgentModel& model, std::span<const Eigen::VectorXd> states,
                         double step) {
    if (!(step > 0.0)) throw InvalidArgumentError("finite-difference step must be positive");
    double worst = 0.0;
    for (const Eigen::VectorXd& x : states) {
        const Eigen::MatrixXd analytic = model.output_jacobian(x);
        Eigen::MatrixXd fd(model.output_dim, model.state_dim);
        for (int k = 0; k < model.state_dim; ++k) {
            Eigen::VectorXd lo = x;
            Eigen::VectorXd hi = x;
            lo(k) -= step;
            hi(k) += step;
            fd.col(k) = (model.output(hi) - model.output(lo)) / (2.0 * step);
        }
        const double scale = 1.0 + analytic.cwiseAbs().maxCoeff();
        const double err = (fd - analytic).cwiseAbs().maxCoeff() / scale;
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace edgelift
