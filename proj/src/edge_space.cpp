#include "edgelift/edge_space.hpp"

#include <string>
#include <utility>

#include "edgelift/errors.hpp"

namespace edgelift {

NetworkSystem::NetworkSystem(Graph graph, std::vector<AgentModel> agents)
    : graph_(std::move(graph)), agents_(std::move(agents)) {
    if (static_cast<int>(agents_.size()) != graph_.num_nodes) {
        throw InvalidArgumentError("agent count must equal the node count");
    }
    output_dim_ = agents_.front().output_dim;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        if (agents_[i].output_dim != output_dim_) {
            throw InvalidArgumentError("agent " + std::to_string(i) +
                                       " output dim differs from the shared output dim");
        }
        state_offsets_.push_back(total_state_dim_);
        input_offsets_.push_back(total_input_dim_);
        total_state_dim_ += agents_[i].state_dim;
        total_input_dim_ += agents_[i].input_dim;
    }

    const Eigen::MatrixXd b = incidence_matrix(graph_);
    const int m = graph_.num_edges();
    const int n = graph_.num_nodes;
    incidence_kron_ = Eigen::MatrixXd::Zero(m * output_dim_, n * output_dim_);
    for (int e = 0; e < m; ++e) {
        for (int v = 0; v < n; ++v) {
            if (b(v, e) != 0.0) {
                incidence_kron_.block(e * output_dim_, v * output_dim_, output_dim_, output_dim_) =
                    b(v, e) * Eigen::MatrixXd::Identity(output_dim_, output_dim_);
            }
        }
    }
}

Eigen::VectorXd NetworkSystem::agent_state(const Eigen::VectorXd& x, int i) const {
    if (x.size() != total_state_dim_) {
        throw InvalidArgumentError("state vector has dimension " + std::to_string(x.size()) +
                                   ", expected " + std::to_string(total_state_dim_));
    }
    return x.segment(state_offsets_[i], agents_[i].state_dim);
}

Eigen::VectorXd NetworkSystem::stacked_drift(const Eigen::VectorXd& x) const {
    Eigen::VectorXd f(total_state_dim_);
    for (int i = 0; i < num_agents(); ++i) {
        f.segment(state_offsets_[i], agents_[i].state_dim) = agents_[i].drift(agent_state(x, i));
    }
    return f;
}

Eigen::MatrixXd NetworkSystem::stacked_input_map(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(total_state_dim_, total_input_dim_);
    for (int i = 0; i < num_agents(); ++i) {
        g.block(state_offsets_[i], input_offsets_[i], agents_[i].state_dim,
                agents_[i].input_dim) = agents_[i].input_map(agent_state(x, i));
    }
    return g;
}

Eigen::VectorXd NetworkSystem::stacked_output(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y(num_agents() * output_dim_);
    for (int i = 0; i < num_agents(); ++i) {
        y.segment(i * output_dim_, output_dim_) = agents_[i].output(agent_state(x, i));
    }
    return y;
}

Eigen::MatrixXd NetworkSystem::stacked_output_jacobian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(num_agents() * output_dim_, total_state_dim_);
    for (int i = 0; i < num_agents(); ++i) {
        dh.block(i * output_dim_, state_offsets_[i], output_dim_, agents_[i].state_dim) =
            agents_[i].output_jacobian(agent_state(x, i));
    }
    return dh;
}

Eigen::VectorXd edge_map(const NetworkSystem& sys, const Eigen::VectorXd& x) {
    return sys.incidence_kron() * sys.stacked_output(x);
}

Eigen::MatrixXd edge_jacobian(const NetworkSystem& sys, const Eigen::VectorXd& x) {
    return sys.incidence_kron() * sys.stacked_output_jacobian(x);
}

Eigen::MatrixXd tangent_projector(const NetworkSystem& sys, const Eigen::VectorXd& x,
                                  const ToleranceParams& tol) {
    return range_projector(edge_jacobian(sys, x), tol);
}

Eigen::VectorXd edge_flow(const NetworkSystem& sys, const Eigen::VectorXd& x, double k,
                          const ToleranceParams& tol) {
    if (!(k > 0.0)) throw InvalidArgumentError("edge-flow gain k must be positive");
    return -k * (tangent_projector(sys, x, tol) * edge_map(sys, x));
}

EdgeOperators assemble_edge_operators(const NetworkSystem& sys, const Eigen::VectorXd& x,
                                      double k, const ToleranceParams& tol) {
    if (!(k > 0.0)) throw InvalidArgumentError("edge-flow gain k must be positive");
    EdgeOperators ops;
    ops.x = x;
    ops.edge_value = edge_map(sys, x);
    ops.jacobian = edge_jacobian(sys, x);
    ops.projector = range_projector(ops.jacobian, tol);
    ops.lift_matrix = ops.jacobian * sys.stacked_input_map(x);
    ops.edge_flow = -k * (ops.projector * ops.edge_value);
    ops.lift_rhs = ops.edge_flow - ops.jacobian * sys.stacked_drift(x);
    return ops;
}

}  // namespace edgelift
