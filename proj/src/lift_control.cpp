#include "edgelift/lift_control.hpp"

#include <string>
#include <utility>

#include "edgelift/errors.hpp"
#include "edgelift/log.hpp"

namespace edgelift {

LiftResult min_norm_lift(const EdgeOperators& ops, const ToleranceParams& tol) {
    LiftResult result;
    result.u_star = pinv(ops.lift_matrix, tol) * ops.lift_rhs;
    const Eigen::VectorXd au = ops.lift_matrix * result.u_star;
    result.residual_norm = (au - ops.lift_rhs).norm();
    result.feasible = result.residual_norm <= tol.residual_atol * (1.0 + ops.lift_rhs.norm());
    // J f + A u*, with J f recovered as v* - b
    result.realized_edge_velocity = au + (ops.edge_flow - ops.lift_rhs);
    return result;
}

Eigen::VectorXd family_lift(const EdgeOperators& ops, const Eigen::VectorXd& w,
                            const ToleranceParams& tol) {
    if (w.size() != ops.lift_matrix.cols()) {
        throw InvalidArgumentError("family kernel input w has the wrong dimension");
    }
    return min_norm_lift(ops, tol).u_star + kernel_projector(ops.lift_matrix, tol) * w;
}

DiffusiveWeights::DiffusiveWeights(Eigen::MatrixXd weights) : w(std::move(weights)) {
    if (w.rows() != w.cols()) throw InvalidArgumentError("weight matrix must be square");
    for (int i = 0; i < w.rows(); ++i) {
        if (w(i, i) != 0.0) throw InvalidArgumentError("weight matrix must have zero diagonal");
        for (int j = 0; j < w.cols(); ++j) {
            if (w(i, j) < 0.0) throw InvalidArgumentError("weights must be nonnegative");
        }
    }
}

DiffusiveWeights DiffusiveWeights::unit(const Graph& g) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(g.num_nodes, g.num_nodes);
    for (const auto& [i, j] : g.edges) {
        w(i, j) = 1.0;
        w(j, i) = 1.0;
    }
    return DiffusiveWeights(w);
}

bool has_directed_spanning_tree(const DiffusiveWeights& weights) {
    const int n = weights.size();
    // arc j -> i whenever i listens to j; root must reach everyone
    for (int root = 0; root < n; ++root) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack{root};
        seen[root] = true;
        int count = 1;
        while (!stack.empty()) {
            const int j = stack.back();
            stack.pop_back();
            for (int i = 0; i < n; ++i) {
                if (!seen[i] && weights.w(i, j) > 0.0) {
                    seen[i] = true;
                    ++count;
                    stack.push_back(i);
                }
            }
        }
        if (count == n) return true;
    }
    return false;
}

Eigen::VectorXd distributed_control(const NetworkSystem& sys, const Eigen::VectorXd& x,
                                    const DiffusiveWeights& weights,
                                    const ToleranceParams& tol) {
    if (weights.size() != sys.num_agents()) {
        throw InvalidArgumentError("weight matrix size must equal the agent count");
    }
    const int d = sys.output_dim();
    // local outputs once; agent i only reads y_j for w_ij > 0
    std::vector<Eigen::VectorXd> y(sys.num_agents());
    for (int i = 0; i < sys.num_agents(); ++i) {
        y[i] = sys.agent(i).output(sys.agent_state(x, i));
    }
    Eigen::VectorXd u(sys.total_input_dim());
    for (int i = 0; i < sys.num_agents(); ++i) {
        const auto [a, h] = output_dynamics(sys.agent(i), sys.agent_state(x, i));
        if (numerical_rank(h, tol) < d) {
            throw RankDeficientOutputChannelError(
                i, "agent " + std::to_string(i) +
                   ": output channel H_i is not right invertible (rank " +
                   std::to_string(numerical_rank(h, tol)) + " < " + std::to_string(d) + ")");
        }
        Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
        for (int j = 0; j < sys.num_agents(); ++j) {
            if (weights.w(i, j) > 0.0) v -= weights.w(i, j) * (y[i] - y[j]);
        }
        u.segment(sys.input_offset(i), sys.agent(i).input_dim) = pinv(h, tol) * (v - a);
    }
    return u;
}

StateFeedback controller_closure(const NetworkSystem& sys, const ControllerConfig& config) {
    config.tol.validate();
    switch (config.kind) {
        case ControllerKind::model_lift: {
            if (!(config.gain > 0.0)) throw InvalidArgumentError("gain must be positive");
            const double k = config.gain;
            const ToleranceParams tol = config.tol;
            return [&sys, k, tol](const Eigen::VectorXd& x) {
                return min_norm_lift(assemble_edge_operators(sys, x, k, tol), tol).u_star;
            };
        }
        case ControllerKind::family: {
            if (!(config.gain > 0.0)) throw InvalidArgumentError("gain must be positive");
            Eigen::VectorXd w = config.family_w;
            if (w.size() == 0) w = Eigen::VectorXd::Zero(sys.total_input_dim());
            if (w.size() != sys.total_input_dim()) {
                throw InvalidArgumentError("family kernel input w has the wrong dimension");
            }
            const double k = config.gain;
            const ToleranceParams tol = config.tol;
            return [&sys, k, w, tol](const Eigen::VectorXd& x) {
                return family_lift(assemble_edge_operators(sys, x, k, tol), w, tol);
            };
        }
        case ControllerKind::distributed: {
            if (!config.weights.has_value()) {
                throw InvalidArgumentError("distributed controller requires weights");
            }
            const DiffusiveWeights weights = *config.weights;
            if (weights.size() != sys.num_agents()) {
                throw InvalidArgumentError("weight matrix size must equal the agent count");
            }
            if (!has_directed_spanning_tree(weights)) {
                log::warn("diffusive weight digraph has no directed spanning tree; "
                          "consensus is not guaranteed");
            }
            const ToleranceParams tol = config.tol;
            return [&sys, weights, tol](const Eigen::VectorXd& x) {
                return distributed_control(sys, x, weights, tol);
            };
        }
    }
    throw InvalidArgumentError("unknown controller kind");
}

}  // namespace edgelift
