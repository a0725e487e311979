#pragma once

#include <vector>

#include <Eigen/Core>

#include "edgelift/agent_model.hpp"
#include "edgelift/graph.hpp"
#include "edgelift/numlin.hpp"

namespace edgelift {

/// Graph plus agents: the stacked plant. All agents must share the output
/// dimension. Immutable after construction; the Kronecker-lifted incidence
/// operator is precomputed since it never depends on the state.
class NetworkSystem {
public:
    NetworkSystem(Graph graph, std::vector<AgentModel> agents);

    const Graph& graph() const { return graph_; }
    const std::vector<AgentModel>& agents() const { return agents_; }
    const AgentModel& agent(int i) const { return agents_[i]; }

    int num_agents() const { return static_cast<int>(agents_.size()); }
    int num_edges() const { return graph_.num_edges(); }
    int output_dim() const { return output_dim_; }            // d
    int total_state_dim() const { return total_state_dim_; }  // n
    int total_input_dim() const { return total_input_dim_; }  // p
    int edge_space_dim() const { return num_edges() * output_dim_; }

    int state_offset(int i) const { return state_offsets_[i]; }
    int input_offset(int i) const { return input_offsets_[i]; }

    Eigen::VectorXd agent_state(const Eigen::VectorXd& x, int i) const;

    /// (B^T ⊗ I_d), mapping stacked outputs to edge disagreements.
    const Eigen::MatrixXd& incidence_kron() const { return incidence_kron_; }

    Eigen::VectorXd stacked_drift(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd stacked_input_map(const Eigen::VectorXd& x) const;      // blkdiag G_i
    Eigen::VectorXd stacked_output(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd stacked_output_jacobian(const Eigen::VectorXd& x) const;  // blkdiag Dh_i

private:
    Graph graph_;
    std::vector<AgentModel> agents_;
    int output_dim_ = 0;
    int total_state_dim_ = 0;
    int total_input_dim_ = 0;
    std::vector<int> state_offsets_;
    std::vector<int> input_offsets_;
    Eigen::MatrixXd incidence_kron_;
};

/// Evaluated operator bundle at a state.
struct EdgeOperators {
    Eigen::VectorXd x;
    Eigen::VectorXd edge_value;     // z = F(x)
    Eigen::MatrixXd jacobian;       // J
    Eigen::MatrixXd projector;      // Pi = J J^+
    Eigen::MatrixXd lift_matrix;    // A = J G
    Eigen::VectorXd edge_flow;      // v* = -k Pi z
    Eigen::VectorXd lift_rhs;       // b = v* - J f
};

/// Stacked relative outputs per oriented edge.
Eigen::VectorXd edge_map(const NetworkSystem& sys, const Eigen::VectorXd& x);

/// J = (B^T ⊗ I_d) blkdiag(Dh_i).
Eigen::MatrixXd edge_jacobian(const NetworkSystem& sys, const Eigen::VectorXd& x);

/// Orthogonal projector onto the feasible edge-velocity subspace Im J.
Eigen::MatrixXd tangent_projector(const NetworkSystem& sys, const Eigen::VectorXd& x,
                                  const ToleranceParams& tol = {});

/// Projected gradient flow for the edge disagreement energy, scaled by k.
Eigen::VectorXd edge_flow(const NetworkSystem& sys, const Eigen::VectorXd& x, double k,
                          const ToleranceParams& tol = {});

EdgeOperators assemble_edge_operators(const NetworkSystem& sys, const Eigen::VectorXd& x,
                                      double k, const ToleranceParams& tol = {});

}  // namespace edgelift
