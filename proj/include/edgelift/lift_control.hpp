#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "edgelift/edge_space.hpp"

namespace edgelift {

struct LiftResult {
    Eigen::VectorXd u_star;
    double residual_norm = 0.0;  // ||A u* - b||
    bool feasible = false;       // residual <= residual_atol * (1 + ||b||)
    Eigen::VectorXd realized_edge_velocity;  // J f + A u*
};

/// Minimum-norm solution of the lift constraint A u = b. Infeasibility is
/// not an error: the pseudoinverse degrades to the minimum-norm
/// least-squares solution and the result flags it.
LiftResult min_norm_lift(const EdgeOperators& ops, const ToleranceParams& tol = {});

/// u* plus a kernel-projected perturbation; the realized edge velocity is
/// unchanged for any w.
Eigen::VectorXd family_lift(const EdgeOperators& ops, const Eigen::VectorXd& w,
                            const ToleranceParams& tol = {});

/// Nonnegative coupling weights with zero diagonal. Asymmetric weights
/// describe a directed interaction graph.
struct DiffusiveWeights {
    Eigen::MatrixXd w;

    explicit DiffusiveWeights(Eigen::MatrixXd weights);

    static DiffusiveWeights unit(const Graph& g);

    int size() const { return static_cast<int>(w.rows()); }
};

/// True when some node reaches every other along arcs j -> i for w_ij > 0
/// (the consensus hypothesis for the diffusive outer loop).
bool has_directed_spanning_tree(const DiffusiveWeights& weights);

/// Per-agent local right inversion of the output dynamics driven by a
/// diffusive outer loop: u_i = H_i^+ (v_i - a_i) with
/// v_i = -sum_j w_ij (y_i - y_j). Uses only agent i's state and the
/// relative outputs of its neighbors. Throws
/// RankDeficientOutputChannelError if some H_i loses row rank.
Eigen::VectorXd distributed_control(const NetworkSystem& sys, const Eigen::VectorXd& x,
                                    const DiffusiveWeights& weights,
                                    const ToleranceParams& tol = {});

enum class ControllerKind { model_lift, family, distributed };

struct ControllerConfig {
    ControllerKind kind = ControllerKind::model_lift;
    double gain = 1.0;                         // edge-flow gain k
    Eigen::VectorXd family_w;                  // kernel input (empty = zero)
    std::optional<DiffusiveWeights> weights;   // distributed only
    ToleranceParams tol;
};

using StateFeedback = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Pure state-feedback closure for the simulator. Validates the config;
/// a distributed weight digraph without a directed spanning tree only
/// logs a warning (the consensus hypothesis is the caller's business).
/// The closure holds a reference to `sys`, which must outlive it.
StateFeedback controller_closure(const NetworkSystem& sys, const ControllerConfig& config);

}  // namespace edgelift
