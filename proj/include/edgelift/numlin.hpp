#pragma once

#include <Eigen/Core>

namespace edgelift {

/// Cutoffs separating "numerically zero" from "structurally present".
/// rank_rtol is relative to the largest singular value; residual_atol
/// scales the feasibility test of linear lifts.
struct ToleranceParams {
    double rank_rtol = 1e-10;
    double residual_atol = 1e-8;

    void validate() const;
};

/// Moore–Penrose pseudoinverse via SVD. Singular values below
/// rank_rtol * sigma_max are treated as zero.
Eigen::MatrixXd pinv(const Eigen::MatrixXd& m, const ToleranceParams& tol = {});

/// Number of singular values above rank_rtol * sigma_max (0 for the zero
/// or empty matrix).
int numerical_rank(const Eigen::MatrixXd& m, const ToleranceParams& tol = {});

/// Orthogonal projector onto the column space: M * pinv(M).
Eigen::MatrixXd range_projector(const Eigen::MatrixXd& m, const ToleranceParams& tol = {});

/// Orthogonal projector onto the kernel: I - pinv(M) * M.
Eigen::MatrixXd kernel_projector(const Eigen::MatrixXd& m, const ToleranceParams& tol = {});

}  // namespace edgelift
