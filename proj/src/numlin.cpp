#include "edgelift/numlin.hpp"

#include <Eigen/SVD>

#include "edgelift/errors.hpp"

namespace edgelift {

void ToleranceParams::validate() const {
    if (!(rank_rtol > 0.0 && rank_rtol < 1.0)) {
        throw InvalidArgumentError("rank_rtol must lie in (0, 1)");
    }
    if (!(residual_atol > 0.0 && residual_atol < 1.0)) {
        throw InvalidArgumentError("residual_atol must lie in (0, 1)");
    }
}

static void require_finite(const Eigen::MatrixXd& m) {
    if (!m.allFinite()) throw NonFiniteInputError();
}

Eigen::MatrixXd pinv(const Eigen::MatrixXd& m, const ToleranceParams& tol) {
    tol.validate();
    require_finite(m);
    if (m.rows() == 0 || m.cols() == 0) {
        return Eigen::MatrixXd::Zero(m.cols(), m.rows());
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double cutoff = tol.rank_rtol * sigma(0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > cutoff && sigma(i) > 0.0) inv(i) = 1.0 / sigma(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

int numerical_rank(const Eigen::MatrixXd& m, const ToleranceParams& tol) {
    tol.validate();
    require_finite(m);
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double cutoff = tol.rank_rtol * sigma(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > cutoff && sigma(i) > 0.0) ++rank;
    }
    return rank;
}

Eigen::MatrixXd range_projector(const Eigen::MatrixXd& m, const ToleranceParams& tol) {
    return m * pinv(m, tol);
}

Eigen::MatrixXd kernel_projector(const Eigen::MatrixXd& m, const ToleranceParams& tol) {
    return Eigen::MatrixXd::Identity(m.cols(), m.cols()) - pinv(m, tol) * m;
}

}  // namespace edgelift
