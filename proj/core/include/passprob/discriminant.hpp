#pragma once

#include <Eigen/Dense>

namespace passprob::model {

enum class DiscriminantKind { Linear, Quadratic };

// Gaussian class-conditional classifier on a numeric design matrix.
// LDA pools the covariance; QDA keeps one per class. A 1e-6 ridge is added
// when a class covariance is not positive definite.
struct DiscriminantModel {
    DiscriminantKind kind = DiscriminantKind::Linear;
    double log_prior[2] = {0.0, 0.0};
    Eigen::VectorXd mean[2];
    Eigen::MatrixXd cov_inv[2];   // shared for LDA (both entries identical)
    double log_det[2] = {0.0, 0.0};

    static DiscriminantModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 DiscriminantKind kind);

    // posterior P(y=1 | x) per row
    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
};

}  // namespace passprob::model
