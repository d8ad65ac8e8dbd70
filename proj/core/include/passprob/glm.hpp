#pragma once

#include <vector>

#include <Eigen/Dense>

namespace passprob::model {

enum class Link { Logit, Probit, Cloglog };

// Binomial regression fitted by iteratively reweighted least squares.
struct GlmModel {
    Link link = Link::Logit;
    Eigen::VectorXd beta;
    std::vector<double> deviance_trace;
    bool converged = false;
    bool separation_warning = false;  // coefficients were capped

    static GlmModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Link link,
                        int max_iter = 50, double tol = 1e-8);

    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
};

double link_inverse(Link link, double eta);

}  // namespace passprob::model
