#include "passprob/glm.hpp"

#include <cmath>
#include <sstream>

#include "passprob/errors.hpp"

namespace passprob::model {

namespace {

constexpr double kMuEps = 1e-10;
constexpr double kCoefCap = 30.0;

double clamp_mu(double mu) { return std::min(1.0 - kMuEps, std::max(kMuEps, mu)); }

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// mu and dmu/deta for each link
void link_eval(Link link, double eta, double& mu, double& dmu) {
    switch (link) {
        case Link::Logit: {
            mu = 1.0 / (1.0 + std::exp(-eta));
            dmu = mu * (1.0 - mu);
            break;
        }
        case Link::Probit: {
            mu = norm_cdf(eta);
            dmu = norm_pdf(eta);
            break;
        }
        case Link::Cloglog: {
            const double ex = std::exp(std::min(eta, 30.0));
            mu = 1.0 - std::exp(-ex);
            dmu = ex * std::exp(-ex);
            break;
        }
    }
    mu = clamp_mu(mu);
    dmu = std::max(dmu, kMuEps);
}

double deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double m = clamp_mu(mu(i));
        dev += y(i) > 0.5 ? -2.0 * std::log(m) : -2.0 * std::log(1.0 - m);
    }
    return dev;
}

}  // namespace

double link_inverse(Link link, double eta) {
    double mu = 0.0, dmu = 0.0;
    link_eval(link, eta, mu, dmu);
    return mu;
}

GlmModel GlmModel::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Link link, int max_iter,
                       double tol) {
    GlmModel model;
    model.link = link;
    const Eigen::Index n = X.rows(), p = X.cols();
    model.beta = Eigen::VectorXd::Zero(p);

    Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd mu(n), dmu(n);
    double prev_dev = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) link_eval(link, 0.0, mu(i), dmu(i));
    prev_dev = deviance(y, mu);
    model.deviance_trace.push_back(prev_dev);

    for (int iter = 0; iter < max_iter; ++iter) {
        Eigen::VectorXd w(n), z(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double var = mu(i) * (1.0 - mu(i));
            w(i) = dmu(i) * dmu(i) / std::max(var, kMuEps);
            z(i) = eta(i) + (y(i) - mu(i)) / dmu(i);
        }
        const Eigen::MatrixXd Xw = X.transpose() * w.asDiagonal();
        Eigen::MatrixXd XtWX = Xw * X;
        // tiny ridge keeps rank-deficient designs solvable
        XtWX.diagonal().array() += 1e-10;
        const Eigen::VectorXd beta_new = XtWX.ldlt().solve(Xw * z);
        if (!beta_new.allFinite()) {
            std::ostringstream os;
            os << "glm: IRLS produced non-finite coefficients at iteration " << iter;
            throw NumericalError(os.str());
        }
        model.beta = beta_new;
        eta = X * model.beta;
        for (Eigen::Index i = 0; i < n; ++i) link_eval(link, eta(i), mu(i), dmu(i));
        const double dev = deviance(y, mu);
        model.deviance_trace.push_back(dev);
        const double rel = std::fabs(dev - prev_dev) / (std::fabs(dev) + 0.1);
        prev_dev = dev;
        // Separated data drives the deviance to zero without the relative
        // change ever settling; a near-zero deviance is a perfect fit.
        if (rel < tol || dev < 1e-6) {
            model.converged = true;
            model.separation_warning = model.separation_warning || dev < 1e-6;
            break;
        }
    }
    if (!model.converged) {
        std::ostringstream os;
        os << "glm: IRLS did not converge in " << max_iter << " iterations; deviance trajectory:";
        for (double d : model.deviance_trace) os << ' ' << d;
        throw NumericalError(os.str());
    }

    // Quasi-separation leaves coefficients diverging; cap and warn.
    for (Eigen::Index j = 0; j < p; ++j) {
        if (std::fabs(model.beta(j)) > kCoefCap) {
            model.beta(j) = model.beta(j) > 0 ? kCoefCap : -kCoefCap;
            model.separation_warning = true;
        }
    }
    return model;
}

Eigen::VectorXd GlmModel::predict(const Eigen::MatrixXd& X) const {
    Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd out(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) out(i) = link_inverse(link, eta(i));
    return out;
}

}  // namespace passprob::model
