#include "passprob/discriminant.hpp"

#include <cmath>
#include <sstream>

#include "passprob/errors.hpp"

namespace passprob::model {

namespace {

// Inverse + log-determinant via LLT, retried with a ridge.
bool invert_spd(Eigen::MatrixXd cov, Eigen::MatrixXd& inv, double& log_det) {
    for (int attempt = 0; attempt < 2; ++attempt) {
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() == Eigen::Success) {
            const Eigen::MatrixXd L = llt.matrixL();
            log_det = 0.0;
            bool ok = true;
            for (Eigen::Index i = 0; i < L.rows(); ++i) {
                if (L(i, i) <= 0) { ok = false; break; }
                log_det += 2.0 * std::log(L(i, i));
            }
            if (ok) {
                inv = llt.solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
                return true;
            }
        }
        cov.diagonal().array() += 1e-6;
    }
    return false;
}

}  // namespace

DiscriminantModel DiscriminantModel::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                         DiscriminantKind kind) {
    DiscriminantModel m;
    m.kind = kind;
    const Eigen::Index n = X.rows(), p = X.cols();
    Eigen::Index counts[2] = {0, 0};
    for (Eigen::Index i = 0; i < n; ++i) counts[y(i) > 0.5 ? 1 : 0]++;
    if (counts[0] == 0 || counts[1] == 0)
        throw NumericalError("discriminant: both classes must be present");

    for (int c = 0; c < 2; ++c) {
        m.log_prior[c] = std::log(static_cast<double>(counts[c]) / n);
        m.mean[c] = Eigen::VectorXd::Zero(p);
    }
    for (Eigen::Index i = 0; i < n; ++i) m.mean[y(i) > 0.5 ? 1 : 0] += X.row(i).transpose();
    for (int c = 0; c < 2; ++c) m.mean[c] /= static_cast<double>(counts[c]);

    Eigen::MatrixXd scatter[2] = {Eigen::MatrixXd::Zero(p, p), Eigen::MatrixXd::Zero(p, p)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = y(i) > 0.5 ? 1 : 0;
        const Eigen::VectorXd d = X.row(i).transpose() - m.mean[c];
        scatter[c] += d * d.transpose();
    }

    auto invert_or_throw = [&](Eigen::MatrixXd cov, int c) {
        Eigen::MatrixXd inv;
        double log_det;
        if (!invert_spd(std::move(cov), inv, log_det)) {
            std::ostringstream os;
            os << "discriminant: covariance for class " << c
               << " is singular even after ridge 1e-6 (check for constant or aliased columns)";
            throw NumericalError(os.str());
        }
        m.cov_inv[c] = std::move(inv);
        m.log_det[c] = log_det;
    };

    if (kind == DiscriminantKind::Linear) {
        Eigen::MatrixXd pooled = (scatter[0] + scatter[1]) / static_cast<double>(n - 2);
        invert_or_throw(pooled, 0);
        m.cov_inv[1] = m.cov_inv[0];
        m.log_det[1] = m.log_det[0];
    } else {
        for (int c = 0; c < 2; ++c) {
            Eigen::MatrixXd cov = scatter[c] / std::max<double>(1.0, static_cast<double>(counts[c] - 1));
            invert_or_throw(cov, c);
        }
    }
    return m;
}

Eigen::VectorXd DiscriminantModel::predict(const Eigen::MatrixXd& X) const {
    Eigen::VectorXd out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        double score[2];
        for (int c = 0; c < 2; ++c) {
            const Eigen::VectorXd d = X.row(i).transpose() - mean[c];
            score[c] = -0.5 * log_det[c] - 0.5 * d.dot(cov_inv[c] * d) + log_prior[c];
        }
        const double mx = std::max(score[0], score[1]);
        const double e0 = std::exp(score[0] - mx), e1 = std::exp(score[1] - mx);
        out(i) = e1 / (e0 + e1);
    }
    return out;
}

}  // namespace passprob::model
