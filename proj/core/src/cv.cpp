#include "passprob/cv.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>
#include <set>

#include "passprob/csv.hpp"
#include "passprob/discriminant.hpp"
#include "passprob/errors.hpp"
#include "passprob/glm.hpp"
#include "passprob/metrics.hpp"
#include "passprob/rng.hpp"

namespace passprob::model {

FoldPlan FoldPlan::make(const std::vector<std::int64_t>& play_keys, int fold_count,
                        std::uint64_t seed) {
    std::vector<std::int64_t> keys = play_keys;
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    if (static_cast<int>(keys.size()) < fold_count)
        throw NumericalError("fold plan: fewer plays than folds");

    auto rng = rng::make_engine(seed, rng::kSaltFold, static_cast<std::uint64_t>(fold_count));
    std::shuffle(keys.begin(), keys.end(), rng);

    FoldPlan plan;
    plan.fold_count = fold_count;
    for (std::size_t i = 0; i < keys.size(); ++i)
        plan.fold_of[keys[i]] = static_cast<int>(i % fold_count);
    return plan;
}

const char* method_name(Method m) {
    switch (m) {
        case Method::RandomForest: return "random_forest";
        case Method::GlmLogit: return "glm_logit";
        case Method::GlmProbit: return "glm_probit";
        case Method::GlmCloglog: return "glm_cloglog";
        case Method::Lda: return "lda";
        case Method::Qda: return "qda";
    }
    return "?";
}

std::vector<Method> all_methods() {
    return {Method::RandomForest, Method::GlmLogit, Method::GlmProbit,
            Method::GlmCloglog,   Method::Lda,      Method::Qda};
}

namespace {

Eigen::VectorXd labels_of(const Dataset& data, const std::vector<std::size_t>& rows) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) y(static_cast<Eigen::Index>(i)) = data.y[rows[i]];
    return y;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

std::vector<double> fit_and_score(Method method, const Dataset& data,
                                  const std::vector<std::size_t>& train,
                                  const std::vector<std::size_t>& test,
                                  const ForestConfig& forest_config) {
    switch (method) {
        case Method::RandomForest: {
            Forest f = Forest::train(data, train, forest_config);
            return f.predict(data, test);
        }
        case Method::GlmLogit:
        case Method::GlmProbit:
        case Method::GlmCloglog: {
            const Link link = method == Method::GlmLogit ? Link::Logit
                            : method == Method::GlmProbit ? Link::Probit
                                                          : Link::Cloglog;
            const Eigen::MatrixXd Xtr = one_hot(data, train, true);
            const Eigen::MatrixXd Xte = one_hot(data, test, true);
            GlmModel m = GlmModel::fit(Xtr, labels_of(data, train), link);
            return to_std(m.predict(Xte));
        }
        case Method::Lda:
        case Method::Qda: {
            const DiscriminantKind kind =
                method == Method::Lda ? DiscriminantKind::Linear : DiscriminantKind::Quadratic;
            const Eigen::MatrixXd Xtr = one_hot(data, train, false);
            const Eigen::MatrixXd Xte = one_hot(data, test, false);
            DiscriminantModel m = DiscriminantModel::fit(Xtr, labels_of(data, train), kind);
            return to_std(m.predict(Xte));
        }
    }
    throw NumericalError("unknown method");
}

EvalReport run_benchmark(const Dataset& data, const std::vector<Method>& methods,
                         const std::vector<int>& fold_counts, std::uint64_t seed,
                         const ForestConfig& forest_config) {
    EvalReport report;
    for (int folds : fold_counts) {
        const FoldPlan plan = FoldPlan::make(data.group, folds, seed);
        for (Method method : methods) {
            EvalCell cell;
            cell.method = method;
            cell.folds = folds;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                // pooled out-of-fold scores
                std::vector<double> scores(data.rows(), 0.0);
                for (int k = 0; k < folds; ++k) {
                    std::vector<std::size_t> train, test;
                    for (std::size_t r = 0; r < data.rows(); ++r) {
                        (plan.fold_of.at(data.group[r]) == k ? test : train).push_back(r);
                    }
                    const std::vector<double> s =
                        fit_and_score(method, data, train, test, forest_config);
                    for (std::size_t i = 0; i < test.size(); ++i) scores[test[i]] = s[i];
                }
                cell.auc = auc_trapezoid(scores, data.y);
                cell.roc = roc_points(scores, data.y);
                long ok = 0;
                for (std::size_t r = 0; r < data.rows(); ++r)
                    ok += (scores[r] >= 0.5) == (data.y[r] == 1);
                cell.threshold_accuracy = static_cast<double>(ok) / data.rows();
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            report.cells.push_back(std::move(cell));
        }
    }
    std::stable_sort(report.cells.begin(), report.cells.end(),
                     [](const EvalCell& a, const EvalCell& b) { return a.auc > b.auc; });
    return report;
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
    out << "method,folds,auc,seconds,threshold_accuracy,error\n";
    for (const auto& c : report.cells) {
        out << method_name(c.method) << ',' << c.folds << ',' << csv::fmt(c.auc) << ','
            << csv::fmt(c.seconds) << ',' << csv::fmt(c.threshold_accuracy) << ','
            << csv::quote(c.error) << '\n';
    }
}

void write_roc_csv(std::ostream& out, const EvalReport& report) {
    out << "method,folds,fpr,tpr\n";
    for (const auto& c : report.cells) {
        for (const auto& [fpr, tpr] : c.roc)
            out << method_name(c.method) << ',' << c.folds << ',' << csv::fmt(fpr) << ','
                << csv::fmt(tpr) << '\n';
    }
}

}  // namespace passprob::model
