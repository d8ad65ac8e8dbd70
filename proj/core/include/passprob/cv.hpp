#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "passprob/dataset.hpp"
#include "passprob/forest.hpp"

namespace passprob::model {

// Leave-group-out fold plan: every play's frames are held out together.
struct FoldPlan {
    int fold_count = 0;
    std::map<std::int64_t, int> fold_of;  // play key -> fold

    static FoldPlan make(const std::vector<std::int64_t>& play_keys, int fold_count,
                         std::uint64_t seed);
};

enum class Method { RandomForest, GlmLogit, GlmProbit, GlmCloglog, Lda, Qda };

const char* method_name(Method m);
std::vector<Method> all_methods();

struct EvalCell {
    Method method = Method::RandomForest;
    int folds = 0;
    double auc = 0.0;
    double seconds = 0.0;
    double threshold_accuracy = 0.0;  // out-of-fold, threshold 0.5
    std::string error;                // non-empty when the method failed
    std::vector<std::pair<double, double>> roc;
};

struct EvalReport {
    std::vector<EvalCell> cells;  // sorted by AUC descending
};

// Fits one method on the given training rows and scores the test rows.
std::vector<double> fit_and_score(Method method, const Dataset& data,
                                  const std::vector<std::size_t>& train,
                                  const std::vector<std::size_t>& test,
                                  const ForestConfig& forest_config);

EvalReport run_benchmark(const Dataset& data, const std::vector<Method>& methods,
                         const std::vector<int>& fold_counts, std::uint64_t seed,
                         const ForestConfig& forest_config);

// CSV mirrors of the comparison table and the ROC point list.
void write_report_csv(std::ostream& out, const EvalReport& report);
void write_roc_csv(std::ostream& out, const EvalReport& report);

}  // namespace passprob::model
