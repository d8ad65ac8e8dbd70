#pragma once

#include <utility>
#include <vector>

namespace passprob::model {

// ROC points as (fpr, tpr), from (0,0) to (1,1), one vertex per distinct
// score threshold.
std::vector<std::pair<double, double>> roc_points(const std::vector<double>& scores,
                                                  const std::vector<int>& labels);

// Trapezoidal area under the ROC curve; equals pairwise concordance with
// ties counted 1/2. Throws on single-class input.
double auc_trapezoid(const std::vector<double>& scores, const std::vector<int>& labels);

}  // namespace passprob::model
