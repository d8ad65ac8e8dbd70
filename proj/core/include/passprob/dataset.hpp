#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "passprob/feature_builder.hpp"

namespace passprob::model {

// Row-major numeric table shared by every classifier. Categorical columns
// carry category codes plus a level count; numeric columns have count 0.
struct Dataset {
    std::size_t cols = 0;
    std::vector<double> x;
    std::vector<int> y;                    // binary labels
    std::vector<int> n_categories;         // per column, 0 = numeric
    std::vector<std::int64_t> group;       // grouping key (play) per row

    std::size_t rows() const { return cols == 0 ? 0 : x.size() / cols; }
    const double* row(std::size_t r) const { return x.data() + r * cols; }
    double at(std::size_t r, std::size_t c) const { return x[r * cols + c]; }

    void add_row(const std::vector<double>& values, int label, std::int64_t group_key) {
        x.insert(x.end(), values.begin(), values.end());
        y.push_back(label);
        group.push_back(group_key);
    }

    static Dataset from_feature_rows(const std::vector<features::FeatureRow>& rows);
};

// One-hot design (drop-first contrasts for categorical columns).
Eigen::MatrixXd one_hot(const Dataset& data, const std::vector<std::size_t>& rows,
                        bool add_intercept);

std::vector<std::size_t> all_rows(const Dataset& data);

}  // namespace passprob::model
