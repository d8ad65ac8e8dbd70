#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "passprob/dataset.hpp"

namespace passprob::model {

struct ForestConfig {
    int n_trees = 500;
    int mtry = 15;          // features sampled per split
    int min_leaf = 1;
    std::uint64_t seed = 0;
};

struct TreeNode {
    int feature = -1;               // -1 = leaf
    bool categorical = false;
    double threshold = 0.0;         // numeric split: x < threshold goes left
    std::uint32_t left_mask = 0;    // categorical split: category bit set goes left
    int left = -1, right = -1;
    double leaf_fraction = 0.0;     // completion fraction at the leaf
};

struct Tree {
    std::vector<TreeNode> nodes;
    double predict(const double* x) const;
};

class Forest {
public:
    static Forest train(const Dataset& data, const std::vector<std::size_t>& rows,
                        const ForestConfig& config);

    double predict_row(const double* x) const;
    std::vector<double> predict(const Dataset& data, const std::vector<std::size_t>& rows) const;

    const ForestConfig& config() const { return config_; }
    const std::vector<Tree>& trees() const { return trees_; }
    double oob_error() const { return oob_error_; }
    bool constant_labels() const { return constant_labels_; }

    std::string to_json() const;
    static Forest from_json(const std::string& text);

private:
    ForestConfig config_;
    std::vector<Tree> trees_;
    std::vector<int> n_categories_;
    double oob_error_ = 0.0;
    bool constant_labels_ = false;
};

}  // namespace passprob::model
