#include "passprob/dataset.hpp"

#include <numeric>

namespace passprob::model {

Dataset Dataset::from_feature_rows(const std::vector<features::FeatureRow>& rows) {
    Dataset d;
    const auto& cols = features::schema();
    d.cols = cols.size();
    d.n_categories.reserve(cols.size());
    for (const auto& c : cols)
        d.n_categories.push_back(static_cast<int>(c.categories.size()));
    d.x.reserve(rows.size() * d.cols);
    for (const auto& row : rows) {
        d.x.insert(d.x.end(), row.x.begin(), row.x.end());
        d.y.push_back(row.label > 0.5 ? 1 : 0);
        d.group.push_back(row.game_id * 1000000 + row.play_id);
    }
    return d;
}

std::vector<std::size_t> all_rows(const Dataset& data) {
    std::vector<std::size_t> idx(data.rows());
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

Eigen::MatrixXd one_hot(const Dataset& data, const std::vector<std::size_t>& rows,
                        bool add_intercept) {
    std::size_t width = add_intercept ? 1 : 0;
    for (std::size_t c = 0; c < data.cols; ++c)
        width += data.n_categories[c] > 0 ? static_cast<std::size_t>(data.n_categories[c] - 1) : 1;

    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                              static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double* src = data.row(rows[r]);
        std::size_t j = 0;
        if (add_intercept) X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j++)) = 1.0;
        for (std::size_t c = 0; c < data.cols; ++c) {
            const int ncat = data.n_categories[c];
            if (ncat > 0) {
                const int code = static_cast<int>(src[c]);
                if (code > 0)  // level 0 is the reference
                    X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j + code - 1)) = 1.0;
                j += static_cast<std::size_t>(ncat - 1);
            } else {
                X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j++)) = src[c];
            }
        }
    }
    return X;
}

}  // namespace passprob::model
