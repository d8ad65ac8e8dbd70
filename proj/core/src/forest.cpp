#include "passprob/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <json.hpp>

#include "passprob/errors.hpp"
#include "passprob/rng.hpp"

namespace passprob::model {

using nlohmann::json;

double Tree::predict(const double* x) const {
    int node = 0;
    while (nodes[node].feature >= 0) {
        const TreeNode& n = nodes[node];
        bool go_left;
        if (n.categorical) {
            const int code = static_cast<int>(x[n.feature]);
            go_left = code >= 0 && code < 32 && (n.left_mask >> code) & 1u;
        } else {
            go_left = x[n.feature] < n.threshold;
        }
        node = go_left ? n.left : n.right;
    }
    return nodes[node].leaf_fraction;
}

namespace {

struct SplitChoice {
    int feature = -1;
    bool categorical = false;
    double threshold = 0.0;
    std::uint32_t left_mask = 0;
    double impurity = 0.0;  // weighted child Gini; lower is better
    bool valid = false;
};

double gini(long pos, long n) {
    if (n == 0) return 0.0;
    const double p = static_cast<double>(pos) / n;
    return 2.0 * p * (1.0 - p);
}

// Best split of `idx` on one feature by Gini impurity decrease.
SplitChoice best_split_on_feature(const Dataset& data, const std::vector<std::size_t>& idx,
                                  int feature) {
    SplitChoice best;
    best.feature = feature;
    const long n = static_cast<long>(idx.size());
    long pos_total = 0;
    for (std::size_t r : idx) pos_total += data.y[r];

    const int ncat = data.n_categories[feature];
    if (ncat > 0) {
        best.categorical = true;
        long cnt[32] = {0}, pos[32] = {0};
        for (std::size_t r : idx) {
            const int c = static_cast<int>(data.at(r, feature));
            ++cnt[c];
            pos[c] += data.y[r];
        }
        // For a binary outcome, ordering categories by positive fraction and
        // scanning prefixes finds the optimal subset split.
        std::vector<int> cats;
        for (int c = 0; c < ncat && c < 32; ++c)
            if (cnt[c] > 0) cats.push_back(c);
        if (cats.size() < 2) return best;
        std::sort(cats.begin(), cats.end(), [&](int a, int b) {
            const double fa = static_cast<double>(pos[a]) / cnt[a];
            const double fb = static_cast<double>(pos[b]) / cnt[b];
            return fa < fb || (fa == fb && a < b);
        });
        long left_n = 0, left_pos = 0;
        std::uint32_t mask = 0;
        for (std::size_t i = 0; i + 1 < cats.size(); ++i) {
            mask |= 1u << cats[i];
            left_n += cnt[cats[i]];
            left_pos += pos[cats[i]];
            const long right_n = n - left_n;
            const double imp = (left_n * gini(left_pos, left_n) +
                                right_n * gini(pos_total - left_pos, right_n)) /
                               n;
            if (!best.valid || imp < best.impurity) {
                best.valid = true;
                best.impurity = imp;
                best.left_mask = mask;
            }
        }
        return best;
    }

    std::vector<std::pair<double, int>> vals;
    vals.reserve(idx.size());
    for (std::size_t r : idx) vals.emplace_back(data.at(r, feature), data.y[r]);
    std::sort(vals.begin(), vals.end());
    long left_n = 0, left_pos = 0;
    for (long i = 0; i + 1 < n; ++i) {
        ++left_n;
        left_pos += vals[i].second;
        if (vals[i].first == vals[i + 1].first) continue;
        const long right_n = n - left_n;
        const double imp =
            (left_n * gini(left_pos, left_n) + right_n * gini(pos_total - left_pos, right_n)) / n;
        if (!best.valid || imp < best.impurity) {
            best.valid = true;
            best.impurity = imp;
            best.threshold = (vals[i].first + vals[i + 1].first) / 2.0;
        }
    }
    return best;
}

void grow_node(Tree& tree, const Dataset& data, std::vector<std::size_t> idx,
               const ForestConfig& config, std::mt19937_64& rng, int node_index) {
    const long n = static_cast<long>(idx.size());
    long pos = 0;
    for (std::size_t r : idx) pos += data.y[r];

    auto make_leaf = [&]() {
        tree.nodes[node_index].feature = -1;
        tree.nodes[node_index].leaf_fraction = n ? static_cast<double>(pos) / n : 0.0;
    };
    if (pos == 0 || pos == n || n < 2 * config.min_leaf || n < 2) {
        make_leaf();
        return;
    }

    // Sample mtry features without replacement.
    std::vector<int> feats(data.cols);
    std::iota(feats.begin(), feats.end(), 0);
    const int mtry = std::min<int>(config.mtry, static_cast<int>(data.cols));
    for (int i = 0; i < mtry; ++i) {
        std::uniform_int_distribution<int> pick(i, static_cast<int>(data.cols) - 1);
        std::swap(feats[i], feats[pick(rng)]);
    }

    SplitChoice best;
    const double parent_imp = gini(pos, n);
    for (int i = 0; i < mtry; ++i) {
        SplitChoice c = best_split_on_feature(data, idx, feats[i]);
        if (c.valid && c.impurity < parent_imp - 1e-12 &&
            (!best.valid || c.impurity < best.impurity)) {
            best = c;
        }
    }
    if (!best.valid) {
        make_leaf();
        return;
    }

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t r : idx) {
        bool go_left;
        if (best.categorical) {
            const int code = static_cast<int>(data.at(r, best.feature));
            go_left = (best.left_mask >> code) & 1u;
        } else {
            go_left = data.at(r, best.feature) < best.threshold;
        }
        (go_left ? left_idx : right_idx).push_back(r);
    }
    if (left_idx.empty() || right_idx.empty()) {
        make_leaf();
        return;
    }
    idx.clear();
    idx.shrink_to_fit();

    const int left = static_cast<int>(tree.nodes.size());
    const int right = left + 1;
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode& nd = tree.nodes[node_index];
    nd.feature = best.feature;
    nd.categorical = best.categorical;
    nd.threshold = best.threshold;
    nd.left_mask = best.left_mask;
    nd.left = left;
    nd.right = right;
    grow_node(tree, data, std::move(left_idx), config, rng, left);
    grow_node(tree, data, std::move(right_idx), config, rng, right);
}

}  // namespace

Forest Forest::train(const Dataset& data, const std::vector<std::size_t>& rows,
                     const ForestConfig& config) {
    Forest f;
    f.config_ = config;
    f.n_categories_ = data.n_categories;
    if (rows.empty()) throw NumericalError("forest: empty training set");

    long pos = 0;
    for (std::size_t r : rows) pos += data.y[r];
    if (pos == 0 || pos == static_cast<long>(rows.size())) {
        // Constant labels: a single-leaf forest returning the constant fraction.
        f.constant_labels_ = true;
        Tree t;
        t.nodes.push_back(TreeNode{});
        t.nodes[0].leaf_fraction = pos ? 1.0 : 0.0;
        f.trees_.assign(1, std::move(t));
        return f;
    }

    f.trees_.resize(config.n_trees);
    std::vector<double> oob_sum(rows.size(), 0.0);
    std::vector<int> oob_cnt(rows.size(), 0);

    for (int ti = 0; ti < config.n_trees; ++ti) {
        auto rng = rng::make_engine(config.seed, rng::kSaltTree, static_cast<std::uint64_t>(ti));
        std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
        std::vector<std::size_t> boot(rows.size());
        std::vector<char> in_bag(rows.size(), 0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::size_t j = pick(rng);
            boot[i] = rows[j];
            in_bag[j] = 1;
        }
        Tree& tree = f.trees_[ti];
        tree.nodes.emplace_back();
        grow_node(tree, data, std::move(boot), config, rng, 0);

        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (in_bag[i]) continue;
            oob_sum[i] += tree.predict(data.row(rows[i]));
            oob_cnt[i] += 1;
        }
    }

    long err = 0, counted = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (oob_cnt[i] == 0) continue;
        const int pred = oob_sum[i] / oob_cnt[i] >= 0.5 ? 1 : 0;
        err += pred != data.y[rows[i]];
        ++counted;
    }
    f.oob_error_ = counted ? static_cast<double>(err) / counted : 0.0;
    return f;
}

double Forest::predict_row(const double* x) const {
    double sum = 0.0;
    for (const Tree& t : trees_) sum += t.predict(x);
    return sum / static_cast<double>(trees_.size());
}

std::vector<double> Forest::predict(const Dataset& data, const std::vector<std::size_t>& rows) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) out.push_back(predict_row(data.row(r)));
    return out;
}

std::string Forest::to_json() const {
    json trees = json::array();
    for (const Tree& t : trees_) {
        json nodes = json::array();
        for (const TreeNode& n : t.nodes) {
            nodes.push_back(json::array({n.feature, n.categorical ? 1 : 0, n.threshold,
                                         n.left_mask, n.left, n.right, n.leaf_fraction}));
        }
        trees.push_back(std::move(nodes));
    }
    json j{{"v", "forest-v1"},
           {"seed", config_.seed},
           {"mtry", config_.mtry},
           {"n_trees", config_.n_trees},
           {"min_leaf", config_.min_leaf},
           {"oob_error", oob_error_},
           {"constant_labels", constant_labels_},
           {"n_categories", n_categories_},
           {"trees", std::move(trees)}};
    return j.dump();
}

Forest Forest::from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("v", "") != "forest-v1")
        throw SchemaError("model artifact: unknown schema version '" + j.value("v", "") +
                          "', expected 'forest-v1'");
    Forest f;
    f.config_.seed = j.at("seed").get<std::uint64_t>();
    f.config_.mtry = j.at("mtry").get<int>();
    f.config_.n_trees = j.at("n_trees").get<int>();
    f.config_.min_leaf = j.at("min_leaf").get<int>();
    f.oob_error_ = j.at("oob_error").get<double>();
    f.constant_labels_ = j.at("constant_labels").get<bool>();
    f.n_categories_ = j.at("n_categories").get<std::vector<int>>();
    for (const json& jt : j.at("trees")) {
        Tree t;
        for (const json& jn : jt) {
            TreeNode n;
            n.feature = jn[0].get<int>();
            n.categorical = jn[1].get<int>() != 0;
            n.threshold = jn[2].get<double>();
            n.left_mask = jn[3].get<std::uint32_t>();
            n.left = jn[4].get<int>();
            n.right = jn[5].get<int>();
            n.leaf_fraction = jn[6].get<double>();
            t.nodes.push_back(n);
        }
        f.trees_.push_back(std::move(t));
    }
    return f;
}

}  // namespace passprob::model
