#include "passprob/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "passprob/errors.hpp"

namespace passprob::model {

std::vector<std::pair<double, double>> roc_points(const std::vector<double>& scores,
                                                  const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw NumericalError("roc: scores/labels length mismatch");
    long pos = std::count(labels.begin(), labels.end(), 1);
    long neg = static_cast<long>(labels.size()) - pos;
    if (pos == 0 || neg == 0)
        throw NumericalError("roc: need at least one positive and one negative label");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::vector<std::pair<double, double>> pts;
    pts.emplace_back(0.0, 0.0);
    long tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double s = scores[order[i]];
        // consume the whole tie group before emitting a vertex
        while (i < order.size() && scores[order[i]] == s) {
            if (labels[order[i]] == 1) ++tp;
            else ++fp;
            ++i;
        }
        pts.emplace_back(static_cast<double>(fp) / neg, static_cast<double>(tp) / pos);
    }
    return pts;
}

double auc_trapezoid(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw NumericalError("auc: scores/labels length mismatch");
    const long pos = std::count(labels.begin(), labels.end(), 1);
    const long neg = static_cast<long>(labels.size()) - pos;
    if (pos == 0 || neg == 0)
        throw NumericalError("auc: need at least one positive and one negative label");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    // Trapezoids over tie groups, accumulated in integer count units so the
    // single final division matches pairwise concordance (ties 1/2) exactly.
    long long twice_area = 0;  // in units of 1 / (2 * pos * neg)
    long tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double s = scores[order[i]];
        long dtp = 0, dfp = 0;
        while (i < order.size() && scores[order[i]] == s) {
            if (labels[order[i]] == 1) ++dtp;
            else ++dfp;
            ++i;
        }
        twice_area += static_cast<long long>(dfp) * (2 * tp + dtp);
        tp += dtp;
        fp += dfp;
    }
    (void)fp;
    return static_cast<double>(twice_area) / (2.0 * static_cast<double>(pos) * neg);
}

}  // namespace passprob::model
