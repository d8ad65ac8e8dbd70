#include "passprob/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include <json.hpp>

#include "passprob/csv.hpp"
#include "passprob/errors.hpp"

namespace passprob::calibration {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::FrameGeneral: return "frame_general";
        case Mode::FramePredicted: return "frame_predicted";
        case Mode::PlayGeneral: return "play_general";
        case Mode::PlayPredicted: return "play_predicted";
    }
    return "?";
}

namespace {

struct Moments {
    double mean_x = 0, mean_y = 0, var_x = 0, var_y = 0, cov = 0;
};

Moments moments(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty())
        throw NumericalError("correlation: need equal-length non-empty vectors");
    const double n = static_cast<double>(x.size());
    Moments m;
    for (std::size_t i = 0; i < x.size(); ++i) {
        m.mean_x += x[i];
        m.mean_y += y[i];
    }
    m.mean_x /= n;
    m.mean_y /= n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - m.mean_x, dy = y[i] - m.mean_y;
        m.var_x += dx * dx;
        m.var_y += dy * dy;
        m.cov += dx * dy;
    }
    m.var_x /= n;
    m.var_y /= n;
    m.cov /= n;
    return m;
}

}  // namespace

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    const Moments m = moments(x, y);
    const double denom = std::sqrt(m.var_x * m.var_y);
    return denom > 0 ? m.cov / denom : 0.0;
}

double lin_concordance(const std::vector<double>& x, const std::vector<double>& y) {
    const Moments m = moments(x, y);
    const double shift = (m.mean_x - m.mean_y) * (m.mean_x - m.mean_y);
    const double denom = m.var_x + m.var_y + shift;
    return denom > 0 ? 2.0 * m.cov / denom : 0.0;
}

Report calibrate(const std::vector<Row>& rows, Mode mode, int bins) {
    Report report;
    report.mode = mode;

    std::vector<Row> working;
    if (mode == Mode::PlayGeneral || mode == Mode::PlayPredicted) {
        std::map<std::int64_t, std::pair<double, long>> acc;  // sum, count
        std::map<std::int64_t, int> outcome;
        for (const Row& r : rows) {
            auto& a = acc[r.play_key];
            a.first += r.probability;
            a.second += 1;
            outcome[r.play_key] = r.outcome;
        }
        for (const auto& [key, a] : acc)
            working.push_back({key, a.first / a.second, outcome[key]});
    } else {
        working = rows;
    }

    std::vector<double> sum_p(bins, 0.0), sum_y(bins, 0.0);
    std::vector<long> count(bins, 0);
    for (const Row& r : working) {
        int b = static_cast<int>(r.probability * bins);
        b = std::clamp(b, 0, bins - 1);
        sum_p[b] += r.probability;
        sum_y[b] += r.outcome;
        count[b] += 1;
    }
    std::vector<double> xs, ys;
    for (int b = 0; b < bins; ++b) {
        if (count[b] == 0) {
            report.dropped_bins++;
            continue;
        }
        BinPoint pt;
        pt.mean_probability = sum_p[b] / count[b];
        pt.observed_fraction = sum_y[b] / count[b];
        pt.count = count[b];
        xs.push_back(pt.mean_probability);
        ys.push_back(pt.observed_fraction);
        report.points.push_back(pt);
    }
    if (xs.size() >= 2) {
        report.pearson = pearson_correlation(xs, ys);
        report.lin_concordance = lin_concordance(xs, ys);
    }
    return report;
}

void write_calibration_csv(std::ostream& out, const std::vector<Report>& reports) {
    out << "mode,mean_probability,observed_fraction,count\n";
    for (const auto& rep : reports) {
        for (const auto& pt : rep.points)
            out << mode_name(rep.mode) << ',' << csv::fmt(pt.mean_probability) << ','
                << csv::fmt(pt.observed_fraction) << ',' << pt.count << '\n';
    }
}

std::string summary_json(const std::vector<Report>& reports) {
    nlohmann::json j;
    for (const auto& rep : reports) {
        j[mode_name(rep.mode)] = {{"pearson", rep.pearson},
                                  {"lin_concordance", rep.lin_concordance},
                                  {"bins", rep.points.size()},
                                  {"dropped_bins", rep.dropped_bins}};
    }
    return j.dump(2);
}

}  // namespace passprob::calibration
