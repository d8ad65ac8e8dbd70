#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace passprob::calibration {

enum class Mode { FrameGeneral, FramePredicted, PlayGeneral, PlayPredicted };

const char* mode_name(Mode m);

struct Row {
    std::int64_t play_key = 0;
    double probability = 0.0;  // predicted completion probability
    int outcome = 0;           // 1 = completed pass
};

struct BinPoint {
    double mean_probability = 0.0;
    double observed_fraction = 0.0;
    long count = 0;
};

struct Report {
    Mode mode = Mode::FrameGeneral;
    std::vector<BinPoint> points;
    long dropped_bins = 0;  // empty bins
    double pearson = 0.0;
    double lin_concordance = 0.0;
};

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

// Lin's concordance: 2 cov / (var_x + var_y + (mean_x - mean_y)^2).
double lin_concordance(const std::vector<double>& x, const std::vector<double>& y);

// Per-play modes average each play's frame probabilities before binning.
Report calibrate(const std::vector<Row>& rows, Mode mode, int bins = 50);

void write_calibration_csv(std::ostream& out, const std::vector<Report>& reports);
std::string summary_json(const std::vector<Report>& reports);

}  // namespace passprob::calibration
