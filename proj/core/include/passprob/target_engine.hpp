#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "passprob/types.hpp"

namespace passprob::target {

// Per-frame, per-candidate distance measures:
//   d1  distance to the ball's motion line (floored at 0.01)
//   d3  frame-over-frame change in player-ball distance
//   d2  standardised d3, >= 1 within each frame column
//   d4  Euclidean player-ball distance
struct FrameDistances {
    std::int64_t game_id = 0;
    std::int64_t play_id = 0;
    int frame_index = 0;
    int t = 0;  // within-play frame counter, 1-based
    std::vector<EntityId> candidate_ids;
    std::vector<double> d1, d2, d3, d4;

    std::size_t size() const { return candidate_ids.size(); }
};

struct PanelResult {
    std::vector<FrameDistances> frames;
    long dropped_frames = 0;  // no prior distinct ball position
};

inline constexpr double kLineDistanceFloor = 0.01;

// Distance panel for one play's pass window. The frame preceding the window
// supplies the previous positions for the first frame's deltas.
PanelResult build_distance_panel(const Play& play);

// Inverse-distance empirical probability: P_i = 1 / (d_i * sum_k 1/d_k).
std::vector<double> empirical_prob(const std::vector<double>& distances);

// w*p1 + (1-w)*p2 elementwise.
std::vector<double> blend(const std::vector<double>& p1, const std::vector<double>& p2, double w);

// Logistic within-play weight ramp.
struct LogisticParams {
    double midpoint = 13.34183;
    double scale = 2.57;
};
double w23(double t, const LogisticParams& params = {});

// Rank-based per-frame weight schedule: the schedule value for a frame is the
// rank fraction of d*, where d* is the value of measure `value_k` for the
// candidate minimising measure `selector_s` in that frame.
class WeightSchedule {
public:
    WeightSchedule() = default;
    WeightSchedule(int value_k, int selector_s, std::vector<double> sorted_unique);

    static WeightSchedule fit(const std::vector<FrameDistances>& corpus, int value_k, int selector_s);

    // d* for a single frame under this schedule's (k, s) configuration.
    double d_star(const FrameDistances& fd) const;

    // Rank-fraction weight; unseen values map by empirical CDF, and a
    // single-valued schedule degenerates to 0.5.
    double weight_for(double d_star_value) const;
    double weight(const FrameDistances& fd) const { return weight_for(d_star(fd)); }

    int value_k() const { return value_k_; }
    int selector_s() const { return selector_s_; }
    const std::vector<double>& unique_values() const { return unique_; }

private:
    int value_k_ = 0;
    int selector_s_ = 0;
    std::vector<double> unique_;
};

// The four fitted schedules plus the logistic blend parameters.
struct ScheduleSet {
    WeightSchedule w1;  // k=3, s=1
    WeightSchedule w2;  // k=2, s=1
    WeightSchedule w3;  // k=4, s=1
    WeightSchedule w4;  // k=4, s=2
    LogisticParams logistic;

    static ScheduleSet fit(const std::vector<FrameDistances>& corpus);

    std::string to_json() const;  // bit-exact round trip
    static ScheduleSet from_json(const std::string& text);
};

struct Posterior {
    std::int64_t game_id = 0;
    std::int64_t play_id = 0;
    int frame_index = 0;
    int t = 0;
    std::vector<EntityId> candidate_ids;
    std::vector<double> p;
    std::size_t predicted = 0;  // index into candidate_ids
};

// Which mixing rule produces the posterior.
enum class Scheme { EqualWeights, W1, W2, W3, W4, Final };

// Posterior for one frame under a scheme (Final = logistic blend of the
// W2- and W3-weighted mixes). W4 enters inverted, as f(1 - W4).
Posterior target_posterior(const FrameDistances& fd, const ScheduleSet& schedules, Scheme scheme);

// Transfers mass to a candidate within 2 yards of both the ball line and the
// ball itself; with several such candidates the non-qualifiers' mass goes to
// the qualifier with the highest probability. Idempotent.
Posterior proximity_adjust(const Posterior& posterior, const FrameDistances& fd);

// Argmax with deterministic tie-breaks: smaller d4, then smaller entity id.
std::size_t predicted_index(const std::vector<double>& p, const FrameDistances& fd);

struct AccuracyRow {
    std::string scheme;
    double before_adjust = 0.0;
    double after_adjust = 0.0;
    long frames = 0;
};

struct AccuracyCurves {
    // index n-1 holds accuracy over the first / last n frames of each play
    std::vector<double> first_n;
    std::vector<double> last_n;
};

struct AccuracyReport {
    std::vector<AccuracyRow> rows;
    AccuracyCurves curves;  // for the Final scheme, after adjustment
};

struct PlayPanel {
    const Play* play = nullptr;
    std::vector<FrameDistances> frames;
};

AccuracyReport evaluate_target_accuracy(const std::vector<PlayPanel>& panels,
                                        const ScheduleSet& schedules,
                                        int max_n = 46);

// Grid search for the logistic scale maximising Final-scheme accuracy.
double refit_w23_scale(const std::vector<PlayPanel>& panels, ScheduleSet schedules,
                       double lo = 0.5, double hi = 5.0, double step = 0.01);

// Posterior CSV export (game_id, play_id, frame_index, t, candidate_id,
// p_target, predicted_flag).
void write_posterior_csv(std::ostream& out, const std::vector<Posterior>& posteriors);

}  // namespace passprob::target
