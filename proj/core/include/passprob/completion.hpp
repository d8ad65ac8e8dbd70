#pragma once

#include <iosfwd>
#include <vector>

#include "passprob/target_engine.hpp"

namespace passprob::completion {

struct FrameCompletion {
    std::int64_t game_id = 0;
    std::int64_t play_id = 0;
    int frame_index = 0;
    int t = 0;
    std::vector<EntityId> candidate_ids;
    std::vector<double> p_target;
    std::vector<double> p_complete_given_target;
    double p_complete = 0.0;  // law of total probability
    std::size_t predicted = 0;
    double p_complete_given_predicted = 0.0;
};

// P(C) = sum_i P(C | T=i) P(T=i).
FrameCompletion total_completion(const target::Posterior& posterior,
                                 const std::vector<double>& conditionals);

// Ordered per-frame series for one play's pass window.
struct PlaySeries {
    std::int64_t game_id = 0;
    std::int64_t play_id = 0;
    std::vector<FrameCompletion> frames;
};

// Fraction of rows where (probability >= threshold) matches a completed
// outcome; probability exactly at the threshold counts as predicted complete.
double threshold_accuracy(const std::vector<double>& probabilities,
                          const std::vector<int>& outcomes, double threshold = 0.5);

void write_frame_completion_csv(std::ostream& out, const std::vector<FrameCompletion>& rows);

}  // namespace passprob::completion
