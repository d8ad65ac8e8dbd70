#include "passprob/completion.hpp"

#include <ostream>

#include "passprob/csv.hpp"
#include "passprob/errors.hpp"

namespace passprob::completion {

FrameCompletion total_completion(const target::Posterior& posterior,
                                 const std::vector<double>& conditionals) {
    if (posterior.p.size() != conditionals.size())
        throw NumericalError("total_completion: candidate-set mismatch between posterior and conditionals");
    FrameCompletion fc;
    fc.game_id = posterior.game_id;
    fc.play_id = posterior.play_id;
    fc.frame_index = posterior.frame_index;
    fc.t = posterior.t;
    fc.candidate_ids = posterior.candidate_ids;
    fc.p_target = posterior.p;
    fc.p_complete_given_target = conditionals;
    fc.predicted = posterior.predicted;
    double total = 0.0;
    for (std::size_t i = 0; i < conditionals.size(); ++i)
        total += posterior.p[i] * conditionals[i];
    fc.p_complete = total;
    fc.p_complete_given_predicted = conditionals[posterior.predicted];
    return fc;
}

double threshold_accuracy(const std::vector<double>& probabilities,
                          const std::vector<int>& outcomes, double threshold) {
    if (probabilities.empty()) return 0.0;
    long ok = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i)
        ok += (probabilities[i] >= threshold) == (outcomes[i] == 1);
    return static_cast<double>(ok) / probabilities.size();
}

void write_frame_completion_csv(std::ostream& out, const std::vector<FrameCompletion>& rows) {
    out << "game_id,play_id,frame_index,t,candidate_id,p_target,p_complete_given_target,"
           "p_complete,predicted_flag,p_complete_given_predicted\n";
    for (const auto& fc : rows) {
        for (std::size_t i = 0; i < fc.candidate_ids.size(); ++i) {
            out << fc.game_id << ',' << fc.play_id << ',' << fc.frame_index << ',' << fc.t << ','
                << fc.candidate_ids[i] << ',' << csv::fmt(fc.p_target[i]) << ','
                << csv::fmt(fc.p_complete_given_target[i]) << ',' << csv::fmt(fc.p_complete) << ','
                << (i == fc.predicted ? 1 : 0) << ',' << csv::fmt(fc.p_complete_given_predicted)
                << '\n';
        }
    }
}

}  // namespace passprob::completion
