#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "passprob/completion.hpp"
#include "passprob/types.hpp"

namespace passprob::render {

struct OverlayRecord {
    int frame_index = 0;
    EntityId entity_id = 0;
    std::string display_name;
    int jersey = 0;
    TeamSide side = TeamSide::Ball;
    double x = 0.0, y = 0.0;
    double p_complete = 0.0;
    int predicted_jersey = 0;
    double p_complete_given_predicted = 0.0;
};

// Flattens one frame of tracking positions plus its completion summary into
// per-entity overlay rows.
std::vector<OverlayRecord> overlay_frame(const TrackingFrame& frame,
                                         const completion::FrameCompletion& fc);

void write_overlay_csv(std::ostream& out, const std::vector<OverlayRecord>& rows);

// Deterministic static SVG of the 120 x 53.3 yd field with offense, defense
// and ball markers plus the probability annotations for the frame.
std::string frame_svg(const TrackingFrame& frame, const completion::FrameCompletion& fc);

}  // namespace passprob::render
