#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "passprob/geometry.hpp"

namespace passprob {

using EntityId = std::int64_t;

inline constexpr double kFieldLengthYd = 120.0;
inline constexpr double kFieldWidthYd = 53.3;

enum class TeamSide { Offense, Defense, Ball };

enum class Outcome { Complete, Incomplete, Intercepted };

// For modeling, interceptions count as incomplete passes.
inline bool is_complete(Outcome o) { return o == Outcome::Complete; }

struct Entity {
    EntityId id = 0;  // 0 for the ball
    std::string display_name;
    int jersey = -1;
    std::string position;  // position group code (QB, WR, ..., empty for ball)
    TeamSide side = TeamSide::Offense;
    double x = 0.0;
    double y = 0.0;

    geom::Point2 point() const { return {x, y}; }
};

struct TrackingFrame {
    std::int64_t game_id = 0;
    std::int64_t play_id = 0;
    int frame_index = 0;
    std::string event;  // empty when no tagged detail
    std::vector<Entity> entities;

    const Entity* ball() const {
        for (const auto& e : entities)
            if (e.side == TeamSide::Ball) return &e;
        return nullptr;
    }
    const Entity* find(EntityId id) const {
        for (const auto& e : entities)
            if (e.id == id && e.side != TeamSide::Ball) return &e;
        return nullptr;
    }
};

struct PlayRecord {
    std::int64_t game_id = 0;
    std::int64_t play_id = 0;
    int quarter = 1;       // 1..5, 5 = overtime
    int down = 1;          // 1..4
    double yards_to_go = 10.0;
    std::string offense_formation;
    double defenders_in_box = 0.0;
    double pass_rushers = 0.0;
    std::string dropback_type;
    double clock_seconds = 0.0;  // seconds remaining in the quarter
    double yardline = 50.0;      // 1..99 from the offense's own goal line
    double offense_score = 0.0;
    double defense_score = 0.0;
    bool offense_is_home = false;
    Outcome outcome = Outcome::Incomplete;
    EntityId passer_id = 0;
    EntityId target_id = 0;
    std::vector<EntityId> candidates;
    int window_first = 0;  // first/last frame index of the airborne-pass window
    int window_last = 0;
    std::string description;
};

struct Play {
    PlayRecord record;
    std::vector<TrackingFrame> frames;  // full play, ordered by frame_index

    const TrackingFrame* frame_at(int frame_index) const {
        for (const auto& f : frames)
            if (f.frame_index == frame_index) return &f;
        return nullptr;
    }
    // Number of airborne frames; the within-play counter t runs 1..window_len().
    int window_len() const { return record.window_last - record.window_first + 1; }
};

}  // namespace passprob
