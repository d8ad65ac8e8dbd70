#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "passprob/types.hpp"

namespace passprob::ingest {

struct Paths {
    std::string games;
    std::string players;
    std::string plays;
    std::vector<std::string> tracking;  // one or more week files
};

// Exclusion reason codes; every dropped play is attributed to exactly one.
namespace reason {
inline constexpr const char* kSack = "sack";
inline constexpr const char* kPenalty = "penalty";
inline constexpr const char* kSpike = "spike";
inline constexpr const char* kThrowaway = "throwaway";
inline constexpr const char* kMissingFormation = "missing_formation";
inline constexpr const char* kNoBallTracking = "no_ball_tracking";
inline constexpr const char* kNoPassForward = "no_pass_forward_event";
inline constexpr const char* kNoOutcome = "no_outcome_event";
inline constexpr const char* kEmptyWindow = "empty_window";
inline constexpr const char* kUnresolvableTarget = "unresolvable_target";
inline constexpr const char* kNoCandidates = "no_candidates";
inline constexpr const char* kNoPlayRecord = "no_play_record";
inline constexpr const char* kBadOutcomeCode = "bad_outcome_code";
}  // namespace reason

struct IngestReport {
    std::map<std::string, long> excluded;  // reason -> count
    long retained = 0;
    long rows_skipped = 0;   // unparseable tracking rows
    int max_window_len = 0;

    std::string to_json() const;
    static IngestReport from_json(const std::string& text);
};

struct Corpus {
    std::vector<Play> plays;
    IngestReport report;
};

// --- building blocks (unit-testable) -----------------------------------

// Orientation normalization for left-moving plays; an involution.
inline geom::Point2 flip_point(geom::Point2 p) {
    return {kFieldLengthYd - p.x, kFieldWidthYd - p.y};
}

// Abbreviated roster form, e.g. "Julio Jones" -> "J.Jones".
std::string abbreviate_name(const std::string& display_name);

// Extracts the target's abbreviated name from a play description, or nullopt
// when the description names no target (common for incompletes).
std::optional<std::string> parse_target_name(const std::string& description);

// Extracts the passer's abbreviated name ("M.Ryan pass short right to ...").
std::optional<std::string> parse_passer_name(const std::string& description);

// True when two abbreviated-name spellings refer to the same player.
bool names_match(const std::string& abbrev, const std::string& display_name);

// Resolves the target: description name first, otherwise the candidate
// closest to the ball at the outcome frame. nullopt when no candidate exists.
std::optional<EntityId> resolve_target(const PlayRecord& record,
                                       const std::vector<TrackingFrame>& frames,
                                       int outcome_frame_index);

// Frame window strictly between the pass-forward and outcome events, with
// leading frames trimmed while the ball is not yet moving forward in x.
// Returns [first,last] frame indices, or an exclusion reason.
struct WindowResult {
    int first = 0, last = 0;
    std::string error;  // empty on success; else a reason code
};
WindowResult window_pass_frames(const std::vector<TrackingFrame>& frames);

// Filtering verdict from play-level fields; nullopt = keep.
std::optional<std::string> filter_reason(const std::string& pass_result,
                                         const std::string& penalty_codes,
                                         const std::string& offense_formation,
                                         const std::string& description);

// --- whole pipeline -----------------------------------------------------

Corpus load_and_normalize(const Paths& paths);

// Canonical play store, newline-delimited JSON, one play per line.
void save_store(std::ostream& out, const std::vector<Play>& plays);
std::vector<Play> load_store(std::istream& in);

void save_store_file(const std::string& path, const Corpus& corpus,
                     const std::string& report_path);
Corpus load_store_file(const std::string& path, const std::string& report_path = "");

}  // namespace passprob::ingest
