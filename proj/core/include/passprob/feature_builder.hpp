#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "passprob/target_engine.hpp"
#include "passprob/types.hpp"

namespace passprob::features {

inline constexpr const char* kSchemaVersion = "fmx-v1";
inline constexpr std::size_t kNumPredictors = 32;

struct ColumnSpec {
    std::string name;
    std::vector<std::string> categories;  // empty for numeric columns
    bool is_categorical() const { return !categories.empty(); }
};

// The fixed 32-column predictor schema; column order is part of the contract.
const std::vector<ColumnSpec>& schema();

// Category code for a label within a categorical column, -1 if unknown.
int category_code(const ColumnSpec& col, const std::string& label);

// Five-level position groups used by the player-position predictors.
std::string offense_position_group(const std::string& raw);
std::string defense_position_group(const std::string& raw);

struct FeatureRow {
    std::int64_t game_id = 0;
    std::int64_t play_id = 0;
    int frame_index = 0;
    int t = 0;
    EntityId candidate_id = 0;
    double label = 0.0;  // 1 = completed pass
    std::array<double, kNumPredictors> x{};  // categorical cells hold codes
};

class IncompleteRowError : public std::runtime_error {
public:
    explicit IncompleteRowError(const std::string& missing_field)
        : std::runtime_error("feature row incomplete: missing " + missing_field) {}
};

// Closest defender = minimiser of point-to-line distance to the candidate's
// motion line; second = minimiser of Euclidean distance (next-smallest when
// both pick the same player). Null when fewer than two defenders are tracked.
struct DefenderPair {
    const Entity* closest = nullptr;
    const Entity* second = nullptr;
};
DefenderPair assign_defenders(const TrackingFrame& frame, const TrackingFrame& prev_frame,
                              EntityId candidate_id);

// One fully populated row for (frame, candidate-as-target).
// `panel_index` selects the candidate within the panel frame.
FeatureRow build_features(const Play& play, const TrackingFrame& frame,
                          const TrackingFrame& prev_frame, const target::FrameDistances& fd,
                          std::size_t panel_index);

struct BuildStats {
    long rows = 0;
    long skipped = 0;  // incomplete rows (with a reason recorded once per kind)
    std::vector<std::string> skip_reasons;
};

// Training rows: one per frame, for the resolved true target only.
std::vector<FeatureRow> build_training_rows(const std::vector<target::PlayPanel>& panels,
                                            BuildStats* stats = nullptr);

// Inference rows: one per frame per candidate.
std::vector<FeatureRow> build_candidate_rows(const target::PlayPanel& panel,
                                             BuildStats* stats = nullptr);

void write_features_csv(std::ostream& out, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_features_csv(std::istream& in);

}  // namespace passprob::features
