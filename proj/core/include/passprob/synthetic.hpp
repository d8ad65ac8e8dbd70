#pragma once

#include <cstdint>
#include <string>

#include "passprob/ingest.hpp"

namespace passprob::synth {

struct SynthConfig {
    int n_plays = 100;
    double noise = 0.0;        // positional jitter (yards, std dev) on players
    int n_decoys = 3;
    int n_defenders = 3;
    double min_separation = 0.5;   // defender-to-receiver separation range
    double max_separation = 6.0;
    std::uint64_t seed = 1;
    bool symmetric_decoys = false;  // two candidates mirrored about the ball line
    int plays_per_game = 50;
};

// Emits games/players/plays/week1 CSV files in the tracking-table schema the
// ingest stage reads, so the whole pipeline runs without any real dataset.
// The aimed receiver is named in every play description (ground truth); a
// truth.csv (gameId,playId,targetNflId) is written alongside.
void generate(const SynthConfig& config, const std::string& out_dir);

ingest::Paths paths_for(const std::string& out_dir);

}  // namespace passprob::synth
