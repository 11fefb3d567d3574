#pragma once

#include <string>
#include <vector>

#include "decoy/adversary.hpp"
#include "decoy/challenger.hpp"
#include "decoy/types.hpp"

namespace decoy {

struct IntervalRecord {
    int t = 1;
    Metrics metrics;               // on the cumulative test set
    int deleted_count = 0;         // |D_t^delta|, decoys included
    int damaging_count = 0;        // |D_t^+|
    int decoys_merged = 0;         // |G_t^*| folded into this interval
    int decoys_selected = 0;       // |G_{t+1}^*| picked during this interval
    int queried_count = 0;         // adversary queries spent this interval
    std::vector<PostId> queried_ids;  // the queried posts themselves
    long pool_size = 0;            // after the pool update and selection
    long budget_spent = 0;         // cumulative labeled posts
    bool adversary_trained = false;
    bool pool_exhausted = false;
    bool degenerate_test_set = false;
};

struct GameTrace {
    GameConfig config;
    std::vector<IntervalRecord> records;  // exactly T
    std::vector<IntervalLedger> ledgers;  // full bookkeeping, one per interval
    std::vector<std::string> notes;       // pool exhaustion, fallbacks
    ClassifierParams final_params;        // for boundary plots
};

/// Cumulative test-set metrics at interval t: every deleted post (decoys
/// included, counted as label 0) from intervals 1..t, minus every adversary
/// training sample. An empty test set yields zero metrics and sets
/// *degenerate.
Metrics evaluate_cumulative(const AdversaryState& adversary,
                            const std::vector<IntervalLedger>& ledgers, int t,
                            std::uint64_t seed, bool* degenerate = nullptr);

/// Plays the full T-interval game. Deterministic given the config; every
/// random choice runs off a sub-seed derived from config.seed, so flipping
/// the challenger mode leaves the user stream untouched.
GameTrace run_game(const GameConfig& config);

}  // namespace decoy
