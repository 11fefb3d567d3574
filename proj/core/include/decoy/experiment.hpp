#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "decoy/report.hpp"
#include "decoy/types.hpp"

namespace decoy {

struct ExperimentSpec {
    GameConfig base;
    std::vector<int> ks{1, 2, 5};
    std::vector<AdversaryMode> adversary_modes{AdversaryMode::Adaptive};
    std::vector<ChallengerMode> challenger_modes{
        ChallengerMode::None, ChallengerMode::Random, ChallengerMode::Oracle,
        ChallengerMode::D2};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::string out_dir = ".";
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;  // nonempty axes, distinct seeds
    size_t cell_count() const;
};

struct ExperimentResult {
    std::vector<std::string> cell_files;  // one CSV per grid cell
    std::string aggregate_file;
    std::vector<CsvRow> rows;             // all per-interval rows
    std::vector<AggregateRow> aggregate;
};

/// Runs the full grid (cells in parallel), writes one CSV per cell plus an
/// aggregate CSV with per-cell mean F and 95% CI across seeds.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Cell file stem, e.g. "partial_overlap_adaptive_d2_k2_seed7".
std::string cell_run_id(const GameConfig& config);

}  // namespace decoy
