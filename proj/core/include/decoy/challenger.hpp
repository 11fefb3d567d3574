#pragma once

#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "decoy/model.hpp"
#include "decoy/types.hpp"

namespace decoy {

using ProbQuery = std::function<double(const Post&)>;

struct SelectionVector {
    std::vector<int> w;
    int K = 0;
};

struct ChallengerState {
    ChallengerMode mode = ChallengerMode::None;
    std::vector<Post> pool;  // ascending id; volunteered posts not yet spent
    ClassifierParams phi;    // D2 only
    int B_con = 200;
    std::unordered_set<PostId> queried_ids;  // every id ever sent to the adversary
    TrainHyper hyper;
    double rejection_M = 7.389056098930650;
    ScenarioSpec scenario;  // density ratio source for Rejection mode
    std::uint64_t master_seed = 1;
};

ChallengerState make_challenger(const GameConfig& config);

void add_volunteered(ChallengerState& state, const std::vector<Post>& posts);

/// V(w) = sum_i -w_i log(1 - probs_i), probabilities clamped. Rejects w that
/// is non-binary or whose popcount differs from K.
double objective_V(const SelectionVector& sel, const std::vector<double>& probs);

/// Uniform K-subset without replacement; clamps to the whole pool when
/// K > |pool| (sets *exhausted).
std::vector<Post> select_random(const std::vector<Post>& pool, int K,
                                std::uint64_t seed, bool* exhausted = nullptr);

/// The K pool posts with the highest queried probability; ties broken by
/// ascending id.
std::vector<Post> select_oracle(const std::vector<Post>& pool, int K,
                                const ProbQuery& prob_query,
                                bool* exhausted = nullptr);

/// V~(phi) = sum_i alpha_i * (-log(1 - probs_i)) with alpha = softmax of
/// g(x; phi) over the whole train pool (max-subtracted).
double d2_loss(const ClassifierParams& phi, const std::vector<Post>& train_pool,
               const std::vector<double>& probs);

struct D2TrainResult {
    ClassifierParams phi;
    double initial_value = 0.0;
    double final_value = 0.0;
};

/// Full-batch gradient ascent on d2_loss (the softmax couples the whole
/// train pool, so mini-batching would bias alpha). Keeps the best iterate,
/// so the returned value never drops below the starting value.
D2TrainResult train_d2(const ClassifierParams& phi,
                       const std::vector<Post>& train_pool,
                       const std::vector<double>& probs,
                       const TrainHyper& hyper, std::uint64_t seed);

struct SelectionOutcome {
    std::vector<Post> decoys;
    std::vector<PostId> queried;  // ids queried this interval (D2 only)
    bool pool_exhausted = false;
};

/// Alg.-2 monitored-access strategy: sample a train split (<= B_con, at most
/// half the pool), query the adversary on it, ascend phi, then take the top-K
/// of the untouched candidates by g. Candidates exclude every id ever
/// queried, so decoys and queries never intersect. Selected decoys leave the
/// pool.
SelectionOutcome select_d2(ChallengerState& state, int K,
                           const ProbQuery& prob_query, std::uint64_t seed);

/// Accept-reject over the pool against the scenario's class-1/class-0
/// density ratio; acceptance probability is clamped at 1 (game-facing
/// convenience, unlike the strict sampler in datagen).
std::vector<Post> select_rejection(const std::vector<Post>& pool, int K,
                                   const ScenarioSpec& scenario, double M,
                                   std::uint64_t seed,
                                   bool* exhausted = nullptr);

struct BruteForceResult {
    std::vector<int> w;
    double value = 0.0;
};

/// Exhaustive max of objective_V over all K-hot vectors; N <= 20, K <= 5.
/// Ties keep the lexicographically smallest w.
BruteForceResult brute_force_discrete_optimum(const std::vector<double>& probs,
                                              int K);

/// Mode dispatcher used by the game loop: selects decoys, logs queries,
/// removes the selection from the pool.
SelectionOutcome challenger_select(ChallengerState& state, int K,
                                   const ProbQuery& prob_query,
                                   std::uint64_t seed);

}  // namespace decoy
