#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "decoy/model.hpp"
#include "decoy/types.hpp"

namespace decoy {

struct LabeledPost {
    Post post;
    int observed_label = 0;
};

struct AdversaryState {
    AdversaryMode mode = AdversaryMode::Adaptive;
    ClassifierParams params;
    long budget_remaining = 0;  // static mode draws this down; others ignore it
    long budget_spent = 0;      // labeled posts over the whole game
    int intervals_trained = 0;
    int tau = 1;
    int p = 40;
    int B_adapt = 40;
    double label_noise_eta = 0.0;
    double prior_positive = 0.42;
    double decision_threshold = 0.5;
    bool monitored_flag = false;
    bool fresh_restart = false;
    bool random_estimate_prior = false;
    TrainHyper hyper;
    std::vector<int> hidden_widths;
    int d = 2;
    std::uint64_t master_seed = 1;
    std::unordered_set<PostId> monitored_ids;
};

AdversaryState make_adversary(const GameConfig& config);

/// Uniform sample without replacement of size min(p, |deleted|).
std::vector<Post> sample_training_set(const std::vector<Post>& deleted, int p,
                                      std::uint64_t seed);

/// Each true label independently flipped with probability eta.
std::vector<LabeledPost> acquire_labels(const std::vector<Post>& posts,
                                        double eta, std::uint64_t seed);

struct AdversaryStepOutcome {
    std::vector<Post> training_sample;  // A_t^delta, excluded from the test set
    bool trained = false;
    bool fell_back_unbalanced = false;
};

/// One interval of Alg.-1 behavior. Random mode never trains (it may spend
/// budget re-estimating its prior when configured to). Static mode trains
/// while intervals_trained < tau and budget remains; adaptive trains every
/// interval on a recurring budget. Training warm-starts from the current
/// parameters unless fresh_restart is set.
AdversaryStepOutcome adversary_step(AdversaryState& state,
                                    const std::vector<Post>& deleted,
                                    std::uint64_t seed);

struct Prediction {
    PostId id = 0;
    int predicted_label = 0;
    double probability = 0.0;
};

/// Static/adaptive: label 1 iff forward_prob >= decision_threshold (ties
/// positive). Random: labels at the prior's flag rate with
/// probability field = prior_positive. With the monitored countermeasure on,
/// posts the adversary saw being queried are auto-labeled 0.
std::vector<Prediction> classify(const AdversaryState& state,
                                 const std::vector<Post>& posts,
                                 std::uint64_t seed);

}  // namespace decoy
