#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace decoy {

using PostId = std::uint64_t;

enum class Origin {
    UserDeletedDamaging,
    UserDeletedNonDamaging,
    Volunteered,
    Decoy,
};

enum class Scenario {
    NonOverlapping,    // two moons, disjoint supports
    FullyOverlapping,  // two Gaussians, identical support
    PartialOverlap,    // Gaussian mixtures with a shared component
};

enum class AdversaryMode { Random, Static, Adaptive };

enum class ChallengerMode {
    None,
    Random,
    Oracle,
    D2,
    Rejection,  // idealized accept-reject selector (fully-overlapping regime)
};

const char* to_string(Origin o);
const char* to_string(Scenario s);
const char* to_string(AdversaryMode m);
const char* to_string(ChallengerMode m);
Scenario scenario_from_string(const std::string& s);
AdversaryMode adversary_mode_from_string(const std::string& s);
ChallengerMode challenger_mode_from_string(const std::string& s);

// One item in the stream. Identity is the integer id: equality and set
// membership use the id only, so feature perturbation cannot duplicate posts.
struct Post {
    PostId id = 0;
    std::vector<double> features;
    int true_label = 0;  // 1 = damaging, 0 = non-damaging
    Origin origin = Origin::Volunteered;
    int interval_created = 1;
    std::optional<int> interval_deleted;

    bool operator==(const Post& other) const { return id == other.id; }
};

/// Checks the per-post invariants (label/origin consistency, interval order).
void validate_post(const Post& p);

struct TrainHyper {
    double learning_rate = 0.05;
    int epochs = 60;
    int batch_size = 16;
    bool balance_batches = true;
};

// Scenario distribution parameters. d = 2 by default so decision-boundary
// dumps stay possible; the Gaussian regimes accept any dimension.
struct ScenarioSpec {
    Scenario scenario = Scenario::PartialOverlap;
    int d = 2;

    // NonOverlapping (two moons)
    double moon_noise = 0.1;

    // FullyOverlapping (two Gaussians)
    std::vector<double> mean0{0.0, 0.0};
    std::vector<double> mean1{0.6, 0.6};
    double sigma = 1.0;

    // PartialOverlap (mixtures sharing one component).
    // class 0 = (1-q0) N(mu_a, s^2 I) + q0 N(mu_shared, s^2 I)
    // class 1 = (1-q1) N(mu_b, s^2 I) + q1 N(mu_shared, s^2 I)
    std::vector<double> mu_a{-4.0, 0.0};
    std::vector<double> mu_b{4.0, 0.0};
    std::vector<double> mu_shared{0.0, 4.0};
    double overlap0 = 0.1;  // shared-component weight in class 0
    double overlap1 = 0.6;  // shared-component weight in class 1
    double mix_sigma = 0.7;
};

// Per-interval stream counts; either one constant triple or per-interval
// lists of length T.
struct StreamPlan {
    int T = 10;
    int n_damaging = 20;
    int n_nondamaging = 28;
    int n_volunteered = 500;
    std::vector<int> damaging_per_interval;     // optional, length T
    std::vector<int> nondamaging_per_interval;  // optional, length T
    std::vector<int> volunteered_per_interval;  // optional, length T
    std::uint64_t seed = 1;

    int damaging_at(int t) const;     // t is 1-based
    int nondamaging_at(int t) const;
    int volunteered_at(int t) const;
};

// All game parameters.
struct GameConfig {
    int T = 10;
    int d = 2;
    int k = 1;        // decoys per damaging deletion; K_t = k * |D_t^+|
    int p = 40;       // adversary sample size per interval
    int B_static = 40;
    int B_adapt = 40;
    int B_con = 200;  // challenger query budget per interval
    double label_noise_eta = 0.0;
    AdversaryMode adversary_mode = AdversaryMode::Adaptive;
    ChallengerMode challenger_mode = ChallengerMode::None;
    bool monitored_flag = false;
    double decision_threshold = 0.5;
    double prior_positive = 0.42;
    bool random_estimate_prior = false;
    bool fresh_restart = false;  // default: warm-start from previous params
    double rejection_M = 7.389056098930650;  // e^2; envelope for Rejection mode

    ScenarioSpec scenario;
    int n_damaging = 20;
    int n_nondamaging = 28;
    int n_volunteered = 500;

    TrainHyper hyper;
    std::vector<int> hidden_widths{16, 16};

    std::uint64_t seed = 1;

    /// Static-adversary training horizon: tau = floor(B_static / p).
    int tau() const {
        if (p <= 0) return 0;
        return B_static / p;
    }

    /// Throws std::invalid_argument when counts/budgets are malformed.
    void validate() const;
};

struct Metrics {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long tn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

// Per-interval bookkeeping. deleted = user deletions plus injected decoys
// (D_t^delta); damaging = D_t^+; volunteered_new = D_t^v; decoys_injected =
// G_t^*; adversary_train_sample = A_t^delta.
struct IntervalLedger {
    int t = 1;
    std::vector<Post> deleted;
    std::vector<Post> damaging;
    std::vector<Post> volunteered_new;
    std::vector<Post> decoys_injected;
    std::vector<Post> adversary_train_sample;
};

/// Checks the subset/disjointness invariants; throws std::logic_error.
void validate_ledger(const IntervalLedger& ledger);

}  // namespace decoy
