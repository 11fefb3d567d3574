#include "decoy/types.hpp"

#include <algorithm>
#include <unordered_set>

namespace decoy {

const char* to_string(Origin o) {
    switch (o) {
        case Origin::UserDeletedDamaging: return "user_deleted_damaging";
        case Origin::UserDeletedNonDamaging: return "user_deleted_nondamaging";
        case Origin::Volunteered: return "volunteered";
        case Origin::Decoy: return "decoy";
    }
    return "?";
}

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::NonOverlapping: return "non_overlapping";
        case Scenario::FullyOverlapping: return "fully_overlapping";
        case Scenario::PartialOverlap: return "partial_overlap";
    }
    return "?";
}

const char* to_string(AdversaryMode m) {
    switch (m) {
        case AdversaryMode::Random: return "random";
        case AdversaryMode::Static: return "static";
        case AdversaryMode::Adaptive: return "adaptive";
    }
    return "?";
}

const char* to_string(ChallengerMode m) {
    switch (m) {
        case ChallengerMode::None: return "none";
        case ChallengerMode::Random: return "random";
        case ChallengerMode::Oracle: return "oracle";
        case ChallengerMode::D2: return "d2";
        case ChallengerMode::Rejection: return "rejection";
    }
    return "?";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "non_overlapping") return Scenario::NonOverlapping;
    if (s == "fully_overlapping") return Scenario::FullyOverlapping;
    if (s == "partial_overlap") return Scenario::PartialOverlap;
    throw std::invalid_argument("unknown scenario: " + s);
}

AdversaryMode adversary_mode_from_string(const std::string& s) {
    if (s == "random") return AdversaryMode::Random;
    if (s == "static") return AdversaryMode::Static;
    if (s == "adaptive") return AdversaryMode::Adaptive;
    throw std::invalid_argument("unknown adversary mode: " + s);
}

ChallengerMode challenger_mode_from_string(const std::string& s) {
    if (s == "none") return ChallengerMode::None;
    if (s == "random") return ChallengerMode::Random;
    if (s == "oracle") return ChallengerMode::Oracle;
    if (s == "d2") return ChallengerMode::D2;
    if (s == "rejection") return ChallengerMode::Rejection;
    throw std::invalid_argument("unknown challenger mode: " + s);
}

void validate_post(const Post& p) {
    if (p.true_label != 0 && p.true_label != 1)
        throw std::logic_error("post label must be 0 or 1");
    if (p.features.empty())
        throw std::logic_error("post has no features");
    if (p.origin == Origin::UserDeletedDamaging && p.true_label != 1)
        throw std::logic_error("damaging deletion must carry label 1");
    if ((p.origin == Origin::UserDeletedNonDamaging ||
         p.origin == Origin::Decoy) &&
        p.true_label != 0)
        throw std::logic_error("non-damaging/decoy post must carry label 0");
    if (p.interval_created < 1)
        throw std::logic_error("interval_created must be >= 1");
    if (p.interval_deleted && *p.interval_deleted < p.interval_created)
        throw std::logic_error("deleted before created");
}

int StreamPlan::damaging_at(int t) const {
    if (!damaging_per_interval.empty()) return damaging_per_interval.at(static_cast<size_t>(t - 1));
    return n_damaging;
}

int StreamPlan::nondamaging_at(int t) const {
    if (!nondamaging_per_interval.empty()) return nondamaging_per_interval.at(static_cast<size_t>(t - 1));
    return n_nondamaging;
}

int StreamPlan::volunteered_at(int t) const {
    if (!volunteered_per_interval.empty()) return volunteered_per_interval.at(static_cast<size_t>(t - 1));
    return n_volunteered;
}

void GameConfig::validate() const {
    if (T < 1) throw std::invalid_argument("T must be >= 1");
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    if (k < 0) throw std::invalid_argument("k must be >= 0");
    if (p < 1) throw std::invalid_argument("p must be >= 1");
    if (B_static < 0 || B_adapt < 0 || B_con < 0)
        throw std::invalid_argument("budgets must be >= 0");
    if (label_noise_eta < 0.0 || label_noise_eta > 1.0)
        throw std::invalid_argument("label_noise_eta must be in [0,1]");
    if (decision_threshold <= 0.0 || decision_threshold >= 1.0)
        throw std::invalid_argument("decision_threshold must be in (0,1)");
    if (prior_positive <= 0.0 || prior_positive >= 1.0)
        throw std::invalid_argument("prior_positive must be in (0,1)");
    if (rejection_M < 1.0)
        throw std::invalid_argument("rejection_M must be >= 1");
    if (n_damaging < 0 || n_nondamaging < 0 || n_volunteered < 0)
        throw std::invalid_argument("stream counts must be >= 0");
    if (hyper.learning_rate <= 0.0)
        throw std::invalid_argument("learning_rate must be > 0");
    if (hyper.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
    if (hyper.batch_size < 1)
        throw std::invalid_argument("batch_size must be >= 1");
    for (int w : hidden_widths)
        if (w < 1) throw std::invalid_argument("hidden widths must be >= 1");
    if (scenario.d != d)
        throw std::invalid_argument("scenario.d must match config d");
}

void validate_ledger(const IntervalLedger& ledger) {
    std::unordered_set<PostId> deleted_ids;
    for (const Post& p : ledger.deleted) deleted_ids.insert(p.id);
    if (deleted_ids.size() != ledger.deleted.size())
        throw std::logic_error("duplicate ids inside deleted set");

    for (const Post& p : ledger.damaging)
        if (!deleted_ids.count(p.id))
            throw std::logic_error("damaging post not in deleted set");
    for (const Post& p : ledger.decoys_injected)
        if (!deleted_ids.count(p.id))
            throw std::logic_error("decoy not in deleted set");
    for (const Post& p : ledger.adversary_train_sample)
        if (!deleted_ids.count(p.id))
            throw std::logic_error("adversary sample not in deleted set");

    std::unordered_set<PostId> decoy_ids;
    for (const Post& p : ledger.decoys_injected) decoy_ids.insert(p.id);
    for (const Post& p : ledger.damaging)
        if (decoy_ids.count(p.id))
            throw std::logic_error("post is both damaging and decoy");

    for (const Post& p : ledger.volunteered_new)
        if (deleted_ids.count(p.id))
            throw std::logic_error("volunteered post also marked deleted");
}

}  // namespace decoy
