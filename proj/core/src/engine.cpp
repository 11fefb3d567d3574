#include "decoy/engine.hpp"

#include <unordered_set>

#include "decoy/datagen.hpp"
#include "decoy/metrics.hpp"

namespace decoy {

Metrics evaluate_cumulative(const AdversaryState& adversary,
                            const std::vector<IntervalLedger>& ledgers, int t,
                            std::uint64_t seed, bool* degenerate) {
    if (t < 1 || t > static_cast<int>(ledgers.size()))
        throw std::invalid_argument("evaluate_cumulative: t out of range");
    std::unordered_set<PostId> sampled;
    for (int i = 0; i < t; ++i)
        for (const Post& p : ledgers[static_cast<size_t>(i)].adversary_train_sample)
            sampled.insert(p.id);

    std::vector<Post> test_set;
    for (int i = 0; i < t; ++i)
        for (const Post& p : ledgers[static_cast<size_t>(i)].deleted)
            if (!sampled.count(p.id)) test_set.push_back(p);

    if (degenerate) *degenerate = test_set.empty();
    if (test_set.empty()) return Metrics{};

    auto predictions = classify(adversary, test_set, seed);
    std::vector<int> truth(test_set.size());
    std::vector<int> predicted(test_set.size());
    for (size_t i = 0; i < test_set.size(); ++i) {
        truth[i] = test_set[i].true_label;
        predicted[i] = predictions[i].predicted_label;
    }
    return compute_metrics(truth, predicted);
}

GameTrace run_game(const GameConfig& config) {
    config.validate();

    StreamPlan plan;
    plan.T = config.T;
    plan.n_damaging = config.n_damaging;
    plan.n_nondamaging = config.n_nondamaging;
    plan.n_volunteered = config.n_volunteered;
    plan.seed = derive_seed(config.seed, "users");

    GameTrace trace;
    trace.config = config;
    trace.ledgers = build_stream(config.scenario, plan);

    AdversaryState adversary = make_adversary(config);
    ChallengerState challenger = make_challenger(config);

    std::vector<Post> pending_decoys;  // G_t^*, selected at t-1
    for (int t = 1; t <= config.T; ++t) {
        IntervalLedger& ledger = trace.ledgers[static_cast<size_t>(t - 1)];
        IntervalRecord record;
        record.t = t;

        for (const Post& d : pending_decoys) {
            Post copy = d;
            copy.origin = Origin::Decoy;
            copy.interval_deleted = t;
            ledger.deleted.push_back(copy);
            ledger.decoys_injected.push_back(copy);
        }
        record.decoys_merged = static_cast<int>(pending_decoys.size());
        pending_decoys.clear();

        auto step = adversary_step(adversary, ledger.deleted,
                                   derive_seed(config.seed, "adv_step",
                                               static_cast<std::uint64_t>(t)));
        ledger.adversary_train_sample = step.training_sample;
        record.adversary_trained = step.trained;
        if (step.fell_back_unbalanced)
            trace.notes.push_back("interval " + std::to_string(t) +
                                  ": single-class training sample, balanced "
                                  "batching fell back to unbalanced");

        add_volunteered(challenger, ledger.volunteered_new);

        // Selection runs through T-1: decoys picked at T would merge into an
        // interval that never happens.
        if (t < config.T && challenger.mode != ChallengerMode::None &&
            config.k > 0) {
            int K = config.k * static_cast<int>(ledger.damaging.size());
            ProbQuery query = [&adversary](const Post& p) {
                return forward_prob(adversary.params, p.features);
            };
            auto selection =
                challenger_select(challenger, K, query,
                                  derive_seed(config.seed, "challenger",
                                              static_cast<std::uint64_t>(t)));
            pending_decoys = selection.decoys;
            record.decoys_selected = static_cast<int>(selection.decoys.size());
            record.queried_count = static_cast<int>(selection.queried.size());
            record.queried_ids = selection.queried;
            record.pool_exhausted = selection.pool_exhausted;
            if (selection.pool_exhausted)
                trace.notes.push_back("interval " + std::to_string(t) +
                                      ": volunteer pool exhausted, selection "
                                      "clamped to " +
                                      std::to_string(selection.decoys.size()) +
                                      " of " + std::to_string(K));
            for (PostId id : selection.queried) adversary.monitored_ids.insert(id);
        }

        record.deleted_count = static_cast<int>(ledger.deleted.size());
        record.damaging_count = static_cast<int>(ledger.damaging.size());
        record.pool_size = static_cast<long>(challenger.pool.size());
        record.budget_spent = adversary.budget_spent;

        bool degenerate = false;
        record.metrics = evaluate_cumulative(
            adversary, trace.ledgers, t,
            derive_seed(config.seed, "evaluate", static_cast<std::uint64_t>(t)),
            &degenerate);
        record.degenerate_test_set = degenerate;
        if (degenerate)
            trace.notes.push_back("interval " + std::to_string(t) +
                                  ": empty cumulative test set");

        validate_ledger(ledger);
        trace.records.push_back(record);
    }

    trace.final_params = adversary.params;
    return trace;
}

}  // namespace decoy
