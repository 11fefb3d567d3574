#include "decoy/adversary.hpp"

#include <algorithm>
#include <stdexcept>

namespace decoy {

AdversaryState make_adversary(const GameConfig& config) {
    AdversaryState state;
    state.mode = config.adversary_mode;
    state.params = init_params(config.d, config.hidden_widths,
                               Role::AdversaryTheta,
                               derive_seed(config.seed, "adversary_init"));
    state.budget_remaining = config.B_static;
    state.tau = config.tau();
    state.p = config.p;
    state.B_adapt = config.B_adapt;
    state.label_noise_eta = config.label_noise_eta;
    state.prior_positive = config.prior_positive;
    state.decision_threshold = config.decision_threshold;
    state.monitored_flag = config.monitored_flag;
    state.fresh_restart = config.fresh_restart;
    state.random_estimate_prior = config.random_estimate_prior;
    state.hyper = config.hyper;
    state.hidden_widths = config.hidden_widths;
    state.d = config.d;
    state.master_seed = config.seed;
    return state;
}

std::vector<Post> sample_training_set(const std::vector<Post>& deleted, int p,
                                      std::uint64_t seed) {
    if (p < 0) throw std::invalid_argument("sample_training_set: p must be >= 0");
    size_t take = std::min(static_cast<size_t>(p), deleted.size());
    if (take == deleted.size()) return deleted;
    // Partial Fisher-Yates over an index view keeps the draw uniform.
    std::vector<size_t> idx(deleted.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(derive_seed(seed, "sample_training_set"));
    std::vector<Post> out;
    out.reserve(take);
    for (size_t i = 0; i < take; ++i) {
        size_t j = i + static_cast<size_t>(rng.uniform_int(idx.size() - i));
        std::swap(idx[i], idx[j]);
        out.push_back(deleted[idx[i]]);
    }
    return out;
}

std::vector<LabeledPost> acquire_labels(const std::vector<Post>& posts,
                                        double eta, std::uint64_t seed) {
    if (eta < 0.0 || eta > 1.0)
        throw std::invalid_argument("acquire_labels: eta must be in [0,1]");
    Rng rng(derive_seed(seed, "acquire_labels"));
    std::vector<LabeledPost> out;
    out.reserve(posts.size());
    for (const Post& p : posts) {
        bool flip = rng.uniform() < eta;
        out.push_back({p, flip ? 1 - p.true_label : p.true_label});
    }
    return out;
}

namespace {

std::vector<Example> to_examples(const std::vector<LabeledPost>& labeled) {
    std::vector<Example> batch;
    batch.reserve(labeled.size());
    for (const LabeledPost& lp : labeled)
        batch.push_back({lp.post.features, lp.observed_label});
    return batch;
}

}  // namespace

AdversaryStepOutcome adversary_step(AdversaryState& state,
                                    const std::vector<Post>& deleted,
                                    std::uint64_t seed) {
    AdversaryStepOutcome outcome;
    if (deleted.empty()) return outcome;

    if (state.mode == AdversaryMode::Random) {
        if (state.random_estimate_prior && state.budget_remaining > 0) {
            int take = static_cast<int>(
                std::min<long>(state.p, state.budget_remaining));
            auto sample =
                sample_training_set(deleted, take, derive_seed(seed, "sample"));
            auto labeled = acquire_labels(sample, state.label_noise_eta,
                                          derive_seed(seed, "labels"));
            long pos = 0;
            for (const LabeledPost& lp : labeled) pos += lp.observed_label;
            if (!labeled.empty()) {
                double est = static_cast<double>(pos) /
                             static_cast<double>(labeled.size());
                state.prior_positive = std::clamp(est, 0.01, 0.99);
            }
            state.budget_remaining -= static_cast<long>(sample.size());
            state.budget_spent += static_cast<long>(sample.size());
            outcome.training_sample = std::move(sample);
        }
        return outcome;
    }

    int sample_size = 0;
    if (state.mode == AdversaryMode::Static) {
        if (state.intervals_trained >= state.tau || state.budget_remaining <= 0)
            return outcome;
        sample_size =
            static_cast<int>(std::min<long>(state.p, state.budget_remaining));
    } else {
        sample_size = std::min(state.p, state.B_adapt);
    }
    if (sample_size <= 0) return outcome;

    auto sample =
        sample_training_set(deleted, sample_size, derive_seed(seed, "sample"));
    auto labeled = acquire_labels(sample, state.label_noise_eta,
                                  derive_seed(seed, "labels"));
    std::vector<Example> batch = to_examples(labeled);

    ClassifierParams start = state.params;
    if (state.fresh_restart)
        start = init_params(state.d, state.hidden_widths, Role::AdversaryTheta,
                            derive_seed(seed, "fresh_restart"));
    TrainResult tr = train(start, batch, state.hyper, derive_seed(seed, "train"));
    state.params = std::move(tr.params);
    outcome.fell_back_unbalanced = tr.fell_back_unbalanced;
    outcome.trained = true;

    state.intervals_trained += 1;
    state.budget_spent += static_cast<long>(sample.size());
    if (state.mode == AdversaryMode::Static)
        state.budget_remaining -= static_cast<long>(sample.size());
    outcome.training_sample = std::move(sample);
    return outcome;
}

std::vector<Prediction> classify(const AdversaryState& state,
                                 const std::vector<Post>& posts,
                                 std::uint64_t seed) {
    std::vector<Prediction> out;
    out.reserve(posts.size());
    if (state.mode == AdversaryMode::Random) {
        Rng rng(derive_seed(seed, "classify_random"));
        for (const Post& p : posts) {
            // Flag rate 1 - prior: on a stream with damaging fraction q and
            // prior_positive = q this lands precision q and recall 1 - q.
            int pred = rng.uniform() >= state.prior_positive ? 1 : 0;
            out.push_back({p.id, pred, state.prior_positive});
        }
        return out;
    }
    for (const Post& p : posts) {
        double a = forward_prob(state.params, p.features);
        int pred = a >= state.decision_threshold ? 1 : 0;
        if (state.monitored_flag && state.monitored_ids.count(p.id)) pred = 0;
        out.push_back({p.id, pred, a});
    }
    return out;
}

}  // namespace decoy
