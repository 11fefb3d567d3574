#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <unordered_set>

#include "decoy/adversary.hpp"
#include "decoy/datagen.hpp"
#include "decoy/rng.hpp"

using namespace decoy;

namespace {

std::vector<Post> make_deleted(int n_damaging, int n_benign, int t,
                               std::uint64_t seed) {
    ScenarioSpec spec;
    StreamPlan plan;
    plan.T = t;
    plan.n_damaging = n_damaging;
    plan.n_nondamaging = n_benign;
    plan.n_volunteered = 0;
    plan.seed = seed;
    auto stream = build_stream(spec, plan);
    return stream[static_cast<size_t>(t - 1)].deleted;
}

GameConfig base_config(AdversaryMode mode) {
    GameConfig c;
    c.adversary_mode = mode;
    c.T = 4;
    c.hyper.epochs = 10;
    return c;
}

}  // namespace

TEST_CASE("sample_training_set caps and dedups") {
    auto deleted = make_deleted(10, 10, 1, 3);
    auto sample = sample_training_set(deleted, 7, 11);
    CHECK(sample.size() == 7);
    std::unordered_set<PostId> ids;
    std::unordered_set<PostId> pool_ids;
    for (const auto& p : deleted) pool_ids.insert(p.id);
    for (const auto& p : sample) {
        CHECK(ids.insert(p.id).second);
        CHECK(pool_ids.count(p.id) == 1);
    }

    auto all = sample_training_set(deleted, 50, 11);
    CHECK(all.size() == deleted.size());

    auto again = sample_training_set(deleted, 7, 11);
    REQUIRE(again.size() == sample.size());
    for (size_t i = 0; i < sample.size(); ++i) CHECK(again[i].id == sample[i].id);
}

TEST_CASE("acquire_labels flips at rate eta") {
    auto deleted = make_deleted(40, 40, 1, 5);

    auto clean = acquire_labels(deleted, 0.0, 9);
    REQUIRE(clean.size() == deleted.size());
    for (size_t i = 0; i < clean.size(); ++i)
        CHECK(clean[i].observed_label == deleted[i].true_label);

    auto inverted = acquire_labels(deleted, 1.0, 9);
    for (size_t i = 0; i < inverted.size(); ++i)
        CHECK(inverted[i].observed_label == 1 - deleted[i].true_label);

    // Law of large numbers at eta = 0.3.
    auto big = make_deleted(5000, 5000, 1, 6);
    auto noisy = acquire_labels(big, 0.3, 10);
    int flips = 0;
    for (size_t i = 0; i < noisy.size(); ++i)
        flips += noisy[i].observed_label != big[i].true_label;
    double rate = static_cast<double>(flips) / static_cast<double>(big.size());
    CHECK(std::fabs(rate - 0.3) < 0.02);
}

TEST_CASE("static adversary freezes after its budget horizon") {
    auto config = base_config(AdversaryMode::Static);
    config.B_static = 40;
    config.p = 40;  // tau = 1: one training interval
    auto adv = make_adversary(config);
    CHECK(adv.tau == 1);
    CHECK(adv.budget_remaining == 40);

    auto deleted1 = make_deleted(20, 28, 1, 21);
    auto out1 = adversary_step(adv, deleted1, 1);
    CHECK(out1.trained);
    CHECK(out1.training_sample.size() == 40);
    CHECK(adv.budget_remaining == 0);
    CHECK(adv.budget_spent == 40);
    CHECK(adv.intervals_trained == 1);

    auto frozen = adv.params;
    auto deleted2 = make_deleted(20, 28, 1, 22);
    auto out2 = adversary_step(adv, deleted2, 2);
    CHECK_FALSE(out2.trained);
    CHECK(out2.training_sample.empty());
    CHECK(same_params(adv.params, frozen));
    CHECK(adv.budget_spent == 40);
}

TEST_CASE("static adversary spreads a larger budget over tau intervals") {
    auto config = base_config(AdversaryMode::Static);
    config.B_static = 80;
    config.p = 40;
    auto adv = make_adversary(config);
    CHECK(adv.tau == 2);
    for (int t = 1; t <= 3; ++t) {
        auto deleted = make_deleted(20, 28, 1, 30 + static_cast<std::uint64_t>(t));
        auto out = adversary_step(adv, deleted, static_cast<std::uint64_t>(t));
        CHECK(out.trained == (t <= 2));
    }
    CHECK(adv.budget_spent == 80);
}

TEST_CASE("adaptive adversary trains every interval") {
    auto config = base_config(AdversaryMode::Adaptive);
    config.p = 30;
    config.B_adapt = 30;
    auto adv = make_adversary(config);
    long spent = 0;
    for (int t = 1; t <= 3; ++t) {
        auto deleted = make_deleted(20, 28, 1, 40 + static_cast<std::uint64_t>(t));
        auto before = adv.params;
        auto out = adversary_step(adv, deleted, static_cast<std::uint64_t>(t));
        CHECK(out.trained);
        CHECK(out.training_sample.size() == 30);
        CHECK_FALSE(same_params(adv.params, before));
        spent += 30;
        CHECK(adv.budget_spent == spent);
    }
}

TEST_CASE("random adversary never touches its model") {
    auto config = base_config(AdversaryMode::Random);
    auto adv = make_adversary(config);
    auto before = adv.params;
    auto deleted = make_deleted(20, 28, 1, 50);
    auto out = adversary_step(adv, deleted, 1);
    CHECK_FALSE(out.trained);
    CHECK(out.training_sample.empty());
    CHECK(same_params(adv.params, before));
    CHECK(adv.budget_spent == 0);
}

TEST_CASE("random adversary flags at one minus the prior") {
    auto config = base_config(AdversaryMode::Random);
    config.prior_positive = 0.42;
    auto adv = make_adversary(config);
    auto posts = make_deleted(5000, 5000, 1, 51);
    auto preds = classify(adv, posts, 77);
    REQUIRE(preds.size() == posts.size());
    long flagged = 0;
    for (const auto& pr : preds) {
        flagged += pr.predicted_label;
        CHECK(pr.probability == doctest::Approx(0.42));
    }
    double rate = static_cast<double>(flagged) / static_cast<double>(preds.size());
    CHECK(std::fabs(rate - 0.58) < 0.02);

    auto again = classify(adv, posts, 77);
    for (size_t i = 0; i < preds.size(); ++i)
        CHECK(again[i].predicted_label == preds[i].predicted_label);
}

TEST_CASE("model based classification thresholds with ties positive") {
    auto config = base_config(AdversaryMode::Adaptive);
    auto adv = make_adversary(config);
    // Zero every coordinate: probability is exactly 1/2 for any input.
    for (auto& layer : adv.params.layers) {
        for (auto& w : layer.w) w = 0.0;
        for (auto& b : layer.b) b = 0.0;
    }
    auto posts = make_deleted(3, 3, 1, 52);
    auto preds = classify(adv, posts, 1);
    for (const auto& pr : preds) {
        CHECK(pr.probability == doctest::Approx(0.5));
        CHECK(pr.predicted_label == 1);  // 0.5 >= 0.5
    }
}

TEST_CASE("monitored posts are never flagged when the countermeasure is on") {
    auto config = base_config(AdversaryMode::Adaptive);
    config.monitored_flag = true;
    auto adv = make_adversary(config);
    for (auto& layer : adv.params.layers) {
        for (auto& w : layer.w) w = 0.0;
        for (auto& b : layer.b) b = 1.0;  // everything looks damaging
    }
    auto posts = make_deleted(4, 4, 1, 53);
    adv.monitored_ids.insert(posts[0].id);
    adv.monitored_ids.insert(posts[2].id);
    auto preds = classify(adv, posts, 1);
    for (size_t i = 0; i < posts.size(); ++i) {
        bool monitored = adv.monitored_ids.count(posts[i].id) > 0;
        CHECK(preds[i].predicted_label == (monitored ? 0 : 1));
    }

    // Flag off: monitoring history is ignored.
    adv.monitored_flag = false;
    auto raw = classify(adv, posts, 1);
    for (const auto& pr : raw) CHECK(pr.predicted_label == 1);
}

TEST_CASE("label noise flows into training") {
    auto config = base_config(AdversaryMode::Adaptive);
    config.label_noise_eta = 1.0;  // adversary sees inverted labels
    config.hyper.epochs = 30;
    auto adv = make_adversary(config);
    auto clean_config = base_config(AdversaryMode::Adaptive);
    clean_config.hyper.epochs = 30;
    auto clean = make_adversary(clean_config);

    auto deleted = make_deleted(24, 24, 1, 54);
    adversary_step(adv, deleted, 5);
    adversary_step(clean, deleted, 5);

    // Same sample, inverted labels: the two models disagree.
    CHECK_FALSE(same_params(adv.params, clean.params));
}
