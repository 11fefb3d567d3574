#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "decoy/challenger.hpp"
#include "decoy/datagen.hpp"
#include "decoy/rng.hpp"

using namespace decoy;

namespace {

std::vector<Post> volunteer_pool(int n, std::uint64_t seed) {
    ScenarioSpec spec;
    StreamPlan plan;
    plan.T = 1;
    plan.n_damaging = 0;
    plan.n_nondamaging = 0;
    plan.n_volunteered = n;
    plan.seed = seed;
    return build_stream(spec, plan)[0].volunteered_new;
}

ClassifierParams zero_phi(int d) {
    ClassifierParams p;
    p.role = Role::ChallengerPhi;
    Layer layer;
    layer.in = d;
    layer.out = 1;
    layer.w.assign(static_cast<size_t>(d), 0.0);
    layer.b = {0.0};
    p.layers.push_back(std::move(layer));
    return p;
}

GameConfig d2_config() {
    GameConfig c;
    c.challenger_mode = ChallengerMode::D2;
    c.B_con = 20;
    c.hyper.epochs = 15;
    return c;
}

}  // namespace

TEST_CASE("objective_V oracle values and constraint checks") {
    SelectionVector one;
    one.w = {1};
    one.K = 1;
    CHECK(objective_V(one, {0.9}) == doctest::Approx(2.302585092994046).epsilon(1e-12));

    SelectionVector two;
    two.w = {1, 1, 0};
    two.K = 2;
    CHECK(objective_V(two, {0.9, 0.5, 0.3}) ==
          doctest::Approx(2.995732273553991).epsilon(1e-12));

    SelectionVector bad_count = two;
    bad_count.K = 1;
    CHECK_THROWS_AS(objective_V(bad_count, {0.9, 0.5, 0.3}), std::invalid_argument);

    SelectionVector non_binary;
    non_binary.w = {2, 0};
    non_binary.K = 2;
    CHECK_THROWS_AS(objective_V(non_binary, {0.5, 0.5}), std::invalid_argument);

    SelectionVector size_mismatch;
    size_mismatch.w = {1};
    size_mismatch.K = 1;
    CHECK_THROWS_AS(objective_V(size_mismatch, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("d2_loss with a flat scorer is the mean surprise") {
    auto pool = volunteer_pool(2, 3);
    auto phi = zero_phi(2);
    double expected = 0.5 * (-std::log(1.0 - 0.9) - std::log(1.0 - 0.5));
    CHECK(d2_loss(phi, pool, {0.9, 0.5}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("d2_loss weights by softmax of the scores") {
    // One-dimensional identity scorer: g(x) = x.
    ClassifierParams phi;
    phi.role = Role::ChallengerPhi;
    Layer layer;
    layer.in = 1;
    layer.out = 1;
    layer.w = {1.0};
    layer.b = {0.0};
    phi.layers.push_back(layer);

    Post a;
    a.id = 1;
    a.features = {std::log(2.0)};
    Post b;
    b.id = 2;
    b.features = {0.0};
    // alpha = softmax(ln 2, 0) = (2/3, 1/3); L = (3, ~0).
    double p3 = 1.0 - std::exp(-3.0);
    double v = d2_loss(phi, {a, b}, {p3, 0.0});
    CHECK(v == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("train_d2 ascends and zero rate is the identity") {
    auto pool = volunteer_pool(30, 9);
    Rng rng(4);
    std::vector<double> probs;
    for (size_t i = 0; i < pool.size(); ++i) probs.push_back(0.05 + 0.9 * rng.uniform());

    auto phi = init_params(2, {8}, Role::ChallengerPhi, 5);
    TrainHyper hyper;
    hyper.epochs = 40;
    hyper.learning_rate = 0.1;

    auto r = train_d2(phi, pool, probs, hyper, 6);
    CHECK(r.final_value >= r.initial_value);
    CHECK(r.final_value > r.initial_value + 1e-4);  // actually moved

    TrainHyper frozen = hyper;
    frozen.learning_rate = 1e-300;  // effectively zero but still valid
    auto s = train_d2(phi, pool, probs, frozen, 6);
    CHECK(s.final_value == doctest::Approx(s.initial_value));

    auto t1 = train_d2(phi, pool, probs, hyper, 7);
    auto t2 = train_d2(phi, pool, probs, hyper, 7);
    CHECK(same_params(t1.phi, t2.phi));
}

TEST_CASE("brute force discrete optimum oracle values") {
    auto k1 = brute_force_discrete_optimum({0.1, 0.2, 0.3}, 1);
    CHECK(k1.w == std::vector<int>{0, 0, 1});
    CHECK(k1.value == doctest::Approx(-std::log(0.7)).epsilon(1e-12));

    auto k2 = brute_force_discrete_optimum({0.1, 0.2, 0.3}, 2);
    CHECK(k2.w == std::vector<int>{0, 1, 1});
    CHECK(k2.value == doctest::Approx(-std::log(0.8) - std::log(0.7)).epsilon(1e-12));

    // Exact tie: keep the lexicographically smallest selector.
    auto tie = brute_force_discrete_optimum({0.5, 0.5}, 1);
    CHECK(tie.w == std::vector<int>{0, 1});

    CHECK_THROWS_AS(brute_force_discrete_optimum({0.5}, 2), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_discrete_optimum({}, 1), std::invalid_argument);
}

TEST_CASE("select_oracle matches the brute force set") {
    auto pool = volunteer_pool(12, 13);
    Rng rng(14);
    std::unordered_map<PostId, double> prob_of;
    std::vector<double> probs;
    for (const auto& p : pool) {
        double pr = 0.02 + 0.96 * rng.uniform();
        prob_of[p.id] = pr;
        probs.push_back(pr);
    }
    ProbQuery query = [&](const Post& p) { return prob_of.at(p.id); };

    for (int K : {1, 2, 3, 4}) {
        auto picked = select_oracle(pool, K, query);
        auto brute = brute_force_discrete_optimum(probs, K);
        std::unordered_set<PostId> expect;
        for (size_t i = 0; i < pool.size(); ++i)
            if (brute.w[i]) expect.insert(pool[i].id);
        REQUIRE(picked.size() == static_cast<size_t>(K));
        for (const auto& p : picked) CHECK(expect.count(p.id) == 1);
    }

    bool exhausted = false;
    auto all = select_oracle(pool, 50, query, &exhausted);
    CHECK(all.size() == pool.size());
    CHECK(exhausted);
}

TEST_CASE("select_random draws a uniform subset") {
    auto pool = volunteer_pool(30, 15);
    auto picked = select_random(pool, 10, 16);
    CHECK(picked.size() == 10);
    std::unordered_set<PostId> ids;
    std::unordered_set<PostId> pool_ids;
    for (const auto& p : pool) pool_ids.insert(p.id);
    for (const auto& p : picked) {
        CHECK(ids.insert(p.id).second);
        CHECK(pool_ids.count(p.id) == 1);
    }
    auto again = select_random(pool, 10, 16);
    for (size_t i = 0; i < picked.size(); ++i) CHECK(again[i].id == picked[i].id);

    bool exhausted = false;
    auto all = select_random(pool, 99, 17, &exhausted);
    CHECK(all.size() == 30);
    CHECK(exhausted);
}

TEST_CASE("select_d2 keeps queried posts and decoys disjoint") {
    auto config = d2_config();
    auto state = make_challenger(config);
    add_volunteered(state, volunteer_pool(60, 18));
    REQUIRE(state.pool.size() == 60);

    ProbQuery query = [](const Post& p) {
        // Prefer the first coordinate, squashed into (0,1).
        return 1.0 / (1.0 + std::exp(-p.features[0]));
    };

    std::unordered_set<PostId> all_decoys;
    size_t expected_pool = 60;
    for (int round = 1; round <= 3; ++round) {
        auto out = select_d2(state, 5, query, static_cast<std::uint64_t>(round));
        CHECK(out.decoys.size() == 5);
        CHECK(out.queried.size() == 20);  // B_con capped split
        expected_pool -= 5;
        CHECK(state.pool.size() == expected_pool);
        for (const auto& d : out.decoys) {
            CHECK(state.queried_ids.count(d.id) == 0);
            CHECK(all_decoys.insert(d.id).second);  // never re-selected
        }
        for (PostId q : out.queried) CHECK(state.queried_ids.count(q) == 1);
    }
    // Queried posts stay in the pool, available for future training splits.
    CHECK(state.queried_ids.size() >= 20);
}

TEST_CASE("select_d2 favours high probability posts") {
    // Probability rises with the first coordinate; D2 should pick decoys with
    // a clearly higher query probability than the pool average.
    auto config = d2_config();
    config.B_con = 60;
    config.hyper.epochs = 60;
    config.hyper.learning_rate = 0.2;
    auto state = make_challenger(config);
    auto pool = volunteer_pool(120, 19);
    add_volunteered(state, pool);

    ProbQuery query = [](const Post& p) {
        return 1.0 / (1.0 + std::exp(-2.0 * p.features[0]));
    };
    double pool_mean = 0.0;
    for (const auto& p : pool) pool_mean += query(p);
    pool_mean /= static_cast<double>(pool.size());

    auto out = select_d2(state, 8, query, 21);
    REQUIRE(out.decoys.size() == 8);
    double decoy_mean = 0.0;
    for (const auto& d : out.decoys) decoy_mean += query(d);
    decoy_mean /= 8.0;
    CHECK(decoy_mean > pool_mean + 0.1);
}

TEST_CASE("select_rejection with a flat ratio thins the pool uniformly") {
    ScenarioSpec same;
    same.scenario = Scenario::FullyOverlapping;
    same.mean0 = {0.0, 0.0};
    same.mean1 = {0.0, 0.0};
    auto pool = volunteer_pool(600, 22);
    bool exhausted = true;
    auto picked = select_rejection(pool, 10, same, 2.0, 23, &exhausted);
    CHECK(picked.size() == 10);
    CHECK_FALSE(exhausted);
    std::unordered_set<PostId> pool_ids;
    for (const auto& p : pool) pool_ids.insert(p.id);
    for (const auto& p : picked) {
        CHECK(pool_ids.count(p.id) == 1);
        CHECK(p.true_label == 0);
    }
}

TEST_CASE("select_rejection reshapes toward the damaging class") {
    ScenarioSpec shifted;
    shifted.scenario = Scenario::FullyOverlapping;
    shifted.mean0 = {0.0, 0.0};
    shifted.mean1 = {1.2, 0.0};

    StreamPlan plan;
    plan.T = 1;
    plan.n_damaging = 0;
    plan.n_nondamaging = 0;
    // Acceptance sits near 1/M ~ 0.05 per post, so 2000 posts leave wide
    // headroom for 40 accepts in a single pass.
    plan.n_volunteered = 2000;
    plan.seed = 24;
    auto pool = build_stream(shifted, plan)[0].volunteered_new;

    auto picked = select_rejection(pool, 40, shifted, std::exp(3.0), 25);
    REQUIRE(picked.size() == 40);
    double pool_x = 0.0, picked_x = 0.0;
    for (const auto& p : pool) pool_x += p.features[0];
    for (const auto& p : picked) picked_x += p.features[0];
    pool_x /= static_cast<double>(pool.size());
    picked_x /= 40.0;
    CHECK(pool_x < 0.2);        // volunteers sit near the class-0 mean
    CHECK(picked_x > pool_x + 0.5);  // accepted decoys lean toward class 1
}

TEST_CASE("select_rejection reports an exhausted pool") {
    ScenarioSpec same;
    same.scenario = Scenario::FullyOverlapping;
    same.mean0 = {0.0, 0.0};
    same.mean1 = {0.0, 0.0};
    auto pool = volunteer_pool(5, 26);
    bool exhausted = false;
    auto picked = select_rejection(pool, 5, same, 1e9, 27, &exhausted);
    CHECK(picked.size() < 5);
    CHECK(exhausted);
}

TEST_CASE("challenger_select dispatch") {
    ProbQuery query = [](const Post&) { return 0.5; };

    GameConfig none_config;
    none_config.challenger_mode = ChallengerMode::None;
    auto none = make_challenger(none_config);
    add_volunteered(none, volunteer_pool(10, 28));
    auto out = challenger_select(none, 4, query, 1);
    CHECK(out.decoys.empty());
    CHECK(none.pool.size() == 10);

    GameConfig rnd_config;
    rnd_config.challenger_mode = ChallengerMode::Random;
    auto rnd = make_challenger(rnd_config);
    add_volunteered(rnd, volunteer_pool(10, 29));
    auto rout = challenger_select(rnd, 4, query, 2);
    CHECK(rout.decoys.size() == 4);
    CHECK(rnd.pool.size() == 6);
    for (const auto& d : rout.decoys)
        for (const auto& p : rnd.pool) CHECK(d.id != p.id);

    GameConfig orc_config;
    orc_config.challenger_mode = ChallengerMode::Oracle;
    auto orc = make_challenger(orc_config);
    auto pool = volunteer_pool(10, 30);
    add_volunteered(orc, pool);
    std::unordered_map<PostId, double> prob_of;
    for (size_t i = 0; i < pool.size(); ++i)
        prob_of[pool[i].id] = static_cast<double>(i) / 10.0;
    ProbQuery ranked = [&](const Post& p) { return prob_of.at(p.id); };
    auto oout = challenger_select(orc, 3, ranked, 3);
    REQUIRE(oout.decoys.size() == 3);
    // Highest probabilities were assigned to the last three pool entries.
    std::unordered_set<PostId> expect{pool[9].id, pool[8].id, pool[7].id};
    for (const auto& d : oout.decoys) CHECK(expect.count(d.id) == 1);
}

TEST_CASE("add_volunteered rejects damaging posts") {
    GameConfig config;
    config.challenger_mode = ChallengerMode::Random;
    auto state = make_challenger(config);
    Post bad;
    bad.id = 1;
    bad.features = {0.0, 0.0};
    bad.true_label = 1;
    bad.origin = Origin::UserDeletedDamaging;
    CHECK_THROWS(add_volunteered(state, {bad}));
}
