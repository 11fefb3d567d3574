#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "decoy/model.hpp"
#include "decoy/rng.hpp"

using namespace decoy;

namespace {

// Single linear layer with hand-picked coefficients.
ClassifierParams linear_model(std::vector<double> w, double b, Role role) {
    ClassifierParams p;
    p.role = role;
    Layer layer;
    layer.in = static_cast<int>(w.size());
    layer.out = 1;
    layer.w = std::move(w);
    layer.b = {b};
    p.layers.push_back(std::move(layer));
    return p;
}

std::vector<Example> xor_like_batch(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Example> batch;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal(), y = rng.normal();
        batch.push_back({{x, y}, (x * y > 0.0) ? 1 : 0});
    }
    return batch;
}

}  // namespace

TEST_CASE("init_params shapes and finiteness") {
    auto p = init_params(3, {5, 4}, Role::AdversaryTheta, 2);
    REQUIRE(p.layers.size() == 3);
    CHECK(p.layers[0].in == 3);
    CHECK(p.layers[0].out == 5);
    CHECK(p.layers[1].in == 5);
    CHECK(p.layers[1].out == 4);
    CHECK(p.layers[2].in == 4);
    CHECK(p.layers[2].out == 1);
    CHECK(p.input_dim() == 3);
    CHECK(p.coord_count() == (3 * 5 + 5) + (5 * 4 + 4) + (4 * 1 + 1));
    CHECK(all_finite(p));

    auto q = init_params(3, {5, 4}, Role::AdversaryTheta, 2);
    CHECK(same_params(p, q));
    auto r = init_params(3, {5, 4}, Role::AdversaryTheta, 3);
    CHECK_FALSE(same_params(p, r));

    auto flat = init_params(2, {}, Role::ChallengerPhi, 1);
    CHECK(flat.layers.size() == 1);

    CHECK_THROWS_AS(init_params(0, {}, Role::AdversaryTheta, 1), std::invalid_argument);
    CHECK_THROWS_AS(init_params(2, {0}, Role::AdversaryTheta, 1), std::invalid_argument);
}

TEST_CASE("forward pass oracle values") {
    // w = (1, 0), b = 0: logit equals the first feature.
    auto m = linear_model({1.0, 0.0}, 0.0, Role::AdversaryTheta);
    double l3 = std::log(3.0);
    CHECK(forward_logit(m, {l3, 7.0}) == doctest::Approx(l3).epsilon(1e-15));
    // sigmoid(ln 3) = 3/4 exactly.
    CHECK(forward_prob(m, {l3, 7.0}) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(forward_prob(m, {0.0, -5.0}) == doctest::Approx(0.5).epsilon(1e-14));

    // Probabilities stay inside the clamp.
    CHECK(forward_prob(m, {1000.0, 0.0}) <= 1.0 - kProbEps);
    CHECK(forward_prob(m, {-1000.0, 0.0}) >= kProbEps);

    auto g = linear_model({2.0}, -1.0, Role::ChallengerPhi);
    CHECK(forward_score(g, {3.0}) == doctest::Approx(5.0).epsilon(1e-15));

    CHECK_THROWS_AS(forward_prob(g, {3.0}), std::invalid_argument);
    CHECK_THROWS_AS(forward_score(m, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(forward_logit(m, {1.0}), std::invalid_argument);
}

TEST_CASE("nll_loss oracle values") {
    // Zero model: a = 1/2 for every input, so loss = m ln 2.
    auto zero = linear_model({0.0, 0.0}, 0.0, Role::AdversaryTheta);
    std::vector<Example> four = {
        {{1.0, 2.0}, 1}, {{-1.0, 0.5}, 0}, {{0.0, 0.0}, 1}, {{3.0, -2.0}, 0}};
    CHECK(nll_loss(zero, four) == doctest::Approx(4.0 * std::log(2.0)).epsilon(1e-14));

    // b = ln 3 puts a = 3/4 everywhere.
    auto biased = linear_model({0.0, 0.0}, std::log(3.0), Role::AdversaryTheta);
    std::vector<Example> one_pos = {{{0.0, 0.0}, 1}};
    std::vector<Example> one_neg = {{{0.0, 0.0}, 0}};
    CHECK(nll_loss(biased, one_pos) == doctest::Approx(-std::log(0.75)).epsilon(1e-13));
    CHECK(nll_loss(biased, one_neg) == doctest::Approx(-std::log(0.25)).epsilon(1e-13));

    CHECK_THROWS_AS(nll_loss(zero, {}), std::invalid_argument);
}

TEST_CASE("analytic gradient matches finite differences") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        int d = 1 + static_cast<int>(rng.uniform_int(4));
        std::vector<int> hidden;
        int n_hidden = static_cast<int>(rng.uniform_int(3));
        for (int i = 0; i < n_hidden; ++i)
            hidden.push_back(2 + static_cast<int>(rng.uniform_int(6)));
        auto params = init_params(d, hidden, Role::AdversaryTheta,
                                  derive_seed(31, "gc", trial));
        std::vector<Example> batch;
        int n = 3 + static_cast<int>(rng.uniform_int(5));
        for (int i = 0; i < n; ++i) {
            std::vector<double> x;
            for (int j = 0; j < d; ++j) x.push_back(rng.normal());
            batch.push_back({x, static_cast<int>(rng.uniform_int(2))});
        }
        CHECK(grad_check(params, batch, 1e-5) < 1e-4);
    }
}

TEST_CASE("nll_grad direction on a known case") {
    // Zero linear model, one positive example at x = (1, 0):
    // dL/dlogit = a - y = -1/2, so dL/dw1 = -1/2, dL/db = -1/2.
    auto zero = linear_model({0.0, 0.0}, 0.0, Role::AdversaryTheta);
    auto g = nll_grad(zero, {{{1.0, 0.0}, 1}});
    REQUIRE(g.layers.size() == 1);
    CHECK(g.layers[0].w[0] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(g.layers[0].w[1] == doctest::Approx(0.0));
    CHECK(g.layers[0].b[0] == doctest::Approx(-0.5).epsilon(1e-14));

    // Gradient step against the gradient reduces the loss.
    auto stepped = zero;
    apply_update(stepped, g, -1.0);
    CHECK(nll_loss(stepped, {{{1.0, 0.0}, 1}}) < nll_loss(zero, {{{1.0, 0.0}, 1}}));
}

TEST_CASE("apply_update with zero scale is the identity") {
    auto params = init_params(2, {4}, Role::AdversaryTheta, 5);
    auto grad = nll_grad(params, xor_like_batch(6, 8));
    auto copy = params;
    apply_update(copy, grad, 0.0);
    CHECK(same_params(copy, params));
}

TEST_CASE("train is deterministic and never worsens the loss") {
    auto params = init_params(2, {8}, Role::AdversaryTheta, 17);
    auto batch = xor_like_batch(40, 23);
    TrainHyper hyper;
    hyper.epochs = 20;

    auto a = train(params, batch, hyper, 99);
    auto b = train(params, batch, hyper, 99);
    CHECK(same_params(a.params, b.params));
    CHECK(a.final_loss == b.final_loss);
    CHECK(a.final_loss <= a.initial_loss);

    auto c = train(params, batch, hyper, 100);
    CHECK(c.final_loss <= c.initial_loss);
}

TEST_CASE("train with zero epochs returns the input") {
    auto params = init_params(2, {4}, Role::AdversaryTheta, 3);
    auto batch = xor_like_batch(10, 4);
    TrainHyper hyper;
    hyper.epochs = 0;
    auto r = train(params, batch, hyper, 1);
    CHECK(same_params(r.params, params));
    CHECK(r.initial_loss == r.final_loss);
}

TEST_CASE("loss never increases over many random trials") {
    Rng rng(555);
    for (int trial = 0; trial < 50; ++trial) {
        auto params = init_params(2, {6}, Role::AdversaryTheta,
                                  derive_seed(555, "t", trial));
        auto batch = xor_like_batch(12 + static_cast<int>(rng.uniform_int(20)),
                                    derive_seed(556, "b", trial));
        TrainHyper hyper;
        hyper.epochs = 5;
        hyper.learning_rate = 0.5;  // aggressive on purpose
        auto r = train(params, batch, hyper, derive_seed(557, "s", trial));
        CHECK(r.final_loss <= r.initial_loss + 1e-12);
    }
}

TEST_CASE("train separates well separated clusters") {
    Rng rng(202);
    std::vector<Example> batch;
    for (int i = 0; i < 60; ++i) {
        int y = i % 2;
        double cx = y == 1 ? 4.0 : -4.0;
        batch.push_back({{cx + 0.3 * rng.normal(), 0.3 * rng.normal()}, y});
    }
    auto params = init_params(2, {8}, Role::AdversaryTheta, 7);
    TrainHyper hyper;
    hyper.epochs = 80;
    auto r = train(params, batch, hyper, 11);
    int correct = 0;
    for (const auto& e : batch)
        correct += (forward_prob(r.params, e.x) >= 0.5 ? 1 : 0) == e.y;
    CHECK(correct == 60);
}

TEST_CASE("single class batch falls back to unbalanced draws") {
    std::vector<Example> batch;
    Rng rng(6);
    for (int i = 0; i < 8; ++i) batch.push_back({{rng.normal(), rng.normal()}, 0});
    auto params = init_params(2, {4}, Role::AdversaryTheta, 9);
    TrainHyper hyper;
    hyper.epochs = 5;
    auto r = train(params, batch, hyper, 10);
    CHECK(r.fell_back_unbalanced);
    CHECK(r.final_loss <= r.initial_loss);
}

TEST_CASE("save and load round trip exactly") {
    auto params = init_params(3, {5, 2}, Role::AdversaryTheta, 77);
    auto text = save_params(params);
    auto back = load_params(text);
    CHECK(same_params(params, back));
    CHECK(back.role == Role::AdversaryTheta);

    auto phi = init_params(2, {}, Role::ChallengerPhi, 1);
    CHECK(load_params(save_params(phi)).role == Role::ChallengerPhi);

    CHECK_THROWS(load_params("not a model"));
    CHECK_THROWS(load_params(""));
}
