#include "decoy/challenger.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "decoy/datagen.hpp"

namespace decoy {

namespace {

double clamp_prob(double a) {
    return std::min(1.0 - kProbEps, std::max(kProbEps, a));
}

double surprise(double prob) { return -std::log(1.0 - clamp_prob(prob)); }

std::vector<double> softmax(const std::vector<double>& g) {
    double mx = *std::max_element(g.begin(), g.end());
    std::vector<double> a(g.size());
    double z = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
        a[i] = std::exp(g[i] - mx);
        z += a[i];
    }
    for (double& v : a) v /= z;
    return a;
}

// Top-K indices by (score desc, id asc). Stable under permutations of the
// input because the id is part of the key.
std::vector<size_t> top_k_indices(const std::vector<Post>& posts,
                                  const std::vector<double>& scores, int k) {
    std::vector<size_t> idx(posts.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return posts[a].id < posts[b].id;
    });
    idx.resize(std::min(idx.size(), static_cast<size_t>(k)));
    return idx;
}

void erase_from_pool(std::vector<Post>& pool, const std::vector<Post>& taken) {
    std::unordered_set<PostId> ids;
    for (const Post& p : taken) ids.insert(p.id);
    pool.erase(std::remove_if(pool.begin(), pool.end(),
                              [&](const Post& p) { return ids.count(p.id) > 0; }),
               pool.end());
}

}  // namespace

ChallengerState make_challenger(const GameConfig& config) {
    ChallengerState state;
    state.mode = config.challenger_mode;
    state.phi = init_params(config.d, config.hidden_widths, Role::ChallengerPhi,
                            derive_seed(config.seed, "challenger_init"));
    state.B_con = config.B_con;
    state.hyper = config.hyper;
    state.rejection_M = config.rejection_M;
    state.scenario = config.scenario;
    state.master_seed = config.seed;
    return state;
}

void add_volunteered(ChallengerState& state, const std::vector<Post>& posts) {
    for (const Post& p : posts) {
        if (p.true_label != 0)
            throw std::logic_error("pool accepts only non-damaging posts");
        state.pool.push_back(p);
    }
}

double objective_V(const SelectionVector& sel, const std::vector<double>& probs) {
    if (sel.w.size() != probs.size())
        throw std::invalid_argument("objective_V: size mismatch");
    int ones = 0;
    for (int wi : sel.w) {
        if (wi != 0 && wi != 1)
            throw std::invalid_argument("objective_V: w must be binary");
        ones += wi;
    }
    if (ones != sel.K)
        throw std::invalid_argument("objective_V: ||w||_1 != K");
    double v = 0.0;
    for (size_t i = 0; i < probs.size(); ++i)
        if (sel.w[i]) v += surprise(probs[i]);
    return v;
}

std::vector<Post> select_random(const std::vector<Post>& pool, int K,
                                std::uint64_t seed, bool* exhausted) {
    if (K < 0) throw std::invalid_argument("select_random: K must be >= 0");
    if (exhausted) *exhausted = K > static_cast<int>(pool.size());
    size_t take = std::min(static_cast<size_t>(K), pool.size());
    std::vector<size_t> idx(pool.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(derive_seed(seed, "select_random"));
    std::vector<Post> out;
    out.reserve(take);
    for (size_t i = 0; i < take; ++i) {
        size_t j = i + static_cast<size_t>(rng.uniform_int(idx.size() - i));
        std::swap(idx[i], idx[j]);
        out.push_back(pool[idx[i]]);
    }
    return out;
}

std::vector<Post> select_oracle(const std::vector<Post>& pool, int K,
                                const ProbQuery& prob_query, bool* exhausted) {
    if (K < 0) throw std::invalid_argument("select_oracle: K must be >= 0");
    if (exhausted) *exhausted = K > static_cast<int>(pool.size());
    std::vector<double> probs(pool.size());
    for (size_t i = 0; i < pool.size(); ++i) probs[i] = prob_query(pool[i]);
    std::vector<Post> out;
    for (size_t i : top_k_indices(pool, probs, K)) out.push_back(pool[i]);
    return out;
}

double d2_loss(const ClassifierParams& phi, const std::vector<Post>& train_pool,
               const std::vector<double>& probs) {
    if (train_pool.empty()) throw std::invalid_argument("d2_loss: empty train pool");
    if (train_pool.size() != probs.size())
        throw std::invalid_argument("d2_loss: size mismatch");
    std::vector<double> g(train_pool.size());
    for (size_t i = 0; i < train_pool.size(); ++i)
        g[i] = forward_score(phi, train_pool[i].features);
    std::vector<double> alpha = softmax(g);
    double v = 0.0;
    for (size_t i = 0; i < alpha.size(); ++i) v += alpha[i] * surprise(probs[i]);
    return v;
}

D2TrainResult train_d2(const ClassifierParams& phi,
                       const std::vector<Post>& train_pool,
                       const std::vector<double>& probs,
                       const TrainHyper& hyper, std::uint64_t seed) {
    if (train_pool.empty())
        throw std::invalid_argument("train_d2: empty train pool");
    if (train_pool.size() != probs.size())
        throw std::invalid_argument("train_d2: size mismatch");
    (void)seed;  // full-batch ascent; kept for signature symmetry with train

    std::vector<double> L(probs.size());
    for (size_t i = 0; i < probs.size(); ++i) L[i] = surprise(probs[i]);

    D2TrainResult result;
    result.phi = phi;
    result.initial_value = d2_loss(phi, train_pool, probs);

    ClassifierParams current = phi;
    ClassifierParams best = phi;
    double best_value = result.initial_value;

    std::vector<double> g(train_pool.size());
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        for (size_t i = 0; i < train_pool.size(); ++i)
            g[i] = forward_score(current, train_pool[i].features);
        std::vector<double> alpha = softmax(g);
        double v = 0.0;
        for (size_t i = 0; i < alpha.size(); ++i) v += alpha[i] * L[i];

        Grad grad = zero_grad(current);
        for (size_t i = 0; i < train_pool.size(); ++i) {
            double upstream = alpha[i] * (L[i] - v);  // dV~/dg_i
            accumulate_logit_grad(current, train_pool[i].features, upstream, grad);
        }
        apply_update(current, grad, hyper.learning_rate);
        if (!all_finite(current))
            throw std::runtime_error("train_d2: parameters diverged");

        double after = d2_loss(current, train_pool, probs);
        if (after > best_value) {
            best_value = after;
            best = current;
        }
    }
    result.phi = std::move(best);
    result.final_value = best_value;
    return result;
}

SelectionOutcome select_d2(ChallengerState& state, int K,
                           const ProbQuery& prob_query, std::uint64_t seed) {
    if (state.mode != ChallengerMode::D2)
        throw std::logic_error("select_d2: challenger not in D2 mode");
    SelectionOutcome outcome;
    if (K <= 0 || state.pool.empty()) {
        outcome.pool_exhausted = K > 0;
        return outcome;
    }

    size_t train_size = std::min(static_cast<size_t>(state.B_con),
                                 state.pool.size() / 2);
    Rng rng(derive_seed(seed, "d2_split"));
    std::vector<size_t> idx(state.pool.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng.shuffle(idx);

    std::vector<Post> train_split;
    for (size_t i = 0; i < train_size; ++i) train_split.push_back(state.pool[idx[i]]);

    // Candidates: never queried in this game, and not in today's train split.
    std::vector<Post> candidates;
    for (size_t i = train_size; i < idx.size(); ++i) {
        const Post& p = state.pool[idx[i]];
        if (!state.queried_ids.count(p.id)) candidates.push_back(p);
    }

    if (!train_split.empty()) {
        std::vector<double> probs(train_split.size());
        for (size_t i = 0; i < train_split.size(); ++i) {
            probs[i] = prob_query(train_split[i]);
            outcome.queried.push_back(train_split[i].id);
            state.queried_ids.insert(train_split[i].id);
        }
        D2TrainResult tr = train_d2(state.phi, train_split, probs, state.hyper,
                                    derive_seed(seed, "d2_train"));
        state.phi = std::move(tr.phi);
    }

    std::vector<double> scores(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i)
        scores[i] = forward_score(state.phi, candidates[i].features);
    for (size_t i : top_k_indices(candidates, scores, K))
        outcome.decoys.push_back(candidates[i]);
    outcome.pool_exhausted = static_cast<int>(outcome.decoys.size()) < K;

    erase_from_pool(state.pool, outcome.decoys);
    return outcome;
}

std::vector<Post> select_rejection(const std::vector<Post>& pool, int K,
                                   const ScenarioSpec& scenario, double M,
                                   std::uint64_t seed, bool* exhausted) {
    if (K < 0) throw std::invalid_argument("select_rejection: K must be >= 0");
    if (M < 1.0) throw std::invalid_argument("select_rejection: M must be >= 1");
    Rng rng(derive_seed(seed, "select_rejection"));
    std::vector<size_t> idx(pool.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng.shuffle(idx);
    // One accept-reject pass; re-offering rejected posts would skew the
    // accepted set back toward the pool distribution.
    std::vector<Post> out;
    for (size_t i : idx) {
        if (static_cast<int>(out.size()) >= K) break;
        double ratio = scenario_density(scenario, 1, pool[i].features) /
                       std::max(scenario_density(scenario, 0, pool[i].features),
                                1e-300);
        double accept = std::min(1.0, ratio / M);
        if (rng.uniform() < accept) out.push_back(pool[i]);
    }
    if (exhausted) *exhausted = static_cast<int>(out.size()) < K;
    return out;
}

BruteForceResult brute_force_discrete_optimum(const std::vector<double>& probs,
                                              int K) {
    int n = static_cast<int>(probs.size());
    if (n > 20) throw std::invalid_argument("brute_force: N must be <= 20");
    if (K > 5) throw std::invalid_argument("brute_force: K must be <= 5");
    if (K < 0 || K > n) throw std::invalid_argument("brute_force: bad K");

    std::vector<double> L(probs.size());
    for (size_t i = 0; i < probs.size(); ++i) L[i] = surprise(probs[i]);

    BruteForceResult best;
    best.w.assign(static_cast<size_t>(n), 0);
    best.value = -1.0;
    std::vector<int> pick(static_cast<size_t>(K), 0);

    // Exact value ties keep the lexicographically smallest w.
    std::vector<int> w(static_cast<size_t>(n), 0);
    auto consider = [&]() {
        double v = 0.0;
        for (int i = 0; i < n; ++i)
            if (w[static_cast<size_t>(i)]) v += L[static_cast<size_t>(i)];
        if (v > best.value ||
            (v == best.value && w < best.w)) {
            best.value = v;
            best.w = w;
        }
    };
    std::function<void(int, int)> rec = [&](int start, int left) {
        if (left == 0) {
            consider();
            return;
        }
        for (int i = start; i <= n - left; ++i) {
            w[static_cast<size_t>(i)] = 1;
            rec(i + 1, left - 1);
            w[static_cast<size_t>(i)] = 0;
        }
    };
    if (K == 0) {
        consider();
    } else {
        rec(0, K);
    }
    return best;
}

SelectionOutcome challenger_select(ChallengerState& state, int K,
                                   const ProbQuery& prob_query,
                                   std::uint64_t seed) {
    SelectionOutcome outcome;
    switch (state.mode) {
        case ChallengerMode::None:
            return outcome;
        case ChallengerMode::Random:
            outcome.decoys = select_random(state.pool, K, seed,
                                           &outcome.pool_exhausted);
            break;
        case ChallengerMode::Oracle:
            outcome.decoys =
                select_oracle(state.pool, K, prob_query, &outcome.pool_exhausted);
            break;
        case ChallengerMode::D2:
            return select_d2(state, K, prob_query, seed);
        case ChallengerMode::Rejection:
            outcome.decoys =
                select_rejection(state.pool, K, state.scenario, state.rejection_M,
                                 seed, &outcome.pool_exhausted);
            break;
    }
    erase_from_pool(state.pool, outcome.decoys);
    return outcome;
}

}  // namespace decoy
