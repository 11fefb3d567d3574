#include "decoy/checks.hpp"

#include <algorithm>
#include <cmath>

#include "decoy/challenger.hpp"
#include "decoy/datagen.hpp"
#include "decoy/model.hpp"
#include "decoy/rng.hpp"

namespace decoy {

GradCheckSummary run_grad_check_suite(int trials, double epsilon,
                                      std::uint64_t seed) {
    GradCheckSummary summary;
    summary.trials = trials;
    Rng rng(derive_seed(seed, "gradcheck_suite"));
    for (int trial = 0; trial < trials; ++trial) {
        int d = 1 + static_cast<int>(rng.uniform_int(4));
        int n_hidden = static_cast<int>(rng.uniform_int(3));
        std::vector<int> widths;
        for (int i = 0; i < n_hidden; ++i)
            widths.push_back(2 + static_cast<int>(rng.uniform_int(7)));
        ClassifierParams params =
            init_params(d, widths, Role::AdversaryTheta, rng.next_u64());
        int m = 3 + static_cast<int>(rng.uniform_int(6));
        std::vector<Example> batch;
        for (int i = 0; i < m; ++i) {
            Example e;
            e.x.resize(static_cast<size_t>(d));
            for (double& v : e.x) v = rng.normal();
            e.y = static_cast<int>(rng.uniform_int(2));
            batch.push_back(std::move(e));
        }
        double err = grad_check(params, batch, epsilon);
        summary.max_rel_error = std::max(summary.max_rel_error, err);
    }
    return summary;
}

namespace {

void scale_params(ClassifierParams& params, double factor) {
    for (Layer& l : params.layers) {
        for (double& w : l.w) w *= factor;
        for (double& b : l.b) b *= factor;
    }
}

}  // namespace

Prop1Summary run_prop1_suite(int instances, std::uint64_t seed) {
    Prop1Summary summary;
    summary.instances = instances;
    Rng rng(derive_seed(seed, "prop1_suite"));

    for (int inst = 0; inst < instances; ++inst) {
        int K = 1 + static_cast<int>(rng.uniform_int(4));
        int N = 5 + static_cast<int>(rng.uniform_int(8));
        if (N < K + 2) N = K + 2;

        // Well-separated probabilities keep the instance away from ties.
        std::vector<double> probs(static_cast<size_t>(N));
        for (int i = 0; i < N; ++i)
            probs[static_cast<size_t>(i)] =
                0.1 + 0.8 * static_cast<double>(i) / (N - 1) +
                0.005 * (rng.uniform() - 0.5);
        rng.shuffle(probs);

        // One-hot features with a linear scorer make g(x_i; phi) = w_i: the
        // relaxation over the raw score vector itself, with no coupling
        // between posts. From a uniform start the ascent can never swap a
        // correctly ordered pair (at g_i = g_j the drift is
        // alpha (L_i - L_j) > 0), so the top-K set settles exactly.
        std::vector<Post> posts(static_cast<size_t>(N));
        for (int i = 0; i < N; ++i) {
            Post& p = posts[static_cast<size_t>(i)];
            p.id = static_cast<PostId>(i + 1);
            p.features.assign(static_cast<size_t>(N), 0.0);
            p.features[static_cast<size_t>(i)] = 1.0;
            p.true_label = 0;
            p.origin = Origin::Volunteered;
        }

        BruteForceResult brute = brute_force_discrete_optimum(probs, K);

        ClassifierParams phi =
            init_params(N, {}, Role::ChallengerPhi, rng.next_u64());
        scale_params(phi, 0.0);  // uniform softmax start
        TrainHyper hyper;
        hyper.learning_rate = 1.0;
        hyper.epochs = 6000;
        D2TrainResult trained =
            train_d2(phi, posts, probs, hyper, rng.next_u64());

        std::vector<size_t> idx(posts.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::vector<double> g(posts.size());
        for (size_t i = 0; i < posts.size(); ++i)
            g[i] = forward_score(trained.phi, posts[i].features);
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            if (g[a] != g[b]) return g[a] > g[b];
            return posts[a].id < posts[b].id;
        });

        bool sets_equal = true;
        for (int i = 0; i < K; ++i)
            if (!brute.w[idx[static_cast<size_t>(i)]]) sets_equal = false;
        if (sets_equal) summary.set_matches += 1;

        if (K == 1) {
            summary.k1_instances += 1;
            double rel = std::fabs(brute.value - trained.final_value) /
                         std::max(1e-12, std::fabs(brute.value));
            summary.worst_value_rel_err =
                std::max(summary.worst_value_rel_err, rel);
            if (rel <= 1e-3) summary.k1_value_matches += 1;
        }
    }
    return summary;
}

Prop3Summary run_prop3_suite(int accepted_count, std::uint64_t seed) {
    const std::vector<double> m1{0.25, 0.25};
    const double log_m = 2.5;
    const double M = std::exp(log_m);

    auto proposal = [](Rng& rng) {
        return std::vector<double>{rng.normal(), rng.normal()};
    };
    // Equal-variance Gaussians: p1/p0 = exp(m1 . x - |m1|^2 / 2).
    auto ratio = [&m1](const std::vector<double>& x) {
        double dot = m1[0] * x[0] + m1[1] * x[1];
        double norm_sq = m1[0] * m1[0] + m1[1] * m1[1];
        return std::exp(dot - 0.5 * norm_sq);
    };

    RejectionResult rej = rejection_sample(proposal, ratio, M, accepted_count,
                                           derive_seed(seed, "prop3"));

    Prop3Summary summary;
    summary.draws = rej.total_draws;
    summary.accepted = static_cast<long>(rej.samples.size());
    summary.acceptance_rate = rej.acceptance_rate;
    summary.expected_rate = 1.0 / M;

    // 10x10 grid over [-4,4]^2 plus one catch-all bin for the tails.
    const int nb = 10;
    const double lo = -4.0, hi = 4.0;
    const double step = (hi - lo) / nb;
    std::vector<double> observed(static_cast<size_t>(nb) * nb + 1, 0.0);
    for (const auto& s : rej.samples) {
        int ix = static_cast<int>(std::floor((s[0] - lo) / step));
        int iy = static_cast<int>(std::floor((s[1] - lo) / step));
        if (ix < 0 || ix >= nb || iy < 0 || iy >= nb)
            observed.back() += 1.0;
        else
            observed[static_cast<size_t>(iy) * nb + ix] += 1.0;
    }

    std::vector<double> expected(observed.size(), 0.0);
    double inside = 0.0;
    for (int iy = 0; iy < nb; ++iy) {
        double py = normal_cdf(lo + (iy + 1) * step - m1[1]) -
                    normal_cdf(lo + iy * step - m1[1]);
        for (int ix = 0; ix < nb; ++ix) {
            double px = normal_cdf(lo + (ix + 1) * step - m1[0]) -
                        normal_cdf(lo + ix * step - m1[0]);
            double cell = static_cast<double>(accepted_count) * px * py;
            expected[static_cast<size_t>(iy) * nb + ix] = cell;
            inside += cell;
        }
    }
    expected.back() = static_cast<double>(accepted_count) - inside;

    summary.gof = chi_squared_gof(observed, expected, 5.0);
    return summary;
}

}  // namespace decoy
