#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "decoy/rng.hpp"
#include "decoy/types.hpp"

namespace decoy {

inline constexpr double kProbEps = 1e-7;

enum class Role { AdversaryTheta, ChallengerPhi };

struct Layer {
    int in = 0;
    int out = 0;
    std::vector<double> w;  // row-major, out x in
    std::vector<double> b;  // out
};

// Feedforward net: input d -> hidden widths (tanh) -> one output logit.
// Value-semantic; architecture fixed at construction.
struct ClassifierParams {
    Role role = Role::AdversaryTheta;
    std::vector<Layer> layers;

    int input_dim() const { return layers.empty() ? 0 : layers.front().in; }
    size_t coord_count() const;
};

struct Example {
    std::vector<double> x;
    int y = 0;
};

// Gradient buffer with the same shapes as the parameters it was built from.
struct Grad {
    std::vector<Layer> layers;
};

ClassifierParams init_params(int input_dim, const std::vector<int>& hidden,
                             Role role, std::uint64_t seed);

bool all_finite(const ClassifierParams& params);
bool same_params(const ClassifierParams& a, const ClassifierParams& b);

/// Raw output logit; role-agnostic plumbing shared by both heads.
double forward_logit(const ClassifierParams& params, const std::vector<double>& x);

/// a(x; theta): sigmoid of the logit, clamped to [kProbEps, 1 - kProbEps].
/// Requires role AdversaryTheta.
double forward_prob(const ClassifierParams& params, const std::vector<double>& x);

/// g(x; phi): unnormalized score. Requires role ChallengerPhi.
double forward_score(const ClassifierParams& params, const std::vector<double>& x);

/// Sum over the batch of -y log a - (1-y) log(1-a), probabilities clamped.
double nll_loss(const ClassifierParams& params, const std::vector<Example>& batch);

Grad zero_grad(const ClassifierParams& params);

/// Backprop for one input with a caller-supplied dLoss/dlogit; accumulates
/// into `grad`. This is the shared kernel under both the NLL gradient and the
/// challenger's softmax objective.
void accumulate_logit_grad(const ClassifierParams& params,
                           const std::vector<double>& x, double upstream,
                           Grad& grad);

/// Gradient of nll_loss over the whole batch (sum, matching nll_loss).
Grad nll_grad(const ClassifierParams& params, const std::vector<Example>& batch);

/// params += scale * grad.
void apply_update(ClassifierParams& params, const Grad& grad, double scale);

struct TrainResult {
    ClassifierParams params;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    bool fell_back_unbalanced = false;
};

/// Mini-batch gradient descent on nll_loss. Keeps the best iterate seen
/// (measured on the full batch, initial parameters included), so the returned
/// loss never exceeds the starting loss. With balance_batches, each mini-batch
/// draws equally from both classes; a single-class batch falls back to
/// unbalanced draws and flags it.
TrainResult train(const ClassifierParams& params, const std::vector<Example>& batch,
                  const TrainHyper& hyper, std::uint64_t seed);

/// Max over coordinates of the relative error between the analytic gradient
/// of nll_loss and central finite differences with step epsilon.
double grad_check(const ClassifierParams& params, const std::vector<Example>& batch,
                  double epsilon);

/// Flat text format: role, layer count, sizes, then per-layer row-major
/// weights and biases.
std::string save_params(const ClassifierParams& params);
ClassifierParams load_params(const std::string& text);

}  // namespace decoy
