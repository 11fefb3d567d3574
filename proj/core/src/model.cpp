#include "decoy/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace decoy {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double clamp_prob(double a) {
    return std::min(1.0 - kProbEps, std::max(kProbEps, a));
}

// Forward pass keeping post-activation values per layer; activations[0] = x,
// activations.back() = {logit}.
std::vector<std::vector<double>> forward_trace(const ClassifierParams& params,
                                               const std::vector<double>& x) {
    if (params.layers.empty()) throw std::invalid_argument("model has no layers");
    if (static_cast<int>(x.size()) != params.input_dim())
        throw std::invalid_argument("feature dimension mismatch");
    std::vector<std::vector<double>> acts;
    acts.reserve(params.layers.size() + 1);
    acts.push_back(x);
    for (size_t l = 0; l < params.layers.size(); ++l) {
        const Layer& layer = params.layers[l];
        const std::vector<double>& in = acts.back();
        std::vector<double> out(static_cast<size_t>(layer.out));
        for (int i = 0; i < layer.out; ++i) {
            double z = layer.b[static_cast<size_t>(i)];
            const double* wrow = &layer.w[static_cast<size_t>(i) * layer.in];
            for (int j = 0; j < layer.in; ++j) z += wrow[j] * in[static_cast<size_t>(j)];
            bool last = l + 1 == params.layers.size();
            out[static_cast<size_t>(i)] = last ? z : std::tanh(z);
        }
        acts.push_back(std::move(out));
    }
    return acts;
}

std::vector<size_t> class_indices(const std::vector<Example>& batch, int y) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < batch.size(); ++i)
        if (batch[i].y == y) idx.push_back(i);
    return idx;
}

}  // namespace

size_t ClassifierParams::coord_count() const {
    size_t n = 0;
    for (const Layer& l : layers) n += l.w.size() + l.b.size();
    return n;
}

ClassifierParams init_params(int input_dim, const std::vector<int>& hidden,
                             Role role, std::uint64_t seed) {
    if (input_dim < 1) throw std::invalid_argument("init_params: input_dim must be >= 1");
    for (int h : hidden)
        if (h < 1) throw std::invalid_argument("init_params: hidden width must be >= 1");
    Rng rng(derive_seed(seed, "init_params"));
    ClassifierParams params;
    params.role = role;
    std::vector<int> sizes;
    sizes.push_back(input_dim);
    for (int h : hidden) sizes.push_back(h);
    sizes.push_back(1);
    for (size_t l = 0; l + 1 < sizes.size(); ++l) {
        Layer layer;
        layer.in = sizes[l];
        layer.out = sizes[l + 1];
        layer.w.resize(static_cast<size_t>(layer.in) * layer.out);
        layer.b.assign(static_cast<size_t>(layer.out), 0.0);
        double scale = 1.0 / std::sqrt(static_cast<double>(layer.in));
        for (double& w : layer.w) w = scale * rng.normal();
        params.layers.push_back(std::move(layer));
    }
    return params;
}

bool all_finite(const ClassifierParams& params) {
    for (const Layer& l : params.layers) {
        for (double v : l.w)
            if (!std::isfinite(v)) return false;
        for (double v : l.b)
            if (!std::isfinite(v)) return false;
    }
    return true;
}

bool same_params(const ClassifierParams& a, const ClassifierParams& b) {
    if (a.role != b.role || a.layers.size() != b.layers.size()) return false;
    for (size_t l = 0; l < a.layers.size(); ++l) {
        const Layer& la = a.layers[l];
        const Layer& lb = b.layers[l];
        if (la.in != lb.in || la.out != lb.out) return false;
        if (la.w != lb.w || la.b != lb.b) return false;
    }
    return true;
}

double forward_logit(const ClassifierParams& params, const std::vector<double>& x) {
    return forward_trace(params, x).back()[0];
}

double forward_prob(const ClassifierParams& params, const std::vector<double>& x) {
    if (params.role != Role::AdversaryTheta)
        throw std::invalid_argument("forward_prob requires an adversary model");
    return clamp_prob(sigmoid(forward_logit(params, x)));
}

double forward_score(const ClassifierParams& params, const std::vector<double>& x) {
    if (params.role != Role::ChallengerPhi)
        throw std::invalid_argument("forward_score requires a challenger model");
    return forward_logit(params, x);
}

double nll_loss(const ClassifierParams& params, const std::vector<Example>& batch) {
    if (batch.empty()) throw std::invalid_argument("nll_loss: empty batch");
    double loss = 0.0;
    for (const Example& e : batch) {
        double a = clamp_prob(sigmoid(forward_logit(params, e.x)));
        loss += e.y == 1 ? -std::log(a) : -std::log(1.0 - a);
    }
    return loss;
}

Grad zero_grad(const ClassifierParams& params) {
    Grad g;
    g.layers.reserve(params.layers.size());
    for (const Layer& l : params.layers) {
        Layer z;
        z.in = l.in;
        z.out = l.out;
        z.w.assign(l.w.size(), 0.0);
        z.b.assign(l.b.size(), 0.0);
        g.layers.push_back(std::move(z));
    }
    return g;
}

void accumulate_logit_grad(const ClassifierParams& params,
                           const std::vector<double>& x, double upstream,
                           Grad& grad) {
    if (grad.layers.size() != params.layers.size())
        throw std::invalid_argument("grad buffer shape mismatch");
    auto acts = forward_trace(params, x);
    // delta = dLoss/dz for the current layer, starting at the logit.
    std::vector<double> delta{upstream};
    for (size_t li = params.layers.size(); li-- > 0;) {
        const Layer& layer = params.layers[li];
        Layer& g = grad.layers[li];
        const std::vector<double>& in = acts[li];
        for (int i = 0; i < layer.out; ++i) {
            double d = delta[static_cast<size_t>(i)];
            g.b[static_cast<size_t>(i)] += d;
            double* grow = &g.w[static_cast<size_t>(i) * layer.in];
            for (int j = 0; j < layer.in; ++j) grow[j] += d * in[static_cast<size_t>(j)];
        }
        if (li == 0) break;
        std::vector<double> prev(static_cast<size_t>(layer.in), 0.0);
        for (int j = 0; j < layer.in; ++j) {
            double s = 0.0;
            for (int i = 0; i < layer.out; ++i)
                s += layer.w[static_cast<size_t>(i) * layer.in + j] *
                     delta[static_cast<size_t>(i)];
            double a = acts[li][static_cast<size_t>(j)];
            prev[static_cast<size_t>(j)] = s * (1.0 - a * a);  // tanh'
        }
        delta = std::move(prev);
    }
}

Grad nll_grad(const ClassifierParams& params, const std::vector<Example>& batch) {
    if (batch.empty()) throw std::invalid_argument("nll_grad: empty batch");
    Grad g = zero_grad(params);
    for (const Example& e : batch) {
        double a = clamp_prob(sigmoid(forward_logit(params, e.x)));
        accumulate_logit_grad(params, e.x, a - static_cast<double>(e.y), g);
    }
    return g;
}

void apply_update(ClassifierParams& params, const Grad& grad, double scale) {
    if (grad.layers.size() != params.layers.size())
        throw std::invalid_argument("grad shape mismatch");
    for (size_t l = 0; l < params.layers.size(); ++l) {
        Layer& p = params.layers[l];
        const Layer& g = grad.layers[l];
        for (size_t i = 0; i < p.w.size(); ++i) p.w[i] += scale * g.w[i];
        for (size_t i = 0; i < p.b.size(); ++i) p.b[i] += scale * g.b[i];
    }
}

TrainResult train(const ClassifierParams& params, const std::vector<Example>& batch,
                  const TrainHyper& hyper, std::uint64_t seed) {
    if (batch.empty()) throw std::invalid_argument("train: empty batch");
    if (hyper.learning_rate < 0.0)
        throw std::invalid_argument("train: negative learning rate");
    if (hyper.batch_size < 1)
        throw std::invalid_argument("train: batch_size must be >= 1");

    Rng rng(derive_seed(seed, "train"));
    TrainResult result;
    result.params = params;
    result.initial_loss = nll_loss(params, batch);

    std::vector<size_t> pos = class_indices(batch, 1);
    std::vector<size_t> neg = class_indices(batch, 0);
    bool balanced = hyper.balance_batches;
    if (balanced && (pos.empty() || neg.empty())) {
        balanced = false;
        result.fell_back_unbalanced = true;
    }

    ClassifierParams current = params;
    ClassifierParams best = params;
    double best_loss = result.initial_loss;

    int steps_per_epoch =
        std::max<int>(1, static_cast<int>(batch.size()) / hyper.batch_size);
    int half = std::max(1, hyper.batch_size / 2);

    std::vector<Example> mini;
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        for (int step = 0; step < steps_per_epoch; ++step) {
            mini.clear();
            if (balanced) {
                for (int i = 0; i < half; ++i)
                    mini.push_back(batch[pos[rng.uniform_int(pos.size())]]);
                for (int i = 0; i < half; ++i)
                    mini.push_back(batch[neg[rng.uniform_int(neg.size())]]);
            } else {
                for (int i = 0; i < hyper.batch_size; ++i)
                    mini.push_back(batch[rng.uniform_int(batch.size())]);
            }
            Grad g = nll_grad(current, mini);
            apply_update(current, g,
                         -hyper.learning_rate / static_cast<double>(mini.size()));
        }
        if (!all_finite(current))
            throw std::runtime_error("train: parameters diverged to non-finite values");
        double loss = nll_loss(current, batch);
        if (loss < best_loss) {
            best_loss = loss;
            best = current;
        }
    }

    result.params = std::move(best);
    result.final_loss = best_loss;
    return result;
}

double grad_check(const ClassifierParams& params, const std::vector<Example>& batch,
                  double epsilon) {
    if (epsilon < 1e-7 || epsilon > 1e-3)
        throw std::invalid_argument("grad_check: epsilon out of range");
    Grad analytic = nll_grad(params, batch);
    ClassifierParams probe = params;
    double max_rel = 0.0;
    for (size_t l = 0; l < probe.layers.size(); ++l) {
        Layer& layer = probe.layers[l];
        auto check_coord = [&](double& coord, double g_analytic) {
            double saved = coord;
            coord = saved + epsilon;
            double up = nll_loss(probe, batch);
            coord = saved - epsilon;
            double down = nll_loss(probe, batch);
            coord = saved;
            double g_fd = (up - down) / (2.0 * epsilon);
            double rel = std::fabs(g_analytic - g_fd) /
                         std::max(1e-12, std::fabs(g_analytic) + std::fabs(g_fd));
            max_rel = std::max(max_rel, rel);
        };
        for (size_t i = 0; i < layer.w.size(); ++i)
            check_coord(layer.w[i], analytic.layers[l].w[i]);
        for (size_t i = 0; i < layer.b.size(); ++i)
            check_coord(layer.b[i], analytic.layers[l].b[i]);
    }
    return max_rel;
}

std::string save_params(const ClassifierParams& params) {
    std::string out = "decoy-model 1\n";
    out += params.role == Role::AdversaryTheta ? "adversary" : "challenger";
    char buf[64];
    std::snprintf(buf, sizeof buf, " %zu\n", params.layers.size());
    out += buf;
    for (const Layer& l : params.layers) {
        std::snprintf(buf, sizeof buf, "%d %d\n", l.in, l.out);
        out += buf;
        for (size_t i = 0; i < l.w.size(); ++i) {
            std::snprintf(buf, sizeof buf, i + 1 == l.w.size() ? "%.17g\n" : "%.17g ",
                          l.w[i]);
            out += buf;
        }
        for (size_t i = 0; i < l.b.size(); ++i) {
            std::snprintf(buf, sizeof buf, i + 1 == l.b.size() ? "%.17g\n" : "%.17g ",
                          l.b[i]);
            out += buf;
        }
    }
    return out;
}

ClassifierParams load_params(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "decoy-model" || version != 1)
        throw std::invalid_argument("load_params: bad header");
    std::string role;
    size_t n_layers = 0;
    in >> role >> n_layers;
    ClassifierParams params;
    if (role == "adversary") params.role = Role::AdversaryTheta;
    else if (role == "challenger") params.role = Role::ChallengerPhi;
    else throw std::invalid_argument("load_params: bad role");
    for (size_t l = 0; l < n_layers; ++l) {
        Layer layer;
        in >> layer.in >> layer.out;
        if (!in || layer.in < 1 || layer.out < 1)
            throw std::invalid_argument("load_params: bad layer sizes");
        layer.w.resize(static_cast<size_t>(layer.in) * layer.out);
        layer.b.resize(static_cast<size_t>(layer.out));
        for (double& v : layer.w) in >> v;
        for (double& v : layer.b) in >> v;
        if (!in) throw std::invalid_argument("load_params: truncated weights");
        params.layers.push_back(std::move(layer));
    }
    return params;
}

}  // namespace decoy
