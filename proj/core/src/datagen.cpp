#include "decoy/datagen.hpp"

#include <cmath>
#include <cstdio>

namespace decoy {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> gaussian_point(const std::vector<double>& mean,
                                   double sigma, Rng& rng) {
    std::vector<double> x(mean.size());
    for (size_t i = 0; i < mean.size(); ++i) x[i] = mean[i] + sigma * rng.normal();
    return x;
}

double iso_gaussian_pdf(const std::vector<double>& x,
                        const std::vector<double>& mean, double sigma) {
    if (x.size() != mean.size())
        throw std::invalid_argument("iso_gaussian_pdf: dimension mismatch");
    double sq = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - mean[i];
        sq += d * d;
    }
    double dim = static_cast<double>(x.size());
    double norm = std::pow(2.0 * kPi * sigma * sigma, -0.5 * dim);
    return norm * std::exp(-sq / (2.0 * sigma * sigma));
}

std::vector<double> moon_point(int label, double noise, Rng& rng) {
    double t = rng.uniform() * kPi;
    std::vector<double> x(2);
    if (label == 0) {
        x[0] = std::cos(t);
        x[1] = std::sin(t);
    } else {
        x[0] = 1.0 - std::cos(t);
        x[1] = 0.5 - std::sin(t);
    }
    if (noise > 0.0) {
        x[0] += noise * rng.normal();
        x[1] += noise * rng.normal();
    }
    return x;
}

}  // namespace

std::vector<LabeledPoint> gen_two_moons(int n, double noise, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_two_moons: n must be >= 1");
    if (noise < 0.0) throw std::invalid_argument("gen_two_moons: noise must be >= 0");
    Rng rng(derive_seed(seed, "two_moons"));
    int n0 = n - n / 2;
    std::vector<LabeledPoint> out;
    out.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        int label = i < n0 ? 0 : 1;
        out.push_back({moon_point(label, noise, rng), label});
    }
    return out;
}

std::vector<LabeledPoint> gen_gaussians(int n,
                                        const std::vector<double>& mean0,
                                        const std::vector<double>& mean1,
                                        double sigma,
                                        std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_gaussians: n must be >= 1");
    if (sigma <= 0.0) throw std::invalid_argument("gen_gaussians: sigma must be > 0");
    if (mean0.size() != mean1.size() || mean0.empty())
        throw std::invalid_argument("gen_gaussians: bad means");
    Rng rng(derive_seed(seed, "gaussians"));
    int n0 = n - n / 2;
    std::vector<LabeledPoint> out;
    out.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        int label = i < n0 ? 0 : 1;
        const auto& mean = label == 0 ? mean0 : mean1;
        out.push_back({gaussian_point(mean, sigma, rng), label});
    }
    return out;
}

std::vector<double> sample_features(const ScenarioSpec& spec, int label, Rng& rng) {
    if (label != 0 && label != 1)
        throw std::invalid_argument("sample_features: label must be 0/1");
    switch (spec.scenario) {
        case Scenario::NonOverlapping:
            if (spec.d != 2)
                throw std::invalid_argument("two-moons scenario requires d = 2");
            return moon_point(label, spec.moon_noise, rng);
        case Scenario::FullyOverlapping: {
            const auto& mean = label == 0 ? spec.mean0 : spec.mean1;
            if (static_cast<int>(mean.size()) != spec.d)
                throw std::invalid_argument("scenario mean dimension mismatch");
            return gaussian_point(mean, spec.sigma, rng);
        }
        case Scenario::PartialOverlap: {
            double w = label == 0 ? spec.overlap0 : spec.overlap1;
            const auto& base = label == 0 ? spec.mu_a : spec.mu_b;
            const auto& mean = rng.uniform() < w ? spec.mu_shared : base;
            if (static_cast<int>(mean.size()) != spec.d)
                throw std::invalid_argument("scenario mean dimension mismatch");
            return gaussian_point(mean, spec.mix_sigma, rng);
        }
    }
    throw std::logic_error("unreachable");
}

double scenario_density(const ScenarioSpec& spec, int label,
                        const std::vector<double>& x) {
    switch (spec.scenario) {
        case Scenario::NonOverlapping:
            throw std::invalid_argument(
                "scenario_density: no closed form for the two-moons scenario");
        case Scenario::FullyOverlapping:
            return iso_gaussian_pdf(x, label == 0 ? spec.mean0 : spec.mean1,
                                    spec.sigma);
        case Scenario::PartialOverlap: {
            double w = label == 0 ? spec.overlap0 : spec.overlap1;
            const auto& base = label == 0 ? spec.mu_a : spec.mu_b;
            return (1.0 - w) * iso_gaussian_pdf(x, base, spec.mix_sigma) +
                   w * iso_gaussian_pdf(x, spec.mu_shared, spec.mix_sigma);
        }
    }
    throw std::logic_error("unreachable");
}

std::vector<IntervalLedger> build_stream(const ScenarioSpec& spec,
                                         const StreamPlan& plan) {
    if (plan.T < 1) throw std::invalid_argument("build_stream: T must be >= 1");
    auto check_len = [&](const std::vector<int>& v, const char* what) {
        if (!v.empty() && static_cast<int>(v.size()) != plan.T)
            throw std::invalid_argument(std::string("build_stream: ") + what +
                                        " list length must equal T");
    };
    check_len(plan.damaging_per_interval, "damaging");
    check_len(plan.nondamaging_per_interval, "nondamaging");
    check_len(plan.volunteered_per_interval, "volunteered");

    Rng rng(derive_seed(plan.seed, "stream"));
    std::vector<IntervalLedger> stream;
    stream.reserve(static_cast<size_t>(plan.T));
    PostId next_id = 1;
    for (int t = 1; t <= plan.T; ++t) {
        IntervalLedger ledger;
        ledger.t = t;
        for (int i = 0; i < plan.damaging_at(t); ++i) {
            Post p;
            p.id = next_id++;
            p.features = sample_features(spec, 1, rng);
            p.true_label = 1;
            p.origin = Origin::UserDeletedDamaging;
            p.interval_created = t;
            p.interval_deleted = t;
            ledger.damaging.push_back(p);
            ledger.deleted.push_back(p);
        }
        for (int i = 0; i < plan.nondamaging_at(t); ++i) {
            Post p;
            p.id = next_id++;
            p.features = sample_features(spec, 0, rng);
            p.true_label = 0;
            p.origin = Origin::UserDeletedNonDamaging;
            p.interval_created = t;
            p.interval_deleted = t;
            ledger.deleted.push_back(p);
        }
        for (int i = 0; i < plan.volunteered_at(t); ++i) {
            Post p;
            p.id = next_id++;
            p.features = sample_features(spec, 0, rng);
            p.true_label = 0;
            p.origin = Origin::Volunteered;
            p.interval_created = t;
            ledger.volunteered_new.push_back(p);
        }
        stream.push_back(std::move(ledger));
    }
    return stream;
}

RejectionResult rejection_sample(
    const std::function<std::vector<double>(Rng&)>& proposal_draw,
    const std::function<double(const std::vector<double>&)>& density_ratio,
    double M, int count, std::uint64_t seed) {
    if (M < 1.0) throw std::invalid_argument("rejection_sample: M must be >= 1");
    if (count < 0) throw std::invalid_argument("rejection_sample: count must be >= 0");
    Rng rng(derive_seed(seed, "rejection"));
    RejectionResult result;
    result.samples.reserve(static_cast<size_t>(count));
    while (static_cast<int>(result.samples.size()) < count) {
        std::vector<double> x = proposal_draw(rng);
        ++result.total_draws;
        double r = density_ratio(x);
        if (!(r >= 0.0))
            throw std::invalid_argument("rejection_sample: negative density ratio");
        if (r > M)
            throw EnvelopeViolation("density ratio " + std::to_string(r) +
                                    " exceeds envelope M = " + std::to_string(M));
        double u = rng.uniform();
        if (u < r / M) result.samples.push_back(std::move(x));
    }
    result.acceptance_rate =
        result.total_draws > 0
            ? static_cast<double>(result.samples.size()) /
                  static_cast<double>(result.total_draws)
            : 0.0;
    return result;
}

std::string dump_stream(const std::vector<IntervalLedger>& stream) {
    std::string out;
    char buf[64];
    auto append_post = [&](const Post& p) {
        std::snprintf(buf, sizeof buf, "%llu %d ",
                      static_cast<unsigned long long>(p.id), p.interval_created);
        out += buf;
        if (p.interval_deleted) {
            std::snprintf(buf, sizeof buf, "%d", *p.interval_deleted);
            out += buf;
        } else {
            out += '-';
        }
        out += ' ';
        out += to_string(p.origin);
        std::snprintf(buf, sizeof buf, " %d", p.true_label);
        out += buf;
        for (double f : p.features) {
            std::snprintf(buf, sizeof buf, " %.17g", f);
            out += buf;
        }
        out += '\n';
    };
    for (const IntervalLedger& ledger : stream) {
        for (const Post& p : ledger.deleted) append_post(p);
        for (const Post& p : ledger.volunteered_new) append_post(p);
    }
    return out;
}

}  // namespace decoy
