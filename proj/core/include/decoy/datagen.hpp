#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "decoy/rng.hpp"
#include "decoy/types.hpp"

namespace decoy {

struct LabeledPoint {
    std::vector<double> features;
    int label = 0;
};

/// Two interleaved half-moons. Class 0 sits on the upper semicircle of
/// radius 1 around the origin, class 1 on the lower semicircle of radius 1
/// around (1, 0.5); both get isotropic Gaussian noise of scale `noise`.
/// Classes are balanced within one point.
std::vector<LabeledPoint> gen_two_moons(int n, double noise, std::uint64_t seed);

/// Two isotropic Gaussians N(mean_c, sigma^2 I); n points split evenly.
std::vector<LabeledPoint> gen_gaussians(int n,
                                        const std::vector<double>& mean0,
                                        const std::vector<double>& mean1,
                                        double sigma,
                                        std::uint64_t seed);

/// One draw from the class-conditional distribution of `spec`.
std::vector<double> sample_features(const ScenarioSpec& spec, int label, Rng& rng);

/// Class-conditional density p(x | label) under `spec`. Defined for the
/// Gaussian scenarios; throws for NonOverlapping (no closed form used here).
double scenario_density(const ScenarioSpec& spec, int label,
                        const std::vector<double>& x);

/// Per-interval ledgers with damaging deletions (class 1), non-damaging
/// deletions and volunteered posts (class 0). Ids are globally unique;
/// decoy and adversary-sample slots are left empty.
std::vector<IntervalLedger> build_stream(const ScenarioSpec& spec,
                                         const StreamPlan& plan);

struct EnvelopeViolation : std::runtime_error {
    explicit EnvelopeViolation(const std::string& what)
        : std::runtime_error(what) {}
};

struct RejectionResult {
    std::vector<std::vector<double>> samples;
    long total_draws = 0;
    double acceptance_rate = 0.0;
};

/// Accept-reject sampling: draw x from the proposal, accept with probability
/// ratio(x) / M. Accepted samples are distributed as the target when
/// M >= sup ratio. Throws EnvelopeViolation the moment a draw exhibits
/// ratio(x) > M.
RejectionResult rejection_sample(
    const std::function<std::vector<double>(Rng&)>& proposal_draw,
    const std::function<double(const std::vector<double>&)>& density_ratio,
    double M, int count, std::uint64_t seed);

/// Plain-text dump, one post per line:
/// id interval_created interval_deleted origin label f_1 ... f_d
/// interval_deleted prints "-" for posts never deleted.
std::string dump_stream(const std::vector<IntervalLedger>& stream);

}  // namespace decoy
