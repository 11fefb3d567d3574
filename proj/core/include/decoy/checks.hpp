#pragma once

#include <cstdint>
#include <string>

#include "decoy/stats.hpp"

namespace decoy {

// Reusable property-check suites behind both the CLI verbs and the
// acceptance harness, so the pass/fail logic lives in exactly one place.

struct GradCheckSummary {
    int trials = 0;
    double max_rel_error = 0.0;
    double threshold = 1e-4;
    bool passed() const { return max_rel_error < threshold; }
};

/// Random small architectures and batches; epsilon-step central differences
/// against the analytic gradient.
GradCheckSummary run_grad_check_suite(int trials, double epsilon,
                                      std::uint64_t seed);

struct Prop1Summary {
    int instances = 0;
    int set_matches = 0;        // top-K by g equals the brute-force set
    int k1_instances = 0;       // instances with K = 1
    int k1_value_matches = 0;   // max V~ within 1e-3 relative of V*
    double worst_value_rel_err = 0.0;  // over K = 1 instances
    bool passed() const {
        return instances > 0 && set_matches == instances &&
               k1_value_matches == k1_instances;
    }
};

/// Random (N <= 12, K <= 4) instances: converged softmax selection must
/// reproduce the exhaustive discrete optimum.
Prop1Summary run_prop1_suite(int instances, std::uint64_t seed);

struct Prop3Summary {
    long draws = 0;
    long accepted = 0;
    double acceptance_rate = 0.0;
    double expected_rate = 0.0;  // 1/M
    double rate_tolerance = 0.02;
    ChiSquaredResult gof;
    double alpha = 0.01;
    bool rate_ok() const {
        return std::fabs(acceptance_rate - expected_rate) <= rate_tolerance;
    }
    bool gof_ok() const { return gof.p_value >= alpha; }
    bool passed() const { return rate_ok() && gof_ok(); }
};

/// 2-D Gaussian target sampled through the proposal with envelope M;
/// acceptance-rate check plus a 10x10-grid goodness-of-fit test against the
/// analytic target.
Prop3Summary run_prop3_suite(int accepted_count, std::uint64_t seed);

}  // namespace decoy
