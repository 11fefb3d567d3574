#pragma once

#include <vector>

#include "decoy/types.hpp"

namespace decoy {

/// 2 P R / (P + R); 0 when the denominator is 0.
double f_score(double precision, double recall);

/// Confusion counts plus derived rates for label 1 as the positive class.
/// Any zero denominator yields 0 for the affected rate.
Metrics compute_metrics(const std::vector<int>& true_labels,
                        const std::vector<int>& predicted_labels);

}  // namespace decoy
