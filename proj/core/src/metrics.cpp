#include "decoy/metrics.hpp"

#include <stdexcept>

namespace decoy {

double f_score(double precision, double recall) {
    double denom = precision + recall;
    if (denom <= 0.0) return 0.0;
    return 2.0 * precision * recall / denom;
}

Metrics compute_metrics(const std::vector<int>& true_labels,
                        const std::vector<int>& predicted_labels) {
    if (true_labels.size() != predicted_labels.size())
        throw std::invalid_argument("compute_metrics: size mismatch");
    Metrics m;
    for (size_t i = 0; i < true_labels.size(); ++i) {
        int y = true_labels[i];
        int yhat = predicted_labels[i];
        if (y != 0 && y != 1) throw std::invalid_argument("labels must be 0/1");
        if (yhat != 0 && yhat != 1) throw std::invalid_argument("labels must be 0/1");
        if (y == 1 && yhat == 1) ++m.tp;
        else if (y == 0 && yhat == 1) ++m.fp;
        else if (y == 1 && yhat == 0) ++m.fn;
        else ++m.tn;
    }
    m.precision = (m.tp + m.fp > 0) ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn > 0) ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
    m.f_score = f_score(m.precision, m.recall);
    return m;
}

}  // namespace decoy
