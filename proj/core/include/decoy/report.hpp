#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "decoy/datagen.hpp"
#include "decoy/engine.hpp"
#include "decoy/model.hpp"

namespace decoy {

// One emitted CSV line. Column order is part of the file contract:
// run_id, seed, scenario, adversary_mode, challenger_mode, k, interval,
// tp, fp, fn, tn, precision, recall, f_score, pool_size, budget_spent,
// decoys_injected.
struct CsvRow {
    std::string run_id;
    std::uint64_t seed = 0;
    std::string scenario;
    std::string adversary_mode;
    std::string challenger_mode;
    int k = 0;
    int interval = 0;
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long tn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    long pool_size = 0;
    long budget_spent = 0;
    int decoys_injected = 0;
};

extern const char* const kCsvHeader;

/// Reals are printed with %.17g so emitted files round-trip exactly.
std::string trace_to_csv(const GameTrace& trace, const std::string& run_id);

std::vector<CsvRow> parse_trace_csv(const std::string& text);

struct AggregateRow {
    std::string scenario;
    std::string adversary_mode;
    std::string challenger_mode;
    int k = 0;
    int interval = 0;
    int n_seeds = 0;
    double mean_precision = 0.0;
    double mean_recall = 0.0;
    double mean_f = 0.0;
    double ci95_f = 0.0;  // 1.96 * sample std / sqrt(n)
};

std::vector<AggregateRow> aggregate_rows(const std::vector<CsvRow>& rows);

/// Columns: scenario, adversary_mode, challenger_mode, k, interval, n_seeds,
/// mean_precision, mean_recall, mean_f, ci95_f.
std::string aggregate_to_csv(const std::vector<AggregateRow>& rows);

struct BoundaryPlot {
    std::string svg;
    bool flat_model = false;  // no 0.5 level set anywhere on the grid
};

/// Scatter of the dataset plus the prob = 0.5 contour traced on a 200x200
/// grid by marching squares. Requires 2-D features.
BoundaryPlot render_boundary_svg(const ClassifierParams& params,
                                 const std::vector<LabeledPoint>& data);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace decoy
