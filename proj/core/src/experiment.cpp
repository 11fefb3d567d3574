#include "decoy/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "decoy/engine.hpp"

namespace decoy {

void ExperimentSpec::validate() const {
    base.validate();
    if (ks.empty() || adversary_modes.empty() || challenger_modes.empty() ||
        seeds.empty())
        throw std::invalid_argument("experiment: every sweep axis needs a value");
    for (int k : ks)
        if (k < 0) throw std::invalid_argument("experiment: k must be >= 0");
    std::unordered_set<std::uint64_t> distinct(seeds.begin(), seeds.end());
    if (distinct.size() != seeds.size())
        throw std::invalid_argument("experiment: seeds must be distinct");
}

size_t ExperimentSpec::cell_count() const {
    return ks.size() * adversary_modes.size() * challenger_modes.size() *
           seeds.size();
}

std::string cell_run_id(const GameConfig& config) {
    std::string id = to_string(config.scenario.scenario);
    id += '_';
    id += to_string(config.adversary_mode);
    id += '_';
    id += to_string(config.challenger_mode);
    id += "_k" + std::to_string(config.k);
    id += "_seed" + std::to_string(config.seed);
    return id;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    std::filesystem::create_directories(spec.out_dir);

    std::vector<GameConfig> cells;
    for (AdversaryMode am : spec.adversary_modes)
        for (ChallengerMode cm : spec.challenger_modes)
            for (int k : spec.ks)
                for (std::uint64_t seed : spec.seeds) {
                    GameConfig c = spec.base;
                    c.adversary_mode = am;
                    c.challenger_mode = cm;
                    c.k = k;
                    c.seed = seed;
                    c.validate();
                    cells.push_back(std::move(c));
                }

    std::vector<std::string> csv_texts(cells.size());
    std::atomic<size_t> next{0};
    unsigned hw = std::thread::hardware_concurrency();
    size_t n_threads = spec.threads > 0 ? static_cast<size_t>(spec.threads)
                                        : (hw ? hw : 2);
    n_threads = std::min(n_threads, cells.size());

    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= cells.size() || failed.load()) return;
            try {
                GameTrace trace = run_game(cells[i]);
                csv_texts[i] = trace_to_csv(trace, cell_run_id(cells[i]));
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = e.what();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    for (size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    if (failed.load())
        throw std::runtime_error("experiment cell failed: " + first_error);

    ExperimentResult result;
    for (size_t i = 0; i < cells.size(); ++i) {
        std::string path = spec.out_dir + "/" + cell_run_id(cells[i]) + ".csv";
        write_text_file(path, csv_texts[i]);
        result.cell_files.push_back(path);
        for (CsvRow& row : parse_trace_csv(csv_texts[i]))
            result.rows.push_back(std::move(row));
    }
    result.aggregate = aggregate_rows(result.rows);
    result.aggregate_file = spec.out_dir + "/aggregate.csv";
    write_text_file(result.aggregate_file, aggregate_to_csv(result.aggregate));
    return result;
}

}  // namespace decoy
