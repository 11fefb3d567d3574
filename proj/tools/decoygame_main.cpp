#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "decoy/checks.hpp"
#include "decoy/config.hpp"
#include "decoy/datagen.hpp"
#include "decoy/engine.hpp"
#include "decoy/experiment.hpp"
#include "decoy/report.hpp"

namespace {

struct ConfigSource {
    std::string config_path;
    std::string preset;

    void attach(CLI::App* cmd) {
        auto* c = cmd->add_option("--config", config_path,
                                  "Config file (key = value with [sections])");
        auto* p = cmd->add_option("--preset", preset, "Named preset")
                      ->check(CLI::IsMember(decoy::preset_names()));
        c->excludes(p);
    }

    decoy::GameConfig resolve() const {
        if (!config_path.empty()) return decoy::load_config_file(config_path);
        if (!preset.empty()) return decoy::preset_config(preset);
        return decoy::preset_config("partial_overlap");
    }
};

struct Overrides {
    int T = -1;
    int k = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string adversary;
    std::string challenger;

    void attach(CLI::App* cmd) {
        cmd->add_option("-T,--intervals", T, "Number of intervals");
        cmd->add_option("-k,--decoys-per-damaging", k, "Decoys per damaging deletion");
        cmd->add_option("--seed", seed, "Master seed")
            ->each([this](const std::string&) { seed_set = true; });
        cmd->add_option("--adversary", adversary, "random|static|adaptive");
        cmd->add_option("--challenger", challenger,
                        "none|random|oracle|d2|rejection");
    }

    void apply(decoy::GameConfig& config) const {
        if (T > 0) config.T = T;
        if (k >= 0) config.k = k;
        if (seed_set) config.seed = seed;
        if (!adversary.empty())
            config.adversary_mode = decoy::adversary_mode_from_string(adversary);
        if (!challenger.empty())
            config.challenger_mode = decoy::challenger_mode_from_string(challenger);
        config.validate();
    }
};

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::string cur;
    for (char ch : text + ",") {
        if (ch == ',') {
            if (!cur.empty()) seeds.push_back(std::stoull(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return seeds;
}

int cmd_run(const ConfigSource& source, const Overrides& overrides,
            const std::string& out_path, const std::string& run_id) {
    decoy::GameConfig config = source.resolve();
    overrides.apply(config);
    decoy::GameTrace trace = decoy::run_game(config);
    std::string id = run_id.empty() ? decoy::cell_run_id(config) : run_id;
    std::string csv = decoy::trace_to_csv(trace, id);
    if (out_path.empty() || out_path == "-") {
        std::fputs(csv.c_str(), stdout);
    } else {
        decoy::write_text_file(out_path, csv);
        std::printf("wrote %s\n", out_path.c_str());
    }
    const decoy::IntervalRecord& last = trace.records.back();
    std::printf("final interval %d: precision=%.4f recall=%.4f f=%.4f\n",
                last.t, last.metrics.precision, last.metrics.recall,
                last.metrics.f_score);
    for (const std::string& note : trace.notes)
        std::fprintf(stderr, "note: %s\n", note.c_str());
    return 0;
}

int cmd_sweep(const ConfigSource& source, const std::string& out_dir,
              const std::string& ks_text, const std::string& adversaries_text,
              const std::string& challengers_text, const std::string& seeds_text,
              int threads) {
    decoy::ExperimentSpec spec;
    spec.base = source.resolve();
    spec.out_dir = out_dir;
    spec.threads = threads;
    if (!ks_text.empty()) {
        spec.ks.clear();
        for (std::uint64_t v : parse_seed_list(ks_text))
            spec.ks.push_back(static_cast<int>(v));
    }
    if (!seeds_text.empty()) spec.seeds = parse_seed_list(seeds_text);
    if (!adversaries_text.empty()) {
        spec.adversary_modes.clear();
        std::string cur;
        for (char ch : adversaries_text + ",") {
            if (ch == ',') {
                if (!cur.empty())
                    spec.adversary_modes.push_back(
                        decoy::adversary_mode_from_string(cur));
                cur.clear();
            } else cur += ch;
        }
    }
    if (!challengers_text.empty()) {
        spec.challenger_modes.clear();
        std::string cur;
        for (char ch : challengers_text + ",") {
            if (ch == ',') {
                if (!cur.empty())
                    spec.challenger_modes.push_back(
                        decoy::challenger_mode_from_string(cur));
                cur.clear();
            } else cur += ch;
        }
    }
    decoy::ExperimentResult result = decoy::run_experiment(spec);
    std::printf("wrote %zu cell files and %s\n", result.cell_files.size(),
                result.aggregate_file.c_str());
    return 0;
}

int cmd_plot_boundary(const ConfigSource& source, const Overrides& overrides,
                      const std::string& out_path, int points) {
    decoy::GameConfig config = source.resolve();
    overrides.apply(config);
    if (config.d != 2) {
        std::fprintf(stderr, "plot-boundary requires d = 2\n");
        return 2;
    }
    decoy::GameTrace trace = decoy::run_game(config);

    std::vector<decoy::LabeledPoint> data;
    decoy::Rng rng(decoy::derive_seed(config.seed, "plot_dataset"));
    for (int i = 0; i < points; ++i) {
        int label = i < points / 2 ? 1 : 0;
        data.push_back({decoy::sample_features(config.scenario, label, rng), label});
    }
    decoy::BoundaryPlot plot = decoy::render_boundary_svg(trace.final_params, data);
    decoy::write_text_file(out_path, plot.svg);
    std::printf("wrote %s\n", out_path.c_str());
    if (plot.flat_model)
        std::fprintf(stderr, "warning: flat model, no decision boundary on the grid\n");
    return 0;
}

int cmd_gradcheck(int trials, double epsilon, std::uint64_t seed) {
    decoy::GradCheckSummary s = decoy::run_grad_check_suite(trials, epsilon, seed);
    std::printf("gradcheck: %d trials, max relative error %.3g (threshold %.3g)\n",
                s.trials, s.max_rel_error, s.threshold);
    return s.passed() ? 0 : 1;
}

int cmd_prop1(int instances, std::uint64_t seed) {
    decoy::Prop1Summary s = decoy::run_prop1_suite(instances, seed);
    std::printf("prop1: %d instances, %d set matches, %d/%d K=1 value matches, "
                "worst K=1 relative error %.3g\n",
                s.instances, s.set_matches, s.k1_value_matches, s.k1_instances,
                s.worst_value_rel_err);
    return s.passed() ? 0 : 1;
}

int cmd_prop3(int accepted, std::uint64_t seed) {
    decoy::Prop3Summary s = decoy::run_prop3_suite(accepted, seed);
    std::printf("prop3: %ld draws, acceptance %.4f (expected %.4f +- %.2f), "
                "chi2 p-value %.4f (alpha %.2f, %d bins)\n",
                s.draws, s.acceptance_rate, s.expected_rate, s.rate_tolerance,
                s.gof.p_value, s.alpha, s.gof.bins_used);
    return s.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deceptive-deletion game simulator"};
    app.require_subcommand(1);

    ConfigSource run_source, sweep_source, plot_source;
    Overrides run_overrides, plot_overrides;

    auto* run = app.add_subcommand("run", "Play one game and emit its CSV trace");
    run_source.attach(run);
    run_overrides.attach(run);
    std::string run_out, run_id;
    run->add_option("-o,--out", run_out, "Output CSV path ('-' for stdout)");
    run->add_option("--run-id", run_id, "Run id column value");

    auto* sweep = app.add_subcommand("sweep", "Run a seed/mode/k grid");
    sweep_source.attach(sweep);
    std::string sweep_dir = "sweep_out", sweep_ks, sweep_advs, sweep_chals,
                sweep_seeds;
    int sweep_threads = 0;
    sweep->add_option("--out-dir", sweep_dir, "Output directory");
    sweep->add_option("--ks", sweep_ks, "Comma list of k values");
    sweep->add_option("--adversaries", sweep_advs, "Comma list of adversary modes");
    sweep->add_option("--challengers", sweep_chals, "Comma list of challenger modes");
    sweep->add_option("--seeds", sweep_seeds, "Comma list of seeds");
    sweep->add_option("--threads", sweep_threads, "Worker threads (0 = auto)");

    auto* plot = app.add_subcommand("plot-boundary",
                                    "Play one game, plot the final boundary");
    plot_source.attach(plot);
    plot_overrides.attach(plot);
    std::string plot_out = "boundary.svg";
    int plot_points = 300;
    plot->add_option("-o,--out", plot_out, "Output SVG path");
    plot->add_option("--points", plot_points, "Scatter sample size");

    auto* gradcheck = app.add_subcommand("gradcheck",
                                         "Finite-difference gradient check");
    int gc_trials = 100;
    double gc_epsilon = 1e-5;
    std::uint64_t gc_seed = 1;
    gradcheck->add_option("--trials", gc_trials, "Random draws");
    gradcheck->add_option("--epsilon", gc_epsilon, "Finite-difference step");
    gradcheck->add_option("--seed", gc_seed, "Suite seed");

    auto* prop1 = app.add_subcommand(
        "prop1-check", "Softmax selection vs exhaustive discrete optimum");
    int p1_instances = 100;
    std::uint64_t p1_seed = 1;
    prop1->add_option("--instances", p1_instances, "Random instances");
    prop1->add_option("--seed", p1_seed, "Suite seed");

    auto* prop3 = app.add_subcommand("prop3-check",
                                     "Rejection-sampler fidelity checks");
    int p3_accepted = 100000;
    std::uint64_t p3_seed = 1;
    prop3->add_option("--samples", p3_accepted, "Accepted sample count");
    prop3->add_option("--seed", p3_seed, "Suite seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_source, run_overrides, run_out, run_id);
        if (sweep->parsed())
            return cmd_sweep(sweep_source, sweep_dir, sweep_ks, sweep_advs,
                             sweep_chals, sweep_seeds, sweep_threads);
        if (plot->parsed())
            return cmd_plot_boundary(plot_source, plot_overrides, plot_out,
                                     plot_points);
        if (gradcheck->parsed())
            return cmd_gradcheck(gc_trials, gc_epsilon, gc_seed);
        if (prop1->parsed()) return cmd_prop1(p1_instances, p1_seed);
        if (prop3->parsed()) return cmd_prop3(p3_accepted, p3_seed);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
