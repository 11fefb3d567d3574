#include "decoy/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace decoy {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": " + v);
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        int out = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return out;
    } catch (...) {
        throw std::invalid_argument("config: bad integer for " + key + ": " + v);
    }
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return out;
    } catch (...) {
        throw std::invalid_argument("config: bad real for " + key + ": " + v);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        unsigned long long out = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return out;
    } catch (...) {
        throw std::invalid_argument("config: bad seed for " + key + ": " + v);
    }
}

std::vector<double> parse_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw std::invalid_argument("config: empty list for " + key);
    return out;
}

std::vector<int> parse_ints(const std::string& key, const std::string& v) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::string t = trim(item);
        if (t.empty()) continue;
        out.push_back(parse_int(key, t));
    }
    return out;
}

std::string format_doubles(const std::vector<double>& v) {
    std::string out;
    char buf[40];
    for (size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        if (i) out += ",";
        out += buf;
    }
    return out;
}

std::string format_ints(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace

KvMap parse_kv_text(const std::string& text) {
    KvMap kv;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": empty key");
        std::string full = section.empty() ? key : section + "." + key;
        kv[full] = value;
    }
    return kv;
}

GameConfig config_from_kv(const KvMap& kv) {
    GameConfig c;
    for (const auto& [key, value] : kv) {
        if (key == "game.T") c.T = parse_int(key, value);
        else if (key == "game.k") c.k = parse_int(key, value);
        else if (key == "game.seed") c.seed = parse_u64(key, value);
        else if (key == "game.adversary_mode") c.adversary_mode = adversary_mode_from_string(value);
        else if (key == "game.challenger_mode") c.challenger_mode = challenger_mode_from_string(value);
        else if (key == "game.monitored_flag") c.monitored_flag = parse_bool(key, value);
        else if (key == "game.decision_threshold") c.decision_threshold = parse_double(key, value);
        else if (key == "game.prior_positive") c.prior_positive = parse_double(key, value);
        else if (key == "game.random_estimate_prior") c.random_estimate_prior = parse_bool(key, value);
        else if (key == "game.fresh_restart") c.fresh_restart = parse_bool(key, value);
        else if (key == "game.rejection_M") c.rejection_M = parse_double(key, value);
        else if (key == "game.p") c.p = parse_int(key, value);
        else if (key == "game.B_static") c.B_static = parse_int(key, value);
        else if (key == "game.B_adapt") c.B_adapt = parse_int(key, value);
        else if (key == "game.B_con") c.B_con = parse_int(key, value);
        else if (key == "game.label_noise_eta") c.label_noise_eta = parse_double(key, value);
        else if (key == "stream.n_damaging") c.n_damaging = parse_int(key, value);
        else if (key == "stream.n_nondamaging") c.n_nondamaging = parse_int(key, value);
        else if (key == "stream.n_volunteered") c.n_volunteered = parse_int(key, value);
        else if (key == "scenario.scenario") c.scenario.scenario = scenario_from_string(value);
        else if (key == "scenario.d") { c.d = parse_int(key, value); c.scenario.d = c.d; }
        else if (key == "scenario.moon_noise") c.scenario.moon_noise = parse_double(key, value);
        else if (key == "scenario.mean0") c.scenario.mean0 = parse_doubles(key, value);
        else if (key == "scenario.mean1") c.scenario.mean1 = parse_doubles(key, value);
        else if (key == "scenario.sigma") c.scenario.sigma = parse_double(key, value);
        else if (key == "scenario.mu_a") c.scenario.mu_a = parse_doubles(key, value);
        else if (key == "scenario.mu_b") c.scenario.mu_b = parse_doubles(key, value);
        else if (key == "scenario.mu_shared") c.scenario.mu_shared = parse_doubles(key, value);
        else if (key == "scenario.overlap0") c.scenario.overlap0 = parse_double(key, value);
        else if (key == "scenario.overlap1") c.scenario.overlap1 = parse_double(key, value);
        else if (key == "scenario.mix_sigma") c.scenario.mix_sigma = parse_double(key, value);
        else if (key == "train.learning_rate") c.hyper.learning_rate = parse_double(key, value);
        else if (key == "train.epochs") c.hyper.epochs = parse_int(key, value);
        else if (key == "train.batch_size") c.hyper.batch_size = parse_int(key, value);
        else if (key == "train.balance_batches") c.hyper.balance_batches = parse_bool(key, value);
        else if (key == "train.hidden_widths") c.hidden_widths = parse_ints(key, value);
        else throw std::invalid_argument("config: unknown key " + key);
    }
    c.validate();
    return c;
}

GameConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_kv(parse_kv_text(ss.str()));
}

std::string config_to_text(const GameConfig& c) {
    std::ostringstream out;
    char buf[64];
    auto real = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "[game]\n";
    out << "T = " << c.T << "\n";
    out << "k = " << c.k << "\n";
    out << "seed = " << c.seed << "\n";
    out << "adversary_mode = " << to_string(c.adversary_mode) << "\n";
    out << "challenger_mode = " << to_string(c.challenger_mode) << "\n";
    out << "monitored_flag = " << (c.monitored_flag ? "true" : "false") << "\n";
    out << "decision_threshold = " << real(c.decision_threshold) << "\n";
    out << "prior_positive = " << real(c.prior_positive) << "\n";
    out << "random_estimate_prior = " << (c.random_estimate_prior ? "true" : "false") << "\n";
    out << "fresh_restart = " << (c.fresh_restart ? "true" : "false") << "\n";
    out << "rejection_M = " << real(c.rejection_M) << "\n";
    out << "p = " << c.p << "\n";
    out << "B_static = " << c.B_static << "\n";
    out << "B_adapt = " << c.B_adapt << "\n";
    out << "B_con = " << c.B_con << "\n";
    out << "label_noise_eta = " << real(c.label_noise_eta) << "\n";
    out << "\n[stream]\n";
    out << "n_damaging = " << c.n_damaging << "\n";
    out << "n_nondamaging = " << c.n_nondamaging << "\n";
    out << "n_volunteered = " << c.n_volunteered << "\n";
    out << "\n[scenario]\n";
    out << "scenario = " << to_string(c.scenario.scenario) << "\n";
    out << "d = " << c.scenario.d << "\n";
    out << "moon_noise = " << real(c.scenario.moon_noise) << "\n";
    out << "mean0 = " << format_doubles(c.scenario.mean0) << "\n";
    out << "mean1 = " << format_doubles(c.scenario.mean1) << "\n";
    out << "sigma = " << real(c.scenario.sigma) << "\n";
    out << "mu_a = " << format_doubles(c.scenario.mu_a) << "\n";
    out << "mu_b = " << format_doubles(c.scenario.mu_b) << "\n";
    out << "mu_shared = " << format_doubles(c.scenario.mu_shared) << "\n";
    out << "overlap0 = " << real(c.scenario.overlap0) << "\n";
    out << "overlap1 = " << real(c.scenario.overlap1) << "\n";
    out << "mix_sigma = " << real(c.scenario.mix_sigma) << "\n";
    out << "\n[train]\n";
    out << "learning_rate = " << real(c.hyper.learning_rate) << "\n";
    out << "epochs = " << c.hyper.epochs << "\n";
    out << "batch_size = " << c.hyper.batch_size << "\n";
    out << "balance_batches = " << (c.hyper.balance_batches ? "true" : "false") << "\n";
    out << "hidden_widths = " << format_ints(c.hidden_widths) << "\n";
    return out.str();
}

GameConfig preset_config(const std::string& name) {
    GameConfig c;
    if (name == "partial_overlap") {
        c.scenario.scenario = Scenario::PartialOverlap;
        // Tight shared hump: decoys drawn there blanket it, so an adaptive
        // adversary that learns them as harmless cleanly stops flagging the
        // whole region (recall loss) instead of straddling it.
        c.scenario.mix_sigma = 0.45;
        c.T = 10;
        c.k = 2;
        c.p = 40;
        c.B_static = 40;
        c.B_adapt = 40;
        c.B_con = 200;
        c.n_damaging = 20;
        c.n_nondamaging = 28;
        c.n_volunteered = 800;
        c.adversary_mode = AdversaryMode::Adaptive;
        c.challenger_mode = ChallengerMode::None;
    } else if (name == "two_moons") {
        c.scenario.scenario = Scenario::NonOverlapping;
        c.scenario.moon_noise = 0.1;
        c.T = 50;
        c.k = 2;
        c.p = 40;
        c.B_static = 40;
        c.B_adapt = 40;
        c.B_con = 200;
        c.n_damaging = 20;
        c.n_nondamaging = 28;
        c.n_volunteered = 200;
        c.adversary_mode = AdversaryMode::Adaptive;
        c.challenger_mode = ChallengerMode::None;
    } else if (name == "fully_overlapping") {
        c.scenario.scenario = Scenario::FullyOverlapping;
        c.scenario.mean0 = {0.0, 0.0};
        c.scenario.mean1 = {0.6, 0.6};
        c.scenario.sigma = 1.0;
        c.T = 50;
        c.k = 1;
        c.p = 40;
        c.B_static = 40;
        c.B_adapt = 40;
        c.B_con = 200;
        c.n_damaging = 10;
        c.n_nondamaging = 14;
        c.n_volunteered = 600;
        c.adversary_mode = AdversaryMode::Adaptive;
        c.challenger_mode = ChallengerMode::None;
    } else if (name == "random_baseline") {
        c.scenario.scenario = Scenario::PartialOverlap;
        c.T = 10;
        c.k = 0;
        c.p = 40;
        c.B_static = 0;
        c.B_adapt = 0;
        c.B_con = 0;
        c.n_damaging = 20;
        c.n_nondamaging = 28;
        c.n_volunteered = 100;
        c.adversary_mode = AdversaryMode::Random;
        c.challenger_mode = ChallengerMode::None;
        c.prior_positive = 0.42;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    c.validate();
    return c;
}

std::vector<std::string> preset_names() {
    return {"partial_overlap", "two_moons", "fully_overlapping", "random_baseline"};
}

}  // namespace decoy
