#include "decoy/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "decoy/stats.hpp"

namespace decoy {

const char* const kCsvHeader =
    "run_id,seed,scenario,adversary_mode,challenger_mode,k,interval,"
    "tp,fp,fn,tn,precision,recall,f_score,pool_size,budget_spent,"
    "decoys_injected";

namespace {

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

std::string trace_to_csv(const GameTrace& trace, const std::string& run_id) {
    if (run_id.find(',') != std::string::npos ||
        run_id.find('\n') != std::string::npos)
        throw std::invalid_argument("run_id must not contain ',' or newlines");
    std::string out = kCsvHeader;
    out += '\n';
    const GameConfig& c = trace.config;
    for (const IntervalRecord& r : trace.records) {
        out += run_id;
        out += ',' + std::to_string(c.seed);
        out += ',';
        out += to_string(c.scenario.scenario);
        out += ',';
        out += to_string(c.adversary_mode);
        out += ',';
        out += to_string(c.challenger_mode);
        out += ',' + std::to_string(c.k);
        out += ',' + std::to_string(r.t);
        out += ',' + std::to_string(r.metrics.tp);
        out += ',' + std::to_string(r.metrics.fp);
        out += ',' + std::to_string(r.metrics.fn);
        out += ',' + std::to_string(r.metrics.tn);
        out += ',' + fmt_real(r.metrics.precision);
        out += ',' + fmt_real(r.metrics.recall);
        out += ',' + fmt_real(r.metrics.f_score);
        out += ',' + std::to_string(r.pool_size);
        out += ',' + std::to_string(r.budget_spent);
        out += ',' + std::to_string(r.decoys_merged);
        out += '\n';
    }
    return out;
}

std::vector<CsvRow> parse_trace_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("parse_trace_csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader)
        throw std::invalid_argument("parse_trace_csv: unexpected header: " + line);
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != 17)
            throw std::invalid_argument("parse_trace_csv: bad field count in: " + line);
        CsvRow r;
        r.run_id = f[0];
        r.seed = std::stoull(f[1]);
        r.scenario = f[2];
        r.adversary_mode = f[3];
        r.challenger_mode = f[4];
        r.k = std::stoi(f[5]);
        r.interval = std::stoi(f[6]);
        r.tp = std::stol(f[7]);
        r.fp = std::stol(f[8]);
        r.fn = std::stol(f[9]);
        r.tn = std::stol(f[10]);
        r.precision = std::stod(f[11]);
        r.recall = std::stod(f[12]);
        r.f_score = std::stod(f[13]);
        r.pool_size = std::stol(f[14]);
        r.budget_spent = std::stol(f[15]);
        r.decoys_injected = std::stoi(f[16]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<AggregateRow> aggregate_rows(const std::vector<CsvRow>& rows) {
    // Key: everything that identifies a grid cell except the seed.
    using Key = std::tuple<std::string, std::string, std::string, int, int>;
    std::map<Key, std::vector<const CsvRow*>> groups;
    for (const CsvRow& r : rows)
        groups[{r.scenario, r.adversary_mode, r.challenger_mode, r.k, r.interval}]
            .push_back(&r);

    std::vector<AggregateRow> out;
    for (const auto& [key, members] : groups) {
        AggregateRow a;
        a.scenario = std::get<0>(key);
        a.adversary_mode = std::get<1>(key);
        a.challenger_mode = std::get<2>(key);
        a.k = std::get<3>(key);
        a.interval = std::get<4>(key);
        a.n_seeds = static_cast<int>(members.size());
        std::vector<double> fs;
        for (const CsvRow* r : members) {
            a.mean_precision += r->precision;
            a.mean_recall += r->recall;
            fs.push_back(r->f_score);
        }
        a.mean_precision /= members.size();
        a.mean_recall /= members.size();
        a.mean_f = mean(fs);
        a.ci95_f = 1.96 * sample_std(fs) / std::sqrt(static_cast<double>(fs.size()));
        out.push_back(std::move(a));
    }
    return out;
}

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows) {
    std::string out =
        "scenario,adversary_mode,challenger_mode,k,interval,n_seeds,"
        "mean_precision,mean_recall,mean_f,ci95_f\n";
    for (const AggregateRow& a : rows) {
        out += a.scenario;
        out += ',' + a.adversary_mode;
        out += ',' + a.challenger_mode;
        out += ',' + std::to_string(a.k);
        out += ',' + std::to_string(a.interval);
        out += ',' + std::to_string(a.n_seeds);
        out += ',' + fmt_real(a.mean_precision);
        out += ',' + fmt_real(a.mean_recall);
        out += ',' + fmt_real(a.mean_f);
        out += ',' + fmt_real(a.ci95_f);
        out += '\n';
    }
    return out;
}

namespace {

struct GridSpec {
    double x0, x1, y0, y1;
    int n;
    double px_w, px_h;

    double world_x(int i) const {
        return x0 + (x1 - x0) * static_cast<double>(i) / (n - 1);
    }
    double world_y(int j) const {
        return y0 + (y1 - y0) * static_cast<double>(j) / (n - 1);
    }
    double px(double wx) const { return (wx - x0) / (x1 - x0) * px_w; }
    double py(double wy) const { return px_h - (wy - y0) / (y1 - y0) * px_h; }
};

std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

BoundaryPlot render_boundary_svg(const ClassifierParams& params,
                                 const std::vector<LabeledPoint>& data) {
    if (params.input_dim() != 2)
        throw std::invalid_argument("render_boundary_svg: model must be 2-D");
    for (const LabeledPoint& p : data)
        if (p.features.size() != 2)
            throw std::invalid_argument("render_boundary_svg: data must be 2-D");

    GridSpec grid{};
    grid.n = 200;
    grid.px_w = 640.0;
    grid.px_h = 640.0;
    if (data.empty()) {
        grid.x0 = -3.0; grid.x1 = 3.0; grid.y0 = -3.0; grid.y1 = 3.0;
    } else {
        grid.x0 = grid.x1 = data[0].features[0];
        grid.y0 = grid.y1 = data[0].features[1];
        for (const LabeledPoint& p : data) {
            grid.x0 = std::min(grid.x0, p.features[0]);
            grid.x1 = std::max(grid.x1, p.features[0]);
            grid.y0 = std::min(grid.y0, p.features[1]);
            grid.y1 = std::max(grid.y1, p.features[1]);
        }
        double pad_x = std::max(0.5, 0.1 * (grid.x1 - grid.x0));
        double pad_y = std::max(0.5, 0.1 * (grid.y1 - grid.y0));
        grid.x0 -= pad_x; grid.x1 += pad_x;
        grid.y0 -= pad_y; grid.y1 += pad_y;
    }

    // Signed field logit(x): the 0.5 probability level set is its zero set.
    std::vector<double> field(static_cast<size_t>(grid.n) * grid.n);
    std::vector<double> xy(2);
    for (int j = 0; j < grid.n; ++j) {
        xy[1] = grid.world_y(j);
        for (int i = 0; i < grid.n; ++i) {
            xy[0] = grid.world_x(i);
            field[static_cast<size_t>(j) * grid.n + i] = forward_logit(params, xy);
        }
    }

    auto at = [&](int i, int j) {
        return field[static_cast<size_t>(j) * grid.n + i];
    };

    std::string segments;
    long segment_count = 0;
    for (int j = 0; j + 1 < grid.n; ++j) {
        for (int i = 0; i + 1 < grid.n; ++i) {
            double v00 = at(i, j), v10 = at(i + 1, j);
            double v01 = at(i, j + 1), v11 = at(i + 1, j + 1);
            double wx0 = grid.world_x(i), wx1 = grid.world_x(i + 1);
            double wy0 = grid.world_y(j), wy1 = grid.world_y(j + 1);

            // Interpolated zero crossings on the four cell edges.
            std::vector<std::pair<double, double>> pts;
            auto lerp = [](double a, double b, double va, double vb) {
                double t = va / (va - vb);
                return a + t * (b - a);
            };
            if ((v00 < 0) != (v10 < 0))
                pts.push_back({lerp(wx0, wx1, v00, v10), wy0});
            if ((v01 < 0) != (v11 < 0))
                pts.push_back({lerp(wx0, wx1, v01, v11), wy1});
            if ((v00 < 0) != (v01 < 0))
                pts.push_back({wx0, lerp(wy0, wy1, v00, v01)});
            if ((v10 < 0) != (v11 < 0))
                pts.push_back({wx1, lerp(wy0, wy1, v10, v11)});

            auto emit = [&](const std::pair<double, double>& a,
                            const std::pair<double, double>& b) {
                segments += "<line x1=\"" + fmt_px(grid.px(a.first)) + "\" y1=\"" +
                            fmt_px(grid.py(a.second)) + "\" x2=\"" +
                            fmt_px(grid.px(b.first)) + "\" y2=\"" +
                            fmt_px(grid.py(b.second)) +
                            "\" stroke=\"#222222\" stroke-width=\"1.5\"/>\n";
                ++segment_count;
            };
            if (pts.size() == 2) {
                emit(pts[0], pts[1]);
            } else if (pts.size() == 4) {
                // Saddle cell: split by the sign of the center estimate.
                double center = 0.25 * (v00 + v10 + v01 + v11);
                if ((center < 0) == (v00 < 0)) {
                    emit(pts[0], pts[3]);
                    emit(pts[1], pts[2]);
                } else {
                    emit(pts[0], pts[2]);
                    emit(pts[1], pts[3]);
                }
            }
        }
    }

    bool flat = segment_count == 0;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
           "height=\"640\" viewBox=\"0 0 640 640\">\n";
    if (flat)
        svg += "<!-- flat-model warning: no 0.5 level set found on the grid -->\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"640\" fill=\"#ffffff\"/>\n";
    svg += segments;
    for (const LabeledPoint& p : data) {
        const char* color = p.label == 1 ? "#c0392b" : "#2c6fbb";
        svg += "<circle cx=\"" + fmt_px(grid.px(p.features[0])) + "\" cy=\"" +
               fmt_px(grid.py(p.features[1])) + "\" r=\"3\" fill=\"" + color +
               "\" fill-opacity=\"0.75\"/>\n";
    }
    svg += "</svg>\n";

    BoundaryPlot plot;
    plot.svg = std::move(svg);
    plot.flat_model = flat;
    return plot;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace decoy
