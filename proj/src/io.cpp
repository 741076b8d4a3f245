#include "io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "metrics.hpp"

namespace cghi::io {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'C', 'G', 'H', 'I', 'F', 'S', '0', '1'};

void write_u64(std::ostream& os, uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }
void write_f64s(std::ostream& os, const double* p, size_t n) {
    os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}
uint64_t read_u64(std::istream& is) {
    uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    if (!is) throw DataError("frame store: truncated file");
    return v;
}
double read_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    if (!is) throw DataError("frame store: truncated file");
    return v;
}
std::string read_str(std::istream& is) {
    const uint64_t len = read_u64(is);
    if (len > (1u << 20)) throw DataError("frame store: implausible string length");
    std::string s(len, '\0');
    is.read(s.data(), static_cast<std::streamsize>(len));
    if (!is) throw DataError("frame store: truncated file");
    return s;
}
void write_str(std::ostream& os, const std::string& s) {
    write_u64(os, s.size());
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    return j;
}

}  // namespace

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot open for write: " + path);
    os << content;
    if (!os) throw DataError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void save_frame_store(const std::string& path, const std::vector<dsp::RunFrames>& runs) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("frame store: cannot open for write: " + path);
    os.write(kMagic, 8);
    write_u64(os, runs.size());
    for (const auto& run : runs) {
        write_str(os, run.run_id);
        write_u64(os, static_cast<uint64_t>(run.condition));
        write_u64(os, run.frames.size());
        for (const auto& f : run.frames) {
            write_f64s(os, &f.timestamp_s, 1);
            write_u64(os, f.values.size());
            write_f64s(os, f.values.data(), f.values.size());
            write_f64s(os, &f.energy_norm, 1);
            write_f64s(os, &f.life_fraction, 1);
        }
    }
    if (!os) throw DataError("frame store: write failed: " + path);
}

std::vector<dsp::RunFrames> load_frame_store(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("frame store: cannot open: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw DataError("frame store: bad magic in " + path);
    std::vector<dsp::RunFrames> runs(read_u64(is));
    for (auto& run : runs) {
        run.run_id = read_str(is);
        run.condition = static_cast<int>(read_u64(is));
        run.frames.resize(read_u64(is));
        for (auto& f : run.frames) {
            f.timestamp_s = read_f64(is);
            f.values.resize(read_u64(is));
            is.read(reinterpret_cast<char*>(f.values.data()),
                    static_cast<std::streamsize>(f.values.size() * sizeof(double)));
            if (!is) throw DataError("frame store: truncated file");
            f.energy_norm = read_f64(is);
            f.life_fraction = read_f64(is);
        }
    }
    return runs;
}

void save_norm_stats(const std::string& path, const dsp::NormStats& stats) {
    json j;
    j["condition"] = stats.condition;
    j["mean"] = stats.mean;
    j["stddev"] = stats.stddev;
    j["energy_min"] = stats.energy_min;
    j["energy_max"] = stats.energy_max;
    write_text_file(path, j.dump(2) + "\n");
}

dsp::NormStats load_norm_stats(const std::string& path) {
    const json j = load_json(path);
    dsp::NormStats s;
    try {
        s.condition = j.at("condition").get<int>();
        s.mean = j.at("mean").get<std::vector<double>>();
        s.stddev = j.at("stddev").get<std::vector<double>>();
        s.energy_min = j.at("energy_min").get<double>();
        s.energy_max = j.at("energy_max").get<double>();
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    return s;
}

void save_split_manifest(const std::string& path, const std::vector<std::string>& train_runs,
                         uint64_t seed, double fraction) {
    json j;
    j["train_runs"] = train_runs;
    j["seed"] = seed;
    j["fraction"] = fraction;
    write_text_file(path, j.dump(2) + "\n");
}

void write_training_log(const std::string& path, const std::vector<cggd::EpochLog>& log) {
    std::string out = "epoch,train_loss,val_loss,viol_mono,viol_ene,viol_bounds\n";
    for (const auto& e : log) {
        out += std::to_string(e.epoch) + "," + fmt(e.train_loss) + "," + fmt(e.val_loss) + "," +
               fmt(e.viol_mono) + "," + fmt(e.viol_ene) + "," + fmt(e.viol_bounds) + "\n";
    }
    write_text_file(path, out);
}

void write_hi_csv(const std::string& path, const std::vector<HiRow>& rows) {
    std::string out = "run_id,seed,timestamp,hi\n";
    for (const auto& r : rows)
        out += r.run_id + "," + std::to_string(r.seed) + "," + fmt(r.timestamp) + "," +
               fmt(r.hi) + "\n";
    write_text_file(path, out);
}

std::vector<metrics::HiSeries> read_hi_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line) || line != "run_id,seed,timestamp,hi")
        throw DataError(path + ": unexpected header");
    std::vector<metrics::HiSeries> series;
    std::map<std::pair<std::string, unsigned>, size_t> index;
    size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string run, seed_s, ts_s, hi_s;
        if (!std::getline(ss, run, ',') || !std::getline(ss, seed_s, ',') ||
            !std::getline(ss, ts_s, ',') || !std::getline(ss, hi_s))
            throw DataError(path + ": bad row at line " + std::to_string(lineno));
        unsigned seed = 0;
        double ts = 0, hi = 0;
        try {
            seed = static_cast<unsigned>(std::stoul(seed_s));
            ts = std::stod(ts_s);
            hi = std::stod(hi_s);
        } catch (const std::exception&) {
            throw DataError(path + ": bad number at line " + std::to_string(lineno));
        }
        const auto key = std::make_pair(run, seed);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, series.size()).first;
            series.push_back({run, seed, {}, {}});
        }
        series[it->second].values.push_back(hi);
        series[it->second].times.push_back(ts);
    }
    return series;
}

void write_metric_report(const std::string& path,
                         const std::vector<metrics::BearingMetrics>& rows) {
    std::string out =
        "bearing,trendability_mean,trendability_std,robustness_mean,robustness_std,"
        "consistency_mean,consistency_std\n";
    for (const auto& r : rows)
        out += r.bearing + "," + fmt(r.trendability.mean) + "," + fmt(r.trendability.stddev) +
               "," + fmt(r.robustness.mean) + "," + fmt(r.robustness.stddev) + "," +
               fmt(r.consistency.mean) + "," + fmt(r.consistency.stddev) + "\n";
    write_text_file(path, out);
}

std::string render_hi_svg(const metrics::HiSeries& s, const std::vector<double>& smooth) {
    const double w = 720, h = 420, ml = 60, mr = 20, mt = 30, mb = 45;
    double tmin = s.times.front(), tmax = s.times.back();
    double vmin = s.values.front(), vmax = vmin;
    for (double v : s.values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    for (double v : smooth) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    if (tmax <= tmin) tmax = tmin + 1.0;
    if (vmax <= vmin) vmax = vmin + 1.0;
    const double pad = 0.05 * (vmax - vmin);
    vmin -= pad;
    vmax += pad;
    auto px = [&](double t) { return ml + (t - tmin) / (tmax - tmin) * (w - ml - mr); };
    auto py = [&](double v) { return h - mb - (v - vmin) / (vmax - vmin) * (h - mt - mb); };
    auto polyline = [&](const std::vector<double>& vals, const char* stroke, double width) {
        std::string p = "<polyline fill=\"none\" stroke=\"";
        p += stroke;
        p += "\" stroke-width=\"" + fmt(width) + "\" points=\"";
        for (size_t i = 0; i < vals.size(); ++i) {
            if (i) p += " ";
            p += fmt(px(s.times[i])) + "," + fmt(py(vals[i]));
        }
        return p + "\"/>\n";
    };

    std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) + "\" height=\"" +
           fmt(h) + "\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(h - mb) + "\" x2=\"" + fmt(w - mr) +
           "\" y2=\"" + fmt(h - mb) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(ml) + "\" y2=\"" +
           fmt(h - mb) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(w / 2) + "\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
           s.run_id + " seed " + std::to_string(s.seed) + "</text>\n";
    svg += "<text x=\"" + fmt(w / 2) + "\" y=\"" + fmt(h - 10) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">time (s)</text>\n";
    svg += "<text x=\"16\" y=\"" + fmt(h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
           fmt(h / 2) + ")\">health indicator</text>\n";
    svg += polyline(s.values, "#4878a8", 1.0);
    svg += polyline(smooth, "#d62728", 2.0);
    svg += "</svg>\n";
    return svg;
}

}  // namespace cghi::io
