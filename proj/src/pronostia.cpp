#include "pronostia.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace cghi::data {

namespace {

constexpr int kRows = 2560;
constexpr int kCols = 6;

double parse_field(std::string_view field, const std::string& file, int row, int col) {
    // Trim spaces and a possible trailing CR.
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() &&
           (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
        field.remove_suffix(1);
    double value = 0.0;
    const auto* begin = field.data();
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw std::runtime_error("cannot parse field (row " + std::to_string(row + 1) + ", col " +
                                 std::to_string(col + 1) + ") in " + file);
    return value;
}

}  // namespace

dsp::RawRun load_run_dir(const std::string& dir, const std::string& run_id, int condition,
                         double cadence_s) {
    if (!fs::is_directory(dir)) throw std::runtime_error("run directory not found: " + dir);

    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.rfind("acc_", 0) == 0 && entry.path().extension() == ".csv")
            files.push_back(entry.path().string());
    }
    if (files.empty()) throw std::runtime_error("no acc_*.csv snapshots in " + dir);
    std::sort(files.begin(), files.end());

    dsp::RawRun run;
    run.run_id = run_id;
    run.condition = condition;
    run.snapshots.reserve(files.size());

    std::string line;
    for (size_t idx = 0; idx < files.size(); ++idx) {
        std::ifstream is(files[idx]);
        if (!is) throw std::runtime_error("cannot open " + files[idx]);
        dsp::RawSnapshot snap;
        snap.timestamp_s = static_cast<double>(idx) * cadence_s;
        snap.horiz.reserve(kRows);
        snap.vert.reserve(kRows);
        int row = 0;
        while (std::getline(is, line)) {
            if (line.empty() || line == "\r") continue;
            if (row >= kRows)
                throw std::runtime_error("snapshot has more than " + std::to_string(kRows) +
                                         " rows: " + files[idx]);
            // Split on commas; Pronostia snapshots are strictly comma separated.
            std::string_view rest(line);
            double cols[kCols];
            for (int c = 0; c < kCols; ++c) {
                const size_t pos = rest.find(',');
                std::string_view field = (pos == std::string_view::npos) ? rest : rest.substr(0, pos);
                if (c < kCols - 1 && pos == std::string_view::npos)
                    throw std::runtime_error("row " + std::to_string(row + 1) + " has fewer than " +
                                             std::to_string(kCols) + " columns in " + files[idx]);
                cols[c] = parse_field(field, files[idx], row, c);
                rest = (pos == std::string_view::npos) ? std::string_view{} : rest.substr(pos + 1);
            }
            snap.horiz.push_back(cols[4]);
            snap.vert.push_back(cols[5]);
            ++row;
        }
        if (row != kRows)
            throw std::runtime_error("snapshot has " + std::to_string(row) + " rows, expected " +
                                     std::to_string(kRows) + ": " + files[idx]);
        run.snapshots.push_back(std::move(snap));
    }
    return run;
}

void write_run_dir(const std::string& dir, const dsp::RawRun& run) {
    fs::create_directories(dir);
    char name[32];
    std::string body;
    for (size_t idx = 0; idx < run.snapshots.size(); ++idx) {
        const dsp::RawSnapshot& snap = run.snapshots[idx];
        if (snap.horiz.size() != kRows || snap.vert.size() != kRows)
            throw std::invalid_argument("write_run_dir: snapshot length must be 2560");
        std::snprintf(name, sizeof(name), "acc_%05zu.csv", idx + 1);
        std::ofstream os(fs::path(dir) / name, std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write snapshot in " + dir);
        const double t = snap.timestamp_s;
        const int hh = static_cast<int>(t / 3600.0);
        const int mm = static_cast<int>(t / 60.0) % 60;
        const int ss = static_cast<int>(t) % 60;
        body.clear();
        char buf[96];
        for (int r = 0; r < kRows; ++r) {
            const double us = r / 25600.0 * 1e6;
            std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.1f,%.9g,%.9g\n", hh, mm, ss, us,
                          snap.horiz[r], snap.vert[r]);
            body += buf;
        }
        os << body;
        if (!os) throw std::runtime_error("write failed in " + dir);
    }
}

}  // namespace cghi::data
