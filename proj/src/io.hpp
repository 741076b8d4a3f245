#pragma once

#include <string>
#include <vector>

#include "cggd.hpp"
#include "mel.hpp"
#include "metrics.hpp"

namespace cghi::io {

// Thrown for unreadable, unparsable or inconsistent data files; the CLI maps
// it to its data-error exit code.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Compact float formatting used by every CSV writer so reruns are
// byte-identical.
std::string fmt(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Binary store of preprocessed runs (magic CGHIFS01): per run its id,
// condition and frames (timestamp, values, energy_norm, life_fraction).
void save_frame_store(const std::string& path, const std::vector<dsp::RunFrames>& runs);
std::vector<dsp::RunFrames> load_frame_store(const std::string& path);

void save_norm_stats(const std::string& path, const dsp::NormStats& stats);
dsp::NormStats load_norm_stats(const std::string& path);

// Records which runs fed a training split and how it was drawn.
void save_split_manifest(const std::string& path, const std::vector<std::string>& train_runs,
                         uint64_t seed, double fraction);

void write_training_log(const std::string& path, const std::vector<cggd::EpochLog>& log);

struct HiRow {
    std::string run_id;
    unsigned seed = 0;
    double timestamp = 0.0;
    double hi = 0.0;
};

void write_hi_csv(const std::string& path, const std::vector<HiRow>& rows);
// Groups rows back into per-(run, seed) series, preserving file order.
std::vector<metrics::HiSeries> read_hi_csv(const std::string& path);

void write_metric_report(const std::string& path,
                         const std::vector<metrics::BearingMetrics>& rows);

// Staticly sized SVG of one HI curve with its smoothed overlay in red.
std::string render_hi_svg(const metrics::HiSeries& s, const std::vector<double>& smooth);

}  // namespace cghi::io
