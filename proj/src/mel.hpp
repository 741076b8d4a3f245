#pragma once

#include <string>
#include <vector>

#include "fft.hpp"

namespace cghi::dsp {

// One vibration snapshot: a fixed-length burst per axis recorded at a fixed
// rate (default 2560 samples at 25.6 kHz, i.e. 0.1 s every 10 s).
struct RawSnapshot {
    double timestamp_s = 0.0;
    std::vector<double> horiz;
    std::vector<double> vert;
};

struct RawRun {
    std::string run_id;
    int condition = 0;
    std::vector<RawSnapshot> snapshots;
};

// Preprocessed frame: 128 log-mel bands x 2 axes, stored band-major
// (values[band * 2 + axis]), plus normalized energy and life fraction.
inline constexpr int kMelBands = 128;
inline constexpr int kAxes = 2;
inline constexpr int kFrameValues = kMelBands * kAxes;

struct Frame {
    double timestamp_s = 0.0;
    std::vector<double> values;  // kFrameValues
    double energy_norm = 0.0;
    double life_fraction = 0.0;
};

struct RunFrames {
    std::string run_id;
    int condition = 0;
    std::vector<Frame> frames;
};

struct MelConfig {
    int bands = kMelBands;
    int snapshot_len = 2560;
    double sample_rate = 25600.0;
    double log_floor = 1e-10;
};

// Triangular filterbank on the HTK mel scale (2595 * log10(1 + f/700)),
// spanning 0 Hz to Nyquist, evaluated at the FFT bin frequencies.
struct MelBank {
    int bands = 0;
    int bins = 0;
    std::vector<double> weights;    // bands x bins, row-major
    std::vector<double> center_hz;  // per band

    double weight(int band, int bin) const { return weights[static_cast<size_t>(band) * bins + bin]; }
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);
MelBank build_mel_bank(const MelConfig& cfg);

std::vector<double> hann_window(int n);

// One snapshot -> one frame of 128 log-mel magnitudes per axis: Hann window,
// magnitude spectrum, filterbank, log with floor. Returns kFrameValues
// values, band-major.
std::vector<double> mel_spectrogram(const RawSnapshot& snap, const MelBank& bank, const MelConfig& cfg);

// Sum of squared values of a frame.
double frame_energy(const std::vector<double>& values);

// Per-band, per-axis standardization statistics of one operating condition,
// fitted on training runs only, plus the min/max of the energies of the
// normalized training frames for energy_norm scaling.
struct NormStats {
    int condition = 0;
    std::vector<double> mean;    // kFrameValues
    std::vector<double> stddev;  // kFrameValues, floored at 1e-8
    double energy_min = 0.0;
    double energy_max = 0.0;
};

NormStats fit_normalization(const std::vector<const RunFrames*>& train_runs, int condition);

// Standardizes frame values in place and fills energy_norm =
// clamp((E - energy_min) / (energy_max - energy_min), 0, 1) with E the sum of
// squares of the normalized frame.
void apply_normalization(RunFrames& run, const NormStats& stats);

// Drops the first trim_count frames of a run (startup transient) and
// recomputes life fractions over the retained span.
void trim_startup(RunFrames& run, int trim_count);

// life_fraction_i = i / (n - 1) over the run's frames (0 at the first
// retained frame, 1 at the last).
void set_life_fractions(RunFrames& run);

}  // namespace cghi::dsp
