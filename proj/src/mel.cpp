#include "mel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cghi::dsp {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelBank build_mel_bank(const MelConfig& cfg) {
    if (cfg.bands < 1) throw std::invalid_argument("mel bank: need at least one band");
    MelBank bank;
    bank.bands = cfg.bands;
    bank.bins = cfg.snapshot_len / 2 + 1;
    bank.weights.assign(static_cast<size_t>(bank.bands) * bank.bins, 0.0);
    bank.center_hz.resize(cfg.bands);

    const double nyquist = cfg.sample_rate / 2.0;
    const double mel_lo = hz_to_mel(0.0);
    const double mel_hi = hz_to_mel(nyquist);
    std::vector<double> edges_hz(cfg.bands + 2);
    for (int i = 0; i < cfg.bands + 2; ++i)
        edges_hz[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (cfg.bands + 1));

    const double bin_hz = cfg.sample_rate / cfg.snapshot_len;
    for (int m = 0; m < cfg.bands; ++m) {
        const double left = edges_hz[m];
        const double center = edges_hz[m + 1];
        const double right = edges_hz[m + 2];
        bank.center_hz[m] = center;
        for (int k = 0; k < bank.bins; ++k) {
            const double f = k * bin_hz;
            double w = 0.0;
            if (f >= left && f <= center && center > left) {
                w = (f - left) / (center - left);
            } else if (f > center && f <= right && right > center) {
                w = (right - f) / (right - center);
            }
            if (w > 0.0) bank.weights[static_cast<size_t>(m) * bank.bins + k] = w;
        }
    }
    return bank;
}

std::vector<double> hann_window(int n) {
    std::vector<double> w(n);
    const double two_pi = 6.283185307179586476925286766559;
    for (int i = 0; i < n; ++i) w[i] = 0.5 * (1.0 - std::cos(two_pi * i / (n - 1)));
    return w;
}

std::vector<double> mel_spectrogram(const RawSnapshot& snap, const MelBank& bank, const MelConfig& cfg) {
    const size_t n = static_cast<size_t>(cfg.snapshot_len);
    if (snap.horiz.size() != n || snap.vert.size() != n)
        throw std::invalid_argument("mel_spectrogram: snapshot length mismatch");

    static thread_local std::vector<double> window;
    if (window.size() != n) window = hann_window(cfg.snapshot_len);

    std::vector<double> out(kFrameValues, 0.0);
    const std::vector<double>* axes[kAxes] = {&snap.horiz, &snap.vert};
    std::vector<double> buf(n);
    for (int axis = 0; axis < kAxes; ++axis) {
        const std::vector<double>& sig = *axes[axis];
        for (size_t i = 0; i < n; ++i) buf[i] = sig[i] * window[i];
        const std::vector<double> mag = magnitude_spectrum(buf);
        for (int m = 0; m < bank.bands; ++m) {
            double acc = 0.0;
            const double* row = bank.weights.data() + static_cast<size_t>(m) * bank.bins;
            for (int k = 0; k < bank.bins; ++k) acc += row[k] * mag[k];
            out[static_cast<size_t>(m) * kAxes + axis] = std::log(std::max(acc, cfg.log_floor));
        }
    }
    return out;
}

double frame_energy(const std::vector<double>& values) {
    double e = 0.0;
    for (double v : values) e += v * v;
    return e;
}

NormStats fit_normalization(const std::vector<const RunFrames*>& train_runs, int condition) {
    size_t total = 0;
    for (const RunFrames* run : train_runs) total += run->frames.size();
    if (total == 0) throw std::invalid_argument("fit_normalization: no training frames");

    NormStats stats;
    stats.condition = condition;
    stats.mean.assign(kFrameValues, 0.0);
    stats.stddev.assign(kFrameValues, 0.0);

    for (const RunFrames* run : train_runs)
        for (const Frame& f : run->frames)
            for (int i = 0; i < kFrameValues; ++i) stats.mean[i] += f.values[i];
    for (int i = 0; i < kFrameValues; ++i) stats.mean[i] /= static_cast<double>(total);

    for (const RunFrames* run : train_runs)
        for (const Frame& f : run->frames)
            for (int i = 0; i < kFrameValues; ++i) {
                const double d = f.values[i] - stats.mean[i];
                stats.stddev[i] += d * d;
            }
    for (int i = 0; i < kFrameValues; ++i)
        stats.stddev[i] = std::max(std::sqrt(stats.stddev[i] / static_cast<double>(total)), 1e-8);

    // Energy bounds are taken over the normalized training frames, since
    // energy_norm is defined on standardized values.
    bool first = true;
    std::vector<double> scratch(kFrameValues);
    for (const RunFrames* run : train_runs)
        for (const Frame& f : run->frames) {
            for (int i = 0; i < kFrameValues; ++i)
                scratch[i] = (f.values[i] - stats.mean[i]) / stats.stddev[i];
            const double e = frame_energy(scratch);
            if (first || e < stats.energy_min) stats.energy_min = e;
            if (first || e > stats.energy_max) stats.energy_max = e;
            first = false;
        }
    return stats;
}

void apply_normalization(RunFrames& run, const NormStats& stats) {
    const double denom = std::max(stats.energy_max - stats.energy_min, 1e-12);
    for (Frame& f : run.frames) {
        if (f.values.size() != static_cast<size_t>(kFrameValues))
            throw std::invalid_argument("apply_normalization: frame size mismatch");
        for (int i = 0; i < kFrameValues; ++i)
            f.values[i] = (f.values[i] - stats.mean[i]) / stats.stddev[i];
        const double e = frame_energy(f.values);
        f.energy_norm = std::clamp((e - stats.energy_min) / denom, 0.0, 1.0);
    }
}

void trim_startup(RunFrames& run, int trim_count) {
    if (trim_count < 0) throw std::invalid_argument("trim_startup: negative trim count");
    if (static_cast<size_t>(trim_count) >= run.frames.size())
        throw std::invalid_argument("trim_startup: run has too few frames to trim");
    run.frames.erase(run.frames.begin(), run.frames.begin() + trim_count);
    set_life_fractions(run);
}

void set_life_fractions(RunFrames& run) {
    const size_t n = run.frames.size();
    if (n < 2) throw std::invalid_argument("life fractions need at least two frames");
    for (size_t i = 0; i < n; ++i)
        run.frames[i].life_fraction = static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace cghi::dsp
