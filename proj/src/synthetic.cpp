#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rng.hpp"

namespace cghi::data {

SynthProfile synth_profile_from_string(const std::string& name) {
    if (name == "two_phase") return SynthProfile::TwoPhase;
    if (name == "flat") return SynthProfile::Flat;
    if (name == "cascade") return SynthProfile::Cascade;
    throw std::invalid_argument("unknown synthetic profile: " + name);
}

dsp::RawRun generate_synthetic_run(const std::string& run_id, int condition, uint64_t seed,
                                   const SynthConfig& cfg) {
    if (cfg.n_frames < 2) throw std::invalid_argument("synthetic run needs at least two frames");
    if (cfg.tones < 1) throw std::invalid_argument("synthetic run needs at least one tone");
    Rng rng(seed);
    const double two_pi = 6.283185307179586476925286766559;
    const double level = cfg.tone_amplitude * rng.uniform(0.9, 1.1);
    const double top_hz = cfg.tone_freq_frac * cfg.sample_rate / 2.0;
    std::vector<double> tone_hz(static_cast<size_t>(cfg.tones));
    std::vector<double> phase_h(tone_hz.size()), phase_v(tone_hz.size());
    for (size_t k = 0; k < tone_hz.size(); ++k) {
        tone_hz[k] = top_hz * static_cast<double>(k + 1) / static_cast<double>(cfg.tones);
        phase_h[k] = rng.uniform(0.0, two_pi);
        phase_v[k] = rng.uniform(0.0, two_pi);
    }

    dsp::RawRun run;
    run.run_id = run_id;
    run.condition = condition;
    run.snapshots.reserve(cfg.n_frames);

    auto tone_amp = [&](double life, size_t k) {
        double onset = 0.0;
        if (cfg.profile == SynthProfile::Flat) return level;
        if (cfg.profile == SynthProfile::TwoPhase) onset = cfg.knee_life;
        if (cfg.profile == SynthProfile::Cascade)
            onset = cfg.knee_life * static_cast<double>(k) /
                    static_cast<double>(std::max(cfg.tones - 1, 1));
        if (life <= onset) return level;
        return level * std::pow(cfg.growth_ratio, (life - onset) / (1.0 - onset));
    };

    for (int f = 0; f < cfg.n_frames; ++f) {
        const double life = static_cast<double>(f) / static_cast<double>(cfg.n_frames - 1);
        dsp::RawSnapshot snap;
        snap.timestamp_s = f * cfg.cadence_s;
        snap.horiz.resize(cfg.snapshot_len);
        snap.vert.resize(cfg.snapshot_len);
        std::vector<double> amps(tone_hz.size());
        for (size_t k = 0; k < tone_hz.size(); ++k) amps[k] = tone_amp(life, k);
        for (int i = 0; i < cfg.snapshot_len; ++i) {
            const double t = i / cfg.sample_rate;
            double h = cfg.noise_sigma * rng.normal();
            double v = cfg.noise_sigma * rng.normal();
            for (size_t k = 0; k < tone_hz.size(); ++k) {
                h += amps[k] * std::sin(two_pi * tone_hz[k] * t + phase_h[k]);
                v += 0.8 * amps[k] * std::sin(two_pi * tone_hz[k] * t + phase_v[k]);
            }
            snap.horiz[i] = h;
            snap.vert[i] = v;
        }
        run.snapshots.push_back(std::move(snap));
    }
    return run;
}

}  // namespace cghi::data
