#pragma once

#include <string>

#include "mel.hpp"

namespace cghi::data {

enum class SynthProfile { TwoPhase, Flat, Cascade };

struct SynthConfig {
    int n_frames = 200;
    int snapshot_len = 2560;
    double sample_rate = 25600.0;
    double cadence_s = 10.0;
    SynthProfile profile = SynthProfile::TwoPhase;
    double noise_sigma = 0.5;
    double tone_amplitude = 0.5;
    // Highest tone sits at 40% of Nyquist; with tones > 1 the fault excites a
    // ladder of evenly spaced harmonics below it. Under two_phase every tone
    // is flat until knee_life and then grows exponentially to growth_ratio *
    // base by end of life. Under cascade the k-th tone's onset is staggered
    // across [0, knee_life], so the harmonics light up one after another and
    // the spectrum keeps changing through the whole run.
    double tone_freq_frac = 0.4;
    int tones = 1;
    double knee_life = 0.95;
    double growth_ratio = 20.0;
};

SynthProfile synth_profile_from_string(const std::string& name);

// Deterministic run-to-failure vibration run: white noise on both axes plus
// a fault tone whose amplitude follows the configured profile, with a
// per-run random phase and +-10% level jitter derived from the seed.
dsp::RawRun generate_synthetic_run(const std::string& run_id, int condition, uint64_t seed,
                                   const SynthConfig& cfg);

}  // namespace cghi::data
