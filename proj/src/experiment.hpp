#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cggd.hpp"
#include "model.hpp"
#include "synthetic.hpp"

namespace cghi {

// Raised for invalid configs or unusable argument combinations; the CLI maps
// it to its usage/config exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One experiment manifest: a single versioned JSON document shared by every
// command so a run is reproducible from the file alone.
struct ExperimentConfig {
    Variant variant = Variant::Ccae;
    ConstraintToggles toggles;  // always consistent with the variant
    std::vector<unsigned> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    int condition = 1;
    constraints::RescaleSet rescale;  // rf_c1 unless configured
    cggd::TrainConfig train;          // carries constraint knobs; seed set per run

    // data paths
    std::string raw_dir;                  // preprocess input (run subdirectories)
    std::vector<std::string> runs;        // run ids; empty = every subdirectory / stored run
    std::vector<std::string> train_runs;  // runs used for normalization and training
    std::string store_path;               // frame store consumed by train/evaluate
    std::string norm_stats_path;
    std::string checkpoint_dir;  // evaluate input
    int trim_frames = 0;

    // synthetic generation
    data::SynthConfig synth;
    int synth_run_count = 4;
    uint64_t synth_seed = 7;
};

// Parses and validates the JSON config. Unknown top-level keys, schema
// version mismatches and toggle/variant contradictions are ConfigErrors.
ExperimentConfig load_config(const std::string& path);

}  // namespace cghi
