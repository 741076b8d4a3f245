#pragma once

#include <string>
#include <vector>

#include "experiment.hpp"
#include "io.hpp"
#include "metrics.hpp"

namespace cghi::commands {

// Generates synthetic run-to-failure recordings in the Pronostia directory
// layout so they flow through the ordinary loader.
void cmd_synth(const ExperimentConfig& cfg, const std::string& out_dir);

// Raw recordings -> mel frames, normalization fitted on the training runs,
// frame store + norm stats written to out_dir (frames.bin, norm_stats.json).
void cmd_preprocess(const ExperimentConfig& cfg, const std::string& out_dir);

// Trains one model per seed; writes per-seed checkpoint, training-log CSV
// and split manifest into out_dir. seeds overrides cfg.seeds when nonempty.
void cmd_train(const ExperimentConfig& cfg, const std::string& out_dir,
               const std::vector<unsigned>& seeds = {});

// Loads per-seed checkpoints, predicts HI curves for every evaluated run and
// writes hi_curves.csv, metric_report.csv and per-(run, seed) SVG plots.
std::vector<metrics::BearingMetrics> cmd_evaluate(const ExperimentConfig& cfg,
                                                  const std::string& out_dir);

// Trains and evaluates ccae plus its three one-constraint-removed variants;
// writes ablation.csv (aggregated) and ablation_per_seed.csv.
void cmd_ablation(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace cghi::commands
