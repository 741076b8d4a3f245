#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "adam.hpp"
#include "directions.hpp"
#include "mel.hpp"
#include "model.hpp"
#include "sampling.hpp"

namespace cghi::cggd {

// Thrown when a loss or update turns non-finite; the CLI maps it to its
// numeric-failure exit code.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-sample metadata travelling with a training batch.
struct BatchMeta {
    std::vector<int> run_ids;
    std::vector<double> timestamps;
    std::vector<double> life_fraction;
    std::vector<double> energy_norm;
};

struct UpdateOptions {
    ConstraintToggles toggles;
    constraints::RescaleSet rescale;
    constraints::ConstraintConfig cfg;
    // Forward mode for the whole step. Train uses batch statistics; Eval runs
    // against the frozen running statistics, which pins the trained function
    // to the one inference sees — used for the final polish epochs, since the
    // batch/running statistics gap otherwise rescales the estimate between
    // training and evaluation.
    Mode net_mode = Mode::Train;
};

struct StepResult {
    double recon_loss = 0.0;     // batch mean
    double softrank_loss = 0.0;  // batch mean of the soft-rank term (0 if off)
    std::vector<double> hi;      // head outputs per sample (empty for cae)
    // Per-sample scale handed to the head's backward pass: the assembled
    // constraint coefficient plus the soft-rank gradient, already divided by
    // the batch size. Positive pushes the estimate down.
    std::vector<double> head_upstream;
};

// Builds the constrained update into Param::grad for all parameter groups:
// the batch mean over samples of
//   d(recon)/d(theta) + max(||dz recon_t||, eps_min) * d(hi_t)/d(theta)
//       * sum_c R_c * dir_c * F_MH_c
// plus the soft-rank loss gradient when that term is enabled. The decoder
// sees only the loss part, the head only the constraint/soft-rank part.
// Does not touch the parameters; callers pass the result to Adam.
StepResult assemble_update(Model& model, const Tensor& x, const BatchMeta& meta,
                           const UpdateOptions& opt);

StepResult train_step(Model& model, Adam& adam, const Tensor& x, const BatchMeta& meta,
                      const UpdateOptions& opt);

// Worked 2-parameter example of a pure constraint-driven update: from
// (3, 1), step size 0.5 and unit direction (-sqrt2/2, +sqrt2/2) applied
// while x1 > x2. Returns the visited points including the start.
std::vector<std::array<double, 2>> toy_demo(double x1 = 3.0, double x2 = 1.0, double step = 0.5,
                                            int max_steps = 16);

struct EpochLog {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    // violation fractions on the validation pool; -1 for inactive constraints
    double viol_mono = -1.0;
    double viol_ene = -1.0;
    double viol_bounds = -1.0;
};

struct TrainConfig {
    int batch_size = 64;
    int max_epochs = 200;
    int patience = 10;
    double lr = 1e-3;
    // Step decay: divide the learning rate by lr_decay once lr_decay_at of the
    // epoch budget has run. The constraint updates keep their full magnitude
    // until satisfied, so without the decay the estimate oscillates around the
    // narrow bound windows with amplitude proportional to the learning rate.
    double lr_decay = 5.0;
    double lr_decay_at = 0.7;
    // From bn_freeze_at of the epoch budget on, batchnorm runs on its frozen
    // running statistics (UpdateOptions::net_mode = Eval) so the constraints
    // shape exactly the function evaluation sees.
    double bn_freeze_at = 0.7;
    double train_fraction = 0.75;
    std::array<double, 3> composition = {0.2, 0.7, 0.1};
    constraints::RescaleSet rescale;
    constraints::ConstraintConfig cfg;
    uint64_t seed = 0;
};

struct TrainSummary {
    int epochs_run = 0;
    int best_epoch = 0;
    double best_val = 0.0;
    std::vector<EpochLog> log;
};

// Full training loop: 75/25 split of the training runs' frames, stratified
// (or plain, for the unconstrained autoencoder) batches, early stopping on
// the validation score with best-epoch restore. The plain autoencoder pools
// only healthy-section frames. Deterministic in cfg.seed.
TrainSummary train_model(Model& model, const std::vector<dsp::RunFrames>& runs,
                         const std::vector<int>& train_run_idx, const TrainConfig& cfg);

// HI per frame of one run under eval-mode inference: head output for
// variants with a head, negative reconstruction L2 norm for the plain
// autoencoder.
std::vector<double> predict_hi(Model& model, const dsp::RunFrames& run);

}  // namespace cghi::cggd
