#pragma once

#include <vector>

namespace cghi::constraints {

// Knobs shared by the constraint directions and the constrained update.
struct ConstraintConfig {
    double alpha = 1.0;    // tolerated HI decrease per unit energy gap
    double kappa = 0.05;   // minimum energy gap used in that tolerance
    double a_pct = 10.0;   // early-life window, percent of life
    double b_pct = 5.0;    // end-of-life window, percent of life
    double b_a = 0.9;      // raised lower bound inside the early-life window
    double b_b = 0.05;     // lowered upper bound inside the end-of-life window
    double lb = 0.0;       // default lower bound
    double ub = 1.0;       // default upper bound
    double epsilon_min = 0.01;  // floor for the loss-gradient norm scale
    double eps_sr = 1.0;        // soft-rank regularization strength
    double lambda_sr = 1.0;     // soft-rank loss weight
};

// Constraint rescale factors. The monotonicity factor is dynamic between
// mono_lo and mono_hi; the others are fixed.
struct RescaleSet {
    double mono_lo = 1.25;
    double mono_hi = 1.5;
    double ene = 1.5;
    double upper = 2.0;
    double lower = 2.0;
};

RescaleSet rescale_set_c1();  // mono [1.25, 1.5], ene 1.5, bounds 2.0
RescaleSet rescale_set_c2();  // mono [1.05, 1.25], ene 1.25, bounds 1.25

// 1-based ranks, ascending (smallest value gets 1) or descending (largest
// gets 1); ties broken stably by original index.
std::vector<int> rank_asc(const std::vector<double>& values);
std::vector<int> rank_desc(const std::vector<double>& values);

// Monotonicity direction per sample: ascending rank of the time coordinate
// minus descending rank of the HI. Positive means the HI is ranked too high
// for its age and should decrease; zero everywhere iff the HI ordering is
// exactly reversed in time.
std::vector<double> dir_mono(const std::vector<double>& hi, const std::vector<double>& time_coord);

// Energy-consistency direction for one (sample, earlier-sample) pair.
// Returns 1 (HI increased), 0 (HI decreased within the tolerated alpha * gap
// band) or -1 (HI decreased too much, push back up).
int dir_ene(double hi_t, double hi_t0, double e_t, double e_t0, double alpha, double kappa);

// Pairs every batch sample with the same run's closest earlier sample inside
// the batch; -1 where the sample is its run's earliest in the batch.
std::vector<int> pair_previous_in_run(const std::vector<int>& run_ids,
                                      const std::vector<double>& timestamps);

// Batched energy direction using the in-batch pairing; unpaired samples get 0.
std::vector<int> dir_ene_batch(const std::vector<double>& hi, const std::vector<double>& energy,
                               const std::vector<int>& run_ids, const std::vector<double>& timestamps,
                               double alpha, double kappa);

struct BoundDirections {
    std::vector<int> upper;  // 1 where hi exceeds the effective upper bound
    std::vector<int> lower;  // -1 where hi is under the effective lower bound
};

// Effective bounds tighten near the ends of life: lower bound b_a when
// life_fraction <= a_pct/100, upper bound b_b when life_fraction >=
// 1 - b_pct/100.
double effective_upper(double life_fraction, const ConstraintConfig& cfg);
double effective_lower(double life_fraction, const ConstraintConfig& cfg);
BoundDirections dir_bounds(const std::vector<double>& hi, const std::vector<double>& life_fraction,
                           const ConstraintConfig& cfg);

// Dynamic monotonicity rescale factor: lo + (hi - lo) * |dir| / (batch - 1).
double rescale_mono(double dir, int batch_size, double lo, double hi);

// Norm-equalizing factor |dir| / max(||dir * grad_enc||, 1e-8); for a scalar
// direction this is 1 / ||grad_enc|| away from the floor.
double f_mh(double dir, const std::vector<double>& grad_enc_of_hi);

}  // namespace cghi::constraints
