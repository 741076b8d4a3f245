#pragma once

#include <array>
#include <vector>

#include "mel.hpp"
#include "rng.hpp"

namespace cghi::data {

// Degradation sections of a run: healthy = first 10% of frames, sharp =
// final 5%, slight = everything between. Boundaries at floor(0.10 * N) and
// floor(0.95 * N).
enum Section : int { kHealthy = 0, kSlight = 1, kSharp = 2 };

// Per-frame section labels for one run. Requires at least 20 frames so every
// section is nonempty.
std::vector<int> section_run(size_t n_frames);

// Largest-remainder apportionment of `total` across nonnegative weights.
// Floors of the proportional shares first, then leftover units go to the
// largest fractional parts (ties broken toward lower index).
std::vector<int> allocate_largest_remainder(int total, const std::vector<double>& weights);

struct FrameRef {
    int run = 0;
    int frame = 0;
    bool operator==(const FrameRef&) const = default;
};

// Frames available to the batch sampler, bucketed by (section, run).
struct SectionedPool {
    struct Bucket {
        int run = 0;
        std::vector<int> frames;
    };
    std::array<std::vector<Bucket>, 3> by_section;

    size_t section_size(int s) const {
        size_t n = 0;
        for (const auto& b : by_section[s]) n += b.frames.size();
        return n;
    }
};

// Groups the given frame references by section label (labels indexed per
// run, aligned with runs[i].frames).
SectionedPool build_pool(const std::vector<std::vector<int>>& section_labels,
                         const std::vector<FrameRef>& refs);

// Draws a stratified batch: section quotas from the composition fractions by
// largest remainder, each section quota split across runs proportionally to
// their section sizes, sampling without replacement within the batch.
std::vector<FrameRef> sample_batch(const SectionedPool& pool, int batch_size,
                                   const std::array<double, 3>& composition, Rng& rng);

struct SplitPlan {
    std::vector<FrameRef> train;
    std::vector<FrameRef> val;
    uint64_t seed = 0;
    double fraction = 0.75;
};

// Shuffled train/validation split of the pooled frames of the training runs.
SplitPlan split_train_val(const std::vector<FrameRef>& refs, double train_fraction, uint64_t seed);

}  // namespace cghi::data
