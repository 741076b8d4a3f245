#include "sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cghi::data {

std::vector<int> section_run(size_t n_frames) {
    if (n_frames < 20) throw std::invalid_argument("section_run: need at least 20 frames");
    const size_t healthy_end = static_cast<size_t>(std::floor(0.10 * static_cast<double>(n_frames)));
    const size_t slight_end = static_cast<size_t>(std::floor(0.95 * static_cast<double>(n_frames)));
    std::vector<int> labels(n_frames, kSlight);
    for (size_t i = 0; i < healthy_end; ++i) labels[i] = kHealthy;
    for (size_t i = slight_end; i < n_frames; ++i) labels[i] = kSharp;
    return labels;
}

std::vector<int> allocate_largest_remainder(int total, const std::vector<double>& weights) {
    if (total < 0) throw std::invalid_argument("allocate_largest_remainder: negative total");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("allocate_largest_remainder: negative weight");
        sum += w;
    }
    if (sum <= 0.0) throw std::invalid_argument("allocate_largest_remainder: weights sum to zero");

    const size_t n = weights.size();
    std::vector<int> out(n, 0);
    std::vector<double> frac(n, 0.0);
    int assigned = 0;
    for (size_t i = 0; i < n; ++i) {
        const double share = total * weights[i] / sum;
        out[i] = static_cast<int>(std::floor(share));
        frac[i] = share - out[i];
        assigned += out[i];
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&frac](size_t a, size_t b) { return frac[a] > frac[b]; });
    for (int r = total - assigned; r > 0; --r) out[order[static_cast<size_t>(total - assigned - r)]] += 1;
    return out;
}

SectionedPool build_pool(const std::vector<std::vector<int>>& section_labels,
                         const std::vector<FrameRef>& refs) {
    SectionedPool pool;
    for (int s = 0; s < 3; ++s) {
        for (size_t run = 0; run < section_labels.size(); ++run) {
            SectionedPool::Bucket bucket;
            bucket.run = static_cast<int>(run);
            for (const FrameRef& ref : refs) {
                if (ref.run != static_cast<int>(run)) continue;
                if (section_labels[run].at(static_cast<size_t>(ref.frame)) == s)
                    bucket.frames.push_back(ref.frame);
            }
            if (!bucket.frames.empty()) pool.by_section[s].push_back(std::move(bucket));
        }
    }
    return pool;
}

std::vector<FrameRef> sample_batch(const SectionedPool& pool, int batch_size,
                                   const std::array<double, 3>& composition, Rng& rng) {
    if (batch_size < 1) throw std::invalid_argument("sample_batch: batch size must be positive");
    const std::vector<int> quotas = allocate_largest_remainder(
        batch_size, {composition[0], composition[1], composition[2]});

    std::vector<FrameRef> batch;
    batch.reserve(static_cast<size_t>(batch_size));
    for (int s = 0; s < 3; ++s) {
        const size_t avail = pool.section_size(s);
        if (static_cast<size_t>(quotas[s]) > avail)
            throw std::runtime_error("sample_batch: section quota exceeds pooled frames (section " +
                                     std::to_string(s) + ": need " + std::to_string(quotas[s]) +
                                     ", have " + std::to_string(avail) + ")");
        if (quotas[s] == 0) continue;

        std::vector<double> weights;
        weights.reserve(pool.by_section[s].size());
        for (const auto& bucket : pool.by_section[s])
            weights.push_back(static_cast<double>(bucket.frames.size()));
        const std::vector<int> run_quota = allocate_largest_remainder(quotas[s], weights);

        for (size_t b = 0; b < pool.by_section[s].size(); ++b) {
            const auto& bucket = pool.by_section[s][b];
            const int take = run_quota[b];
            if (take == 0) continue;
            // Partial Fisher-Yates over a copy of the bucket: the first
            // `take` slots end up a uniform sample without replacement.
            std::vector<int> idx = bucket.frames;
            for (int i = 0; i < take; ++i) {
                const size_t j = i + rng.below(idx.size() - static_cast<size_t>(i));
                std::swap(idx[static_cast<size_t>(i)], idx[j]);
                batch.push_back({bucket.run, idx[static_cast<size_t>(i)]});
            }
        }
    }
    return batch;
}

SplitPlan split_train_val(const std::vector<FrameRef>& refs, double train_fraction, uint64_t seed) {
    if (refs.size() < 4) throw std::invalid_argument("split_train_val: need at least 4 frames");
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw std::invalid_argument("split_train_val: fraction must be in (0, 1)");
    SplitPlan plan;
    plan.seed = seed;
    plan.fraction = train_fraction;
    std::vector<FrameRef> shuffled = refs;
    Rng rng(seed);
    rng.shuffle(shuffled);
    const size_t n_train = static_cast<size_t>(std::floor(train_fraction * shuffled.size()));
    plan.train.assign(shuffled.begin(), shuffled.begin() + n_train);
    plan.val.assign(shuffled.begin() + n_train, shuffled.end());
    if (plan.train.empty() || plan.val.empty())
        throw std::invalid_argument("split_train_val: degenerate split");
    return plan;
}

}  // namespace cghi::data
