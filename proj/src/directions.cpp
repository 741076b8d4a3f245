#include "directions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cghi::constraints {

RescaleSet rescale_set_c1() { return RescaleSet{1.25, 1.5, 1.5, 2.0, 2.0}; }
RescaleSet rescale_set_c2() { return RescaleSet{1.05, 1.25, 1.25, 1.25, 1.25}; }

namespace {

std::vector<int> ranks_by(const std::vector<double>& values, bool descending) {
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return descending ? values[a] > values[b] : values[a] < values[b];
    });
    std::vector<int> ranks(n, 0);
    for (size_t pos = 0; pos < n; ++pos) ranks[order[pos]] = static_cast<int>(pos) + 1;
    return ranks;
}

}  // namespace

std::vector<int> rank_asc(const std::vector<double>& values) { return ranks_by(values, false); }
std::vector<int> rank_desc(const std::vector<double>& values) { return ranks_by(values, true); }

std::vector<double> dir_mono(const std::vector<double>& hi, const std::vector<double>& time_coord) {
    if (hi.size() != time_coord.size())
        throw std::invalid_argument("dir_mono: hi and time coordinate sizes differ");
    if (hi.empty()) throw std::invalid_argument("dir_mono: empty batch");
    const std::vector<int> hi_rank = rank_desc(hi);
    const std::vector<int> t_rank = rank_asc(time_coord);
    std::vector<double> dir(hi.size());
    // Positive directions push an estimate down (matching the bound and energy
    // conventions), so a sample whose value rank is ahead of its age must come
    // out positive: time rank minus descending value rank.
    for (size_t i = 0; i < hi.size(); ++i) dir[i] = static_cast<double>(t_rank[i] - hi_rank[i]);
    return dir;
}

int dir_ene(double hi_t, double hi_t0, double e_t, double e_t0, double alpha, double kappa) {
    if (alpha <= 0.0) throw std::invalid_argument("dir_ene: alpha must be positive");
    if (kappa <= 0.0 || kappa >= 1.0) throw std::invalid_argument("dir_ene: kappa must be in (0, 1)");
    const double gap = std::max(kappa, std::abs(e_t - e_t0));
    const double diff = hi_t - hi_t0;
    if (diff > 0.0) return 1;
    if (diff >= -alpha * gap) return 0;  // tolerated decrease band [-alpha*gap, 0)
    return -1;
}

std::vector<int> pair_previous_in_run(const std::vector<int>& run_ids,
                                      const std::vector<double>& timestamps) {
    const size_t n = run_ids.size();
    if (timestamps.size() != n) throw std::invalid_argument("pair_previous_in_run: size mismatch");
    std::vector<int> prev(n, -1);
    for (size_t i = 0; i < n; ++i) {
        double best_t = 0.0;
        for (size_t j = 0; j < n; ++j) {
            if (run_ids[j] != run_ids[i] || timestamps[j] >= timestamps[i]) continue;
            if (prev[i] < 0 || timestamps[j] > best_t) {
                prev[i] = static_cast<int>(j);
                best_t = timestamps[j];
            }
        }
    }
    return prev;
}

std::vector<int> dir_ene_batch(const std::vector<double>& hi, const std::vector<double>& energy,
                               const std::vector<int>& run_ids, const std::vector<double>& timestamps,
                               double alpha, double kappa) {
    const size_t n = hi.size();
    if (energy.size() != n || run_ids.size() != n || timestamps.size() != n)
        throw std::invalid_argument("dir_ene_batch: size mismatch");
    const std::vector<int> prev = pair_previous_in_run(run_ids, timestamps);
    std::vector<int> dir(n, 0);
    for (size_t i = 0; i < n; ++i) {
        if (prev[i] < 0) continue;  // earliest in-batch sample of its run
        const size_t p = static_cast<size_t>(prev[i]);
        dir[i] = dir_ene(hi[i], hi[p], energy[i], energy[p], alpha, kappa);
    }
    return dir;
}

double effective_upper(double life_fraction, const ConstraintConfig& cfg) {
    return life_fraction >= 1.0 - cfg.b_pct / 100.0 ? cfg.b_b : cfg.ub;
}

double effective_lower(double life_fraction, const ConstraintConfig& cfg) {
    return life_fraction <= cfg.a_pct / 100.0 ? cfg.b_a : cfg.lb;
}

BoundDirections dir_bounds(const std::vector<double>& hi, const std::vector<double>& life_fraction,
                           const ConstraintConfig& cfg) {
    const size_t n = hi.size();
    if (life_fraction.size() != n) throw std::invalid_argument("dir_bounds: size mismatch");
    BoundDirections out;
    out.upper.assign(n, 0);
    out.lower.assign(n, 0);
    for (size_t i = 0; i < n; ++i) {
        if (hi[i] > effective_upper(life_fraction[i], cfg)) out.upper[i] = 1;
        if (hi[i] < effective_lower(life_fraction[i], cfg)) out.lower[i] = -1;
    }
    return out;
}

double rescale_mono(double dir, int batch_size, double lo, double hi) {
    if (batch_size < 2) throw std::invalid_argument("rescale_mono: batch size must be at least 2");
    return lo + (hi - lo) * std::abs(dir) / static_cast<double>(batch_size - 1);
}

double f_mh(double dir, const std::vector<double>& grad_enc_of_hi) {
    if (dir == 0.0) throw std::invalid_argument("f_mh: zero direction must be skipped by the caller");
    double sq = 0.0;
    for (double g : grad_enc_of_hi) sq += g * g;
    const double scaled_norm = std::abs(dir) * std::sqrt(sq);
    return std::abs(dir) / std::max(scaled_norm, 1e-8);
}

}  // namespace cghi::constraints
