#include "soft_rank.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "directions.hpp"

namespace cghi::constraints {

namespace {

struct PavState {
    std::vector<int> block_id;
    std::vector<int> block_size;
    std::vector<double> fitted;
};

// Isotonic regression with nonincreasing fit: minimize ||v - d||^2 subject
// to v_1 >= v_2 >= ... >= v_n, by pooling adjacent violators.
PavState isotonic_nonincreasing(const std::vector<double>& d) {
    const int n = static_cast<int>(d.size());
    std::vector<double> mean;
    std::vector<int> count;
    mean.reserve(d.size());
    count.reserve(d.size());
    for (int i = 0; i < n; ++i) {
        mean.push_back(d[static_cast<size_t>(i)]);
        count.push_back(1);
        while (mean.size() > 1 && mean[mean.size() - 2] < mean.back()) {
            const double merged =
                (mean[mean.size() - 2] * count[count.size() - 2] + mean.back() * count.back()) /
                (count[count.size() - 2] + count.back());
            count[count.size() - 2] += count.back();
            mean[mean.size() - 2] = merged;
            mean.pop_back();
            count.pop_back();
        }
    }
    PavState st;
    st.block_size = count;
    st.block_id.resize(static_cast<size_t>(n));
    st.fitted.resize(static_cast<size_t>(n));
    int pos = 0;
    for (size_t b = 0; b < mean.size(); ++b) {
        for (int k = 0; k < count[b]; ++k) {
            st.block_id[static_cast<size_t>(pos)] = static_cast<int>(b);
            st.fitted[static_cast<size_t>(pos)] = mean[b];
            ++pos;
        }
    }
    return st;
}

}  // namespace

std::vector<double> proj_permutahedron(const std::vector<double>& y) {
    const int n = static_cast<int>(y.size());
    if (n == 0) throw std::invalid_argument("proj_permutahedron: empty input");
    std::vector<size_t> idx(y.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&y](size_t a, size_t b) { return y[a] > y[b]; });

    std::vector<double> d(y.size());
    for (int i = 0; i < n; ++i) d[static_cast<size_t>(i)] = y[idx[static_cast<size_t>(i)]] - (n - i);
    const PavState st = isotonic_nonincreasing(d);

    std::vector<double> p(y.size());
    for (int i = 0; i < n; ++i)
        p[idx[static_cast<size_t>(i)]] = y[idx[static_cast<size_t>(i)]] - st.fitted[static_cast<size_t>(i)];
    return p;
}

SoftRank soft_rank(const std::vector<double>& x, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("soft_rank: eps must be positive");
    const int n = static_cast<int>(x.size());
    if (n == 0) throw std::invalid_argument("soft_rank: empty input");

    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] / eps;

    std::vector<size_t> idx(y.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&y](size_t a, size_t b) { return y[a] > y[b]; });

    std::vector<double> d(y.size());
    for (int i = 0; i < n; ++i) d[static_cast<size_t>(i)] = y[idx[static_cast<size_t>(i)]] - (n - i);
    const PavState st = isotonic_nonincreasing(d);

    SoftRank out;
    out.eps = eps;
    out.ranks.resize(x.size());
    out.sort_idx.resize(x.size());
    out.block_id = st.block_id;
    out.block_size = st.block_size;
    for (int i = 0; i < n; ++i) {
        out.sort_idx[static_cast<size_t>(i)] = static_cast<int>(idx[static_cast<size_t>(i)]);
        out.ranks[idx[static_cast<size_t>(i)]] =
            y[idx[static_cast<size_t>(i)]] - st.fitted[static_cast<size_t>(i)];
    }
    return out;
}

std::vector<double> SoftRank::backward(const std::vector<double>& upstream) const {
    if (upstream.size() != ranks.size())
        throw std::invalid_argument("SoftRank::backward: upstream size mismatch");
    const size_t n = ranks.size();
    std::vector<double> block_mean(block_size.size(), 0.0);
    for (size_t pos = 0; pos < n; ++pos)
        block_mean[static_cast<size_t>(block_id[pos])] += upstream[static_cast<size_t>(sort_idx[pos])];
    for (size_t b = 0; b < block_mean.size(); ++b) block_mean[b] /= block_size[b];

    std::vector<double> grad(n, 0.0);
    for (size_t pos = 0; pos < n; ++pos) {
        const size_t j = static_cast<size_t>(sort_idx[pos]);
        grad[j] = (upstream[j] - block_mean[static_cast<size_t>(block_id[pos])]) / eps;
    }
    return grad;
}

SoftRankLoss soft_rank_loss(const std::vector<double>& hi, const std::vector<double>& time_coord,
                            double eps) {
    const size_t n = hi.size();
    if (time_coord.size() != n) throw std::invalid_argument("soft_rank_loss: size mismatch");
    if (n == 0) throw std::invalid_argument("soft_rank_loss: empty batch");

    // Earliest sample carries the largest target rank, so matching the HI's
    // ascending soft ranks to the target enforces decrease over time.
    const std::vector<int> t_rank = rank_asc(time_coord);
    std::vector<double> reversed(n);
    for (size_t i = 0; i < n; ++i) reversed[i] = static_cast<double>(n + 1) - t_rank[i];
    const SoftRank target = soft_rank(reversed, eps);
    const SoftRank pred = soft_rank(hi, eps);

    SoftRankLoss out;
    std::vector<double> diff(n);
    for (size_t i = 0; i < n; ++i) {
        diff[i] = pred.ranks[i] - target.ranks[i];
        out.loss += 0.5 * diff[i] * diff[i];
    }
    out.grad_hi = pred.backward(diff);
    return out;
}

}  // namespace cghi::constraints
