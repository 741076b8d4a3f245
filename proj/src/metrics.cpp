#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cghi::metrics {

std::vector<double> average_ranks(const std::vector<double>& x) {
    const size_t n = x.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&x](size_t a, size_t b) { return x[a] < x[b]; });
    std::vector<double> rank(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
        for (size_t k = i; k <= j; ++k) rank[idx[k]] = avg;
        i = j + 1;
    }
    return rank;
}

double trendability(const HiSeries& s) {
    const size_t n = s.values.size();
    if (n < 2 || s.times.size() != n)
        throw std::invalid_argument("trendability: need >= 2 aligned points");
    const std::vector<double> rf = average_ranks(s.values);
    const std::vector<double> rt = average_ranks(s.times);
    double d2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = rf[i] - rt[i];
        d2 += d * d;
    }
    const double nn = static_cast<double>(n);
    return 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0));
}

std::vector<double> loess_smooth(const std::vector<double>& values,
                                 const std::vector<double>& times, double span_fraction,
                                 int degree) {
    const size_t n = values.size();
    if (n < 4 || times.size() != n)
        throw std::invalid_argument("loess_smooth: need >= 4 aligned points");
    if (!(span_fraction > 0.0 && span_fraction <= 1.0))
        throw std::invalid_argument("loess_smooth: span must be in (0, 1]");
    if (degree != 1) throw std::invalid_argument("loess_smooth: only degree 1 supported");

    size_t window = static_cast<size_t>(std::ceil(span_fraction * static_cast<double>(n)));
    window = std::min(n, std::max<size_t>(window, 5));
    if (window < static_cast<size_t>(degree) + 1)
        throw std::invalid_argument("loess_smooth: window smaller than degree + 1");

    std::vector<double> out(n, 0.0);
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) {
        std::iota(order.begin(), order.end(), 0);
        const double ti = times[i];
        std::sort(order.begin(), order.end(), [&times, ti](size_t a, size_t b) {
            const double da = std::fabs(times[a] - ti);
            const double db = std::fabs(times[b] - ti);
            if (da != db) return da < db;
            return a < b;
        });
        const double h = std::fabs(times[order[window - 1]] - ti);

        double sw = 0, swt = 0, swtt = 0, swf = 0, swtf = 0;
        for (size_t k = 0; k < window; ++k) {
            const size_t j = order[k];
            const double dt = times[j] - ti;
            double w = 1.0;
            if (h > 0.0) {
                const double u = std::fabs(dt) / h;
                const double c = 1.0 - u * u * u;
                w = c > 0.0 ? c * c * c : 0.0;
            }
            sw += w;
            swt += w * dt;
            swtt += w * dt * dt;
            swf += w * values[j];
            swtf += w * dt * values[j];
        }
        const double det = sw * swtt - swt * swt;
        // Singular local fit (boundary point where all usable weight sits at
        // dt = 0) falls back to the weighted mean.
        out[i] = std::fabs(det) > 1e-12 * std::max(1.0, sw * swtt)
                     ? (swtt * swf - swt * swtf) / det
                     : swf / sw;
    }
    return out;
}

double robustness(const HiSeries& s, double span_fraction) {
    const std::vector<double> smooth = loess_smooth(s.values, s.times, span_fraction);
    double acc = 0.0;
    for (size_t i = 0; i < s.values.size(); ++i) {
        const double denom = std::max(std::fabs(s.values[i]), 1e-6);
        acc += std::exp(-std::fabs(s.values[i] - smooth[i]) / denom);
    }
    return acc / static_cast<double>(s.values.size());
}

namespace {

bool is_constant(const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) == *std::min_element(v.begin(), v.end());
}

std::vector<int> bin_indices(const std::vector<double>& v, int n_bins) {
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    const double range = hi - lo;
    std::vector<int> idx(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        int b = static_cast<int>((v[i] - lo) / range * n_bins);
        idx[i] = std::clamp(b, 0, n_bins - 1);
    }
    return idx;
}

}  // namespace

double consistency(const std::vector<double>& a, const std::vector<double>& b, int n_bins) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("consistency: series lengths must match and be nonempty");
    if (n_bins < 2) throw std::invalid_argument("consistency: need >= 2 bins");
    const bool ca = is_constant(a);
    const bool cb = is_constant(b);
    if (ca && cb) return 1.0;
    if (ca || cb) return 0.0;

    const std::vector<int> ia = bin_indices(a, n_bins);
    const std::vector<int> ib = bin_indices(b, n_bins);
    std::vector<double> joint(static_cast<size_t>(n_bins) * n_bins, 0.0);
    std::vector<double> pa(n_bins, 0.0), pb(n_bins, 0.0);
    const double w = 1.0 / static_cast<double>(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        joint[static_cast<size_t>(ia[i]) * n_bins + ib[i]] += w;
        pa[ia[i]] += w;
        pb[ib[i]] += w;
    }
    auto entropy = [](const std::vector<double>& p) {
        double h = 0.0;
        for (double q : p)
            if (q > 0.0) h -= q * std::log(q);
        return h;
    };
    const double ha = entropy(pa);
    const double hb = entropy(pb);
    double mi = 0.0;
    for (int x = 0; x < n_bins; ++x)
        for (int y = 0; y < n_bins; ++y) {
            const double pxy = joint[static_cast<size_t>(x) * n_bins + y];
            if (pxy > 0.0) mi += pxy * std::log(pxy / (pa[x] * pb[y]));
        }
    return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

Aggregate mean_std(const std::vector<double>& v) {
    Aggregate a;
    if (v.empty()) return a;
    a.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() < 2) return a;
    double sq = 0.0;
    for (double x : v) sq += (x - a.mean) * (x - a.mean);
    a.stddev = std::sqrt(sq / static_cast<double>(v.size() - 1));
    return a;
}

BearingMetrics aggregate_bearing(const std::string& bearing,
                                 const std::vector<HiSeries>& per_seed, double span_fraction,
                                 int n_bins) {
    if (per_seed.empty()) throw std::invalid_argument("aggregate_bearing: no series");
    BearingMetrics out;
    out.bearing = bearing;
    std::vector<double> tr, rb, cons;
    for (const auto& s : per_seed) {
        tr.push_back(trendability(s));
        rb.push_back(robustness(s, span_fraction));
    }
    for (size_t i = 0; i < per_seed.size(); ++i)
        for (size_t j = i + 1; j < per_seed.size(); ++j)
            cons.push_back(consistency(per_seed[i].values, per_seed[j].values, n_bins));
    out.trendability = mean_std(tr);
    out.robustness = mean_std(rb);
    out.consistency = cons.empty() ? Aggregate{} : mean_std(cons);
    return out;
}

}  // namespace cghi::metrics
