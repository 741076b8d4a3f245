#pragma once

#include <string>
#include <vector>

namespace cghi::metrics {

// One HI curve: time-ordered values with aligned, strictly increasing times.
struct HiSeries {
    std::string run_id;
    unsigned seed = 0;
    std::vector<double> values;
    std::vector<double> times;
};

inline constexpr double kDefaultSpan = 0.1;
inline constexpr int kDefaultBins = 10;

// Fractional ranks, 1-based, average rank on ties.
std::vector<double> average_ranks(const std::vector<double>& x);

// Spearman rank correlation between HI values and times,
// 1 - 6*sum(d^2)/(N(N^2-1)). N >= 2.
double trendability(const HiSeries& s);

// Local weighted linear regression with tricube weights over the
// span-nearest neighbours of each point. N >= 4; window >= degree+1 points.
std::vector<double> loess_smooth(const std::vector<double>& values,
                                 const std::vector<double>& times,
                                 double span_fraction = kDefaultSpan, int degree = 1);

// Mean exp(-|f - f_smooth| / max(|f|, 1e-6)); higher is smoother.
double robustness(const HiSeries& s, double span_fraction = kDefaultSpan);

// Normalized mutual information 2I/(Ha+Hb) of two equal-length series,
// binned into equal-width histograms over each series' own range.
// Both constant -> 1; exactly one constant -> 0.
double consistency(const std::vector<double>& a, const std::vector<double>& b,
                   int n_bins = kDefaultBins);

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  // sample std (n-1); 0 when n < 2
};

Aggregate mean_std(const std::vector<double>& v);

// Per-bearing row of the final report.
struct BearingMetrics {
    std::string bearing;
    Aggregate trendability;
    Aggregate robustness;
    Aggregate consistency;  // over all C(seeds, 2) pairs
};

// Trendability/robustness per seed, consistency over all seed pairs.
// All series must belong to the same run and have equal lengths.
BearingMetrics aggregate_bearing(const std::string& bearing,
                                 const std::vector<HiSeries>& per_seed,
                                 double span_fraction = kDefaultSpan,
                                 int n_bins = kDefaultBins);

}  // namespace cghi::metrics
