#include "fft.hpp"

#include <cmath>
#include <stdexcept>

namespace cghi::dsp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

int smallest_prime_factor(int n) {
    for (int p = 2; p * p <= n; ++p)
        if (n % p == 0) return p;
    return n;
}

void fft_rec(std::vector<std::complex<double>>& a) {
    const int n = static_cast<int>(a.size());
    if (n == 1) return;
    const int p = smallest_prime_factor(n);
    const int m = n / p;

    // Decimate into p interleaved subsequences and transform each.
    std::vector<std::vector<std::complex<double>>> sub(p, std::vector<std::complex<double>>(m));
    for (int r = 0; r < p; ++r)
        for (int q = 0; q < m; ++q) sub[r][q] = a[static_cast<size_t>(q) * p + r];
    for (auto& s : sub) fft_rec(s);

    // Combine: X[q + t*m] = sum_r W_n^{r(q + t*m)} * sub_r[q].
    for (int t = 0; t < p; ++t) {
        for (int q = 0; q < m; ++q) {
            const int k = q + t * m;
            std::complex<double> acc(0.0, 0.0);
            for (int r = 0; r < p; ++r) {
                const double ang = -kTwoPi * (static_cast<double>(r) * k) / n;
                acc += std::complex<double>(std::cos(ang), std::sin(ang)) * sub[r][q];
            }
            a[k] = acc;
        }
    }
}

}  // namespace

void fft(std::vector<std::complex<double>>& a) {
    if (a.empty()) throw std::invalid_argument("fft: empty input");
    fft_rec(a);
}

std::vector<double> magnitude_spectrum(const std::vector<double>& x) {
    std::vector<std::complex<double>> buf(x.size());
    for (size_t i = 0; i < x.size(); ++i) buf[i] = std::complex<double>(x[i], 0.0);
    fft(buf);
    std::vector<double> mag(x.size() / 2 + 1);
    for (size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(buf[k]);
    return mag;
}

}  // namespace cghi::dsp
