#pragma once

#include <complex>
#include <vector>

namespace cghi::dsp {

// In-place complex FFT for any length whose prime factors are small
// (mixed-radix Cooley-Tukey with a naive DFT combine per prime factor).
// Snapshot length 2560 = 2^9 * 5 is the main consumer.
void fft(std::vector<std::complex<double>>& a);

// Magnitude spectrum |X_k| for k = 0..n/2 of a real signal.
std::vector<double> magnitude_spectrum(const std::vector<double>& x);

}  // namespace cghi::dsp
