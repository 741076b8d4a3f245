// Times the serial reference kernels against the OpenMP versions on the
// production layer shapes and checks they agree bitwise.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "kernels.hpp"
#include "rng.hpp"

using namespace cghi;
using namespace cghi::kernels;

namespace {

double time_ms(int reps, const auto& fn) {
    fn();  // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

std::vector<double> random_vec(size_t n, Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

void report(const char* name, double ms_serial, double ms_par, bool same) {
    std::printf("%-24s serial %8.3f ms   openmp %8.3f ms   speedup %5.2fx   bitwise %s\n", name,
                ms_serial, ms_par, ms_serial / ms_par, same ? "equal" : "DIFFER");
}

void bench_conv(const char* name, ConvShape s, Rng& rng) {
    const auto x = random_vec(static_cast<size_t>(s.n) * s.c_in * s.l_in, rng);
    const auto w = random_vec(static_cast<size_t>(s.c_out) * s.c_in * s.k, rng);
    const auto b = random_vec(static_cast<size_t>(s.c_out), rng);
    std::vector<double> ys(static_cast<size_t>(s.n) * s.c_out * s.l_out()), yp(ys.size());

    const int reps = 20;
    const double ms_serial =
        time_ms(reps, [&] { serial::conv1d_forward(s, x.data(), w.data(), b.data(), ys.data()); });
    const double ms_par =
        time_ms(reps, [&] { par::conv1d_forward(s, x.data(), w.data(), b.data(), yp.data()); });
    report(name, ms_serial, ms_par, std::memcmp(ys.data(), yp.data(), ys.size() * 8) == 0);
}

void bench_deconv(const char* name, DeconvShape s, Rng& rng) {
    const auto x = random_vec(static_cast<size_t>(s.n) * s.c_in * s.l_in, rng);
    const auto w = random_vec(static_cast<size_t>(s.c_in) * s.c_out * s.k, rng);
    const auto b = random_vec(static_cast<size_t>(s.c_out), rng);
    std::vector<double> ys(static_cast<size_t>(s.n) * s.c_out * s.l_out()), yp(ys.size());

    const int reps = 20;
    const double ms_serial =
        time_ms(reps, [&] { serial::deconv1d_forward(s, x.data(), w.data(), b.data(), ys.data()); });
    const double ms_par =
        time_ms(reps, [&] { par::deconv1d_forward(s, x.data(), w.data(), b.data(), yp.data()); });
    report(name, ms_serial, ms_par, std::memcmp(ys.data(), yp.data(), ys.size() * 8) == 0);
}

void bench_dense(const char* name, int n, int f_in, int f_out, Rng& rng) {
    const auto x = random_vec(static_cast<size_t>(n) * f_in, rng);
    const auto w = random_vec(static_cast<size_t>(f_out) * f_in, rng);
    const auto b = random_vec(static_cast<size_t>(f_out), rng);
    std::vector<double> ys(static_cast<size_t>(n) * f_out), yp(ys.size());

    const int reps = 50;
    const double ms_serial = time_ms(
        reps, [&] { serial::dense_forward(n, f_in, f_out, x.data(), w.data(), b.data(), ys.data()); });
    const double ms_par = time_ms(
        reps, [&] { par::dense_forward(n, f_in, f_out, x.data(), w.data(), b.data(), yp.data()); });
    report(name, ms_serial, ms_par, std::memcmp(ys.data(), yp.data(), ys.size() * 8) == 0);
}

}  // namespace

int main() {
    Rng rng(42);
    std::printf("batch 64, production layer shapes\n");
    bench_conv("conv 2->64 L128", {64, 2, 128, 64, 3, 2, 1}, rng);
    bench_conv("conv 64->32 L64", {64, 64, 64, 32, 3, 2, 1}, rng);
    bench_conv("conv 32->32 L32", {64, 32, 32, 32, 3, 2, 1}, rng);
    bench_conv("conv 32->16 L16", {64, 32, 16, 16, 3, 2, 1}, rng);
    bench_deconv("deconv 16->16 L8", {64, 16, 8, 16, 3, 2, 1, 1}, rng);
    bench_deconv("deconv 64->2 L128", {64, 64, 128, 2, 3, 1, 1, 0}, rng);
    bench_dense("dense 128->16", 64, 128, 16, rng);
    bench_dense("dense 16->128", 64, 16, 128, rng);
    return 0;
}
