#pragma once

#include <cstddef>

// Hot numeric kernels behind the conv / deconv / dense layers. Every kernel
// exists twice: a plain serial reference (kernels::serial) and an OpenMP
// version (kernels::par). The parallel loops are owner-computes: each output
// element is written by exactly one iteration and accumulated in the same
// order as the serial code, so the two backends produce bitwise identical
// results at any thread count. Tests assert that equality; bench_kernels
// compares their timings.
//
// Layouts (row-major doubles):
//   x  (N, C_in, L_in)      y  (N, C_out, L_out)
//   conv weight   (C_out, C_in, K)
//   deconv weight (C_in, C_out, K)
//   dense x (N, F_in), w (F_out, F_in), y (N, F_out)

namespace cghi::kernels {

struct ConvShape {
    int n = 0;
    int c_in = 0;
    int l_in = 0;
    int c_out = 0;
    int k = 0;
    int stride = 1;
    int pad = 0;

    int l_out() const { return (l_in + 2 * pad - k) / stride + 1; }
};

struct DeconvShape {
    int n = 0;
    int c_in = 0;
    int l_in = 0;
    int c_out = 0;
    int k = 0;
    int stride = 1;
    int pad = 0;
    int out_pad = 0;

    int l_out() const { return (l_in - 1) * stride - 2 * pad + k + out_pad; }
};

enum class Backend { Serial, Parallel };

void set_backend(Backend b);
Backend backend();

namespace serial {
void conv1d_forward(const ConvShape& s, const double* x, const double* w, const double* b, double* y);
void conv1d_backward_input(const ConvShape& s, const double* gy, const double* w, double* gx);
void conv1d_backward_params(const ConvShape& s, const double* x, const double* gy, double* gw, double* gb);

void deconv1d_forward(const DeconvShape& s, const double* x, const double* w, const double* b, double* y);
void deconv1d_backward_input(const DeconvShape& s, const double* gy, const double* w, double* gx);
void deconv1d_backward_params(const DeconvShape& s, const double* x, const double* gy, double* gw, double* gb);

void dense_forward(int n, int f_in, int f_out, const double* x, const double* w, const double* b, double* y);
void dense_backward_input(int n, int f_in, int f_out, const double* gy, const double* w, double* gx);
void dense_backward_params(int n, int f_in, int f_out, const double* x, const double* gy, double* gw, double* gb);
}  // namespace serial

namespace par {
void conv1d_forward(const ConvShape& s, const double* x, const double* w, const double* b, double* y);
void conv1d_backward_input(const ConvShape& s, const double* gy, const double* w, double* gx);
void conv1d_backward_params(const ConvShape& s, const double* x, const double* gy, double* gw, double* gb);

void deconv1d_forward(const DeconvShape& s, const double* x, const double* w, const double* b, double* y);
void deconv1d_backward_input(const DeconvShape& s, const double* gy, const double* w, double* gx);
void deconv1d_backward_params(const DeconvShape& s, const double* x, const double* gy, double* gw, double* gb);

void dense_forward(int n, int f_in, int f_out, const double* x, const double* w, const double* b, double* y);
void dense_backward_input(int n, int f_in, int f_out, const double* gy, const double* w, double* gx);
void dense_backward_params(int n, int f_in, int f_out, const double* x, const double* gy, double* gw, double* gb);
}  // namespace par

// Dispatch to the active backend.
void conv1d_forward(const ConvShape& s, const double* x, const double* w, const double* b, double* y);
void conv1d_backward_input(const ConvShape& s, const double* gy, const double* w, double* gx);
void conv1d_backward_params(const ConvShape& s, const double* x, const double* gy, double* gw, double* gb);

void deconv1d_forward(const DeconvShape& s, const double* x, const double* w, const double* b, double* y);
void deconv1d_backward_input(const DeconvShape& s, const double* gy, const double* w, double* gx);
void deconv1d_backward_params(const DeconvShape& s, const double* x, const double* gy, double* gw, double* gb);

void dense_forward(int n, int f_in, int f_out, const double* x, const double* w, const double* b, double* y);
void dense_backward_input(int n, int f_in, int f_out, const double* gy, const double* w, double* gx);
void dense_backward_params(int n, int f_in, int f_out, const double* x, const double* gy, double* gw, double* gb);

}  // namespace cghi::kernels
