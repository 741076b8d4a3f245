#include "kernels.hpp"

#include <atomic>

namespace cghi::kernels {

namespace {
std::atomic<Backend> g_backend{Backend::Parallel};
}

void set_backend(Backend b) { g_backend.store(b); }
Backend backend() { return g_backend.load(); }

#define CGHI_DISPATCH(fn, ...)                          \
    if (backend() == Backend::Serial) {                 \
        serial::fn(__VA_ARGS__);                        \
    } else {                                            \
        par::fn(__VA_ARGS__);                           \
    }

void conv1d_forward(const ConvShape& s, const double* x, const double* w, const double* b, double* y) {
    CGHI_DISPATCH(conv1d_forward, s, x, w, b, y)
}
void conv1d_backward_input(const ConvShape& s, const double* gy, const double* w, double* gx) {
    CGHI_DISPATCH(conv1d_backward_input, s, gy, w, gx)
}
void conv1d_backward_params(const ConvShape& s, const double* x, const double* gy, double* gw, double* gb) {
    CGHI_DISPATCH(conv1d_backward_params, s, x, gy, gw, gb)
}

void deconv1d_forward(const DeconvShape& s, const double* x, const double* w, const double* b, double* y) {
    CGHI_DISPATCH(deconv1d_forward, s, x, w, b, y)
}
void deconv1d_backward_input(const DeconvShape& s, const double* gy, const double* w, double* gx) {
    CGHI_DISPATCH(deconv1d_backward_input, s, gy, w, gx)
}
void deconv1d_backward_params(const DeconvShape& s, const double* x, const double* gy, double* gw, double* gb) {
    CGHI_DISPATCH(deconv1d_backward_params, s, x, gy, gw, gb)
}

void dense_forward(int n, int f_in, int f_out, const double* x, const double* w, const double* b, double* y) {
    CGHI_DISPATCH(dense_forward, n, f_in, f_out, x, w, b, y)
}
void dense_backward_input(int n, int f_in, int f_out, const double* gy, const double* w, double* gx) {
    CGHI_DISPATCH(dense_backward_input, n, f_in, f_out, gy, w, gx)
}
void dense_backward_params(int n, int f_in, int f_out, const double* x, const double* gy, double* gw, double* gb) {
    CGHI_DISPATCH(dense_backward_params, n, f_in, f_out, x, gy, gw, gb)
}

#undef CGHI_DISPATCH

}  // namespace cghi::kernels
