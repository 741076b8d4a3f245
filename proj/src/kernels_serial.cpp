#include "kernels.hpp"

// Loop nests precompute the valid output range per (channel, tap) pass so
// the hot loops run branch-free. kernels_parallel.cpp mirrors these bodies
// exactly (same accumulation order) with OpenMP pragmas on the owner loops.

namespace cghi::kernels::serial {

namespace {

// Range of o with 0 <= o*stride + shift < limit (shift = k - pad).
inline void tap_range(int shift, int stride, int limit, int o_count, int& o_lo, int& o_hi) {
    o_lo = 0;
    if (shift < 0) o_lo = (-shift + stride - 1) / stride;
    const int top = limit - 1 - shift;
    o_hi = top < 0 ? -1 : top / stride;
    if (o_hi > o_count - 1) o_hi = o_count - 1;
}

}  // namespace

void conv1d_forward(const ConvShape& s, const double* x, const double* w, const double* b, double* y) {
    const int lo = s.l_out();
    for (int n = 0; n < s.n; ++n) {
        for (int co = 0; co < s.c_out; ++co) {
            double* yc = y + (static_cast<size_t>(n) * s.c_out + co) * lo;
            const double bias = b ? b[co] : 0.0;
            for (int o = 0; o < lo; ++o) yc[o] = bias;
            for (int ci = 0; ci < s.c_in; ++ci) {
                const double* xc = x + (static_cast<size_t>(n) * s.c_in + ci) * s.l_in;
                const double* wk = w + (static_cast<size_t>(co) * s.c_in + ci) * s.k;
                for (int k = 0; k < s.k; ++k) {
                    const int shift = k - s.pad;
                    int o_lo, o_hi;
                    tap_range(shift, s.stride, s.l_in, lo, o_lo, o_hi);
                    const double wv = wk[k];
                    for (int o = o_lo; o <= o_hi; ++o) yc[o] += wv * xc[o * s.stride + shift];
                }
            }
        }
    }
}

void conv1d_backward_input(const ConvShape& s, const double* gy, const double* w, double* gx) {
    const int lo = s.l_out();
    for (int n = 0; n < s.n; ++n) {
        for (int ci = 0; ci < s.c_in; ++ci) {
            double* gxc = gx + (static_cast<size_t>(n) * s.c_in + ci) * s.l_in;
            for (int li = 0; li < s.l_in; ++li) gxc[li] = 0.0;
            for (int co = 0; co < s.c_out; ++co) {
                const double* gyc = gy + (static_cast<size_t>(n) * s.c_out + co) * lo;
                const double* wk = w + (static_cast<size_t>(co) * s.c_in + ci) * s.k;
                for (int k = 0; k < s.k; ++k) {
                    const int shift = k - s.pad;
                    int o_lo, o_hi;
                    tap_range(shift, s.stride, s.l_in, lo, o_lo, o_hi);
                    const double wv = wk[k];
                    for (int o = o_lo; o <= o_hi; ++o) gxc[o * s.stride + shift] += wv * gyc[o];
                }
            }
        }
    }
}

void conv1d_backward_params(const ConvShape& s, const double* x, const double* gy, double* gw, double* gb) {
    const int lo = s.l_out();
    for (int co = 0; co < s.c_out; ++co) {
        for (int ci = 0; ci < s.c_in; ++ci) {
            for (int k = 0; k < s.k; ++k) {
                const int shift = k - s.pad;
                int o_lo, o_hi;
                tap_range(shift, s.stride, s.l_in, lo, o_lo, o_hi);
                double acc = 0.0;
                for (int n = 0; n < s.n; ++n) {
                    const double* xc = x + (static_cast<size_t>(n) * s.c_in + ci) * s.l_in;
                    const double* gyc = gy + (static_cast<size_t>(n) * s.c_out + co) * lo;
                    for (int o = o_lo; o <= o_hi; ++o) acc += gyc[o] * xc[o * s.stride + shift];
                }
                gw[(static_cast<size_t>(co) * s.c_in + ci) * s.k + k] += acc;
            }
        }
    }
    if (gb) {
        for (int co = 0; co < s.c_out; ++co) {
            double acc = 0.0;
            for (int n = 0; n < s.n; ++n) {
                const double* gyc = gy + (static_cast<size_t>(n) * s.c_out + co) * lo;
                for (int o = 0; o < lo; ++o) acc += gyc[o];
            }
            gb[co] += acc;
        }
    }
}

void deconv1d_forward(const DeconvShape& s, const double* x, const double* w, const double* b, double* y) {
    const int lo = s.l_out();
    for (int n = 0; n < s.n; ++n) {
        for (int co = 0; co < s.c_out; ++co) {
            double* yc = y + (static_cast<size_t>(n) * s.c_out + co) * lo;
            const double bias = b ? b[co] : 0.0;
            for (int o = 0; o < lo; ++o) yc[o] = bias;
            for (int ci = 0; ci < s.c_in; ++ci) {
                const double* xc = x + (static_cast<size_t>(n) * s.c_in + ci) * s.l_in;
                const double* wk = w + (static_cast<size_t>(ci) * s.c_out + co) * s.k;
                for (int k = 0; k < s.k; ++k) {
                    const int shift = k - s.pad;  // o = li*stride + shift
                    int li_lo, li_hi;
                    tap_range(shift, s.stride, lo, s.l_in, li_lo, li_hi);
                    const double wv = wk[k];
                    for (int li = li_lo; li <= li_hi; ++li) yc[li * s.stride + shift] += wv * xc[li];
                }
            }
        }
    }
}

void deconv1d_backward_input(const DeconvShape& s, const double* gy, const double* w, double* gx) {
    const int lo = s.l_out();
    for (int n = 0; n < s.n; ++n) {
        for (int ci = 0; ci < s.c_in; ++ci) {
            double* gxc = gx + (static_cast<size_t>(n) * s.c_in + ci) * s.l_in;
            for (int li = 0; li < s.l_in; ++li) gxc[li] = 0.0;
            for (int co = 0; co < s.c_out; ++co) {
                const double* gyc = gy + (static_cast<size_t>(n) * s.c_out + co) * lo;
                const double* wk = w + (static_cast<size_t>(ci) * s.c_out + co) * s.k;
                for (int k = 0; k < s.k; ++k) {
                    const int shift = k - s.pad;
                    int li_lo, li_hi;
                    tap_range(shift, s.stride, lo, s.l_in, li_lo, li_hi);
                    const double wv = wk[k];
                    for (int li = li_lo; li <= li_hi; ++li) gxc[li] += wv * gyc[li * s.stride + shift];
                }
            }
        }
    }
}

void deconv1d_backward_params(const DeconvShape& s, const double* x, const double* gy, double* gw, double* gb) {
    const int lo = s.l_out();
    for (int ci = 0; ci < s.c_in; ++ci) {
        for (int co = 0; co < s.c_out; ++co) {
            for (int k = 0; k < s.k; ++k) {
                const int shift = k - s.pad;
                int li_lo, li_hi;
                tap_range(shift, s.stride, lo, s.l_in, li_lo, li_hi);
                double acc = 0.0;
                for (int n = 0; n < s.n; ++n) {
                    const double* xc = x + (static_cast<size_t>(n) * s.c_in + ci) * s.l_in;
                    const double* gyc = gy + (static_cast<size_t>(n) * s.c_out + co) * lo;
                    for (int li = li_lo; li <= li_hi; ++li) acc += xc[li] * gyc[li * s.stride + shift];
                }
                gw[(static_cast<size_t>(ci) * s.c_out + co) * s.k + k] += acc;
            }
        }
    }
    if (gb) {
        for (int co = 0; co < s.c_out; ++co) {
            double acc = 0.0;
            for (int n = 0; n < s.n; ++n) {
                const double* gyc = gy + (static_cast<size_t>(n) * s.c_out + co) * lo;
                for (int o = 0; o < lo; ++o) acc += gyc[o];
            }
            gb[co] += acc;
        }
    }
}

void dense_forward(int n, int f_in, int f_out, const double* x, const double* w, const double* b, double* y) {
    for (int i = 0; i < n; ++i) {
        const double* xi = x + static_cast<size_t>(i) * f_in;
        double* yi = y + static_cast<size_t>(i) * f_out;
        for (int o = 0; o < f_out; ++o) {
            double acc = b ? b[o] : 0.0;
            const double* wo = w + static_cast<size_t>(o) * f_in;
            for (int j = 0; j < f_in; ++j) acc += wo[j] * xi[j];
            yi[o] = acc;
        }
    }
}

void dense_backward_input(int n, int f_in, int f_out, const double* gy, const double* w, double* gx) {
    for (int i = 0; i < n; ++i) {
        const double* gyi = gy + static_cast<size_t>(i) * f_out;
        double* gxi = gx + static_cast<size_t>(i) * f_in;
        for (int j = 0; j < f_in; ++j) {
            double acc = 0.0;
            for (int o = 0; o < f_out; ++o) acc += w[static_cast<size_t>(o) * f_in + j] * gyi[o];
            gxi[j] = acc;
        }
    }
}

void dense_backward_params(int n, int f_in, int f_out, const double* x, const double* gy, double* gw, double* gb) {
    for (int o = 0; o < f_out; ++o) {
        double* gwo = gw + static_cast<size_t>(o) * f_in;
        for (int j = 0; j < f_in; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i)
                acc += gy[static_cast<size_t>(i) * f_out + o] * x[static_cast<size_t>(i) * f_in + j];
            gwo[j] += acc;
        }
        if (gb) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += gy[static_cast<size_t>(i) * f_out + o];
            gb[o] += acc;
        }
    }
}

}  // namespace cghi::kernels::serial
