#include "layers.hpp"

#include <cmath>
#include <stdexcept>

namespace cghi {

namespace {

void init_uniform(Param& p, Init init, int fan_in, int fan_out, Rng& rng) {
    double limit = 0.0;
    if (init == Init::ReluUniform) {
        limit = std::sqrt(6.0 / fan_in);
    } else {
        limit = std::sqrt(6.0 / (fan_in + fan_out));
    }
    for (auto& v : p.value) v = rng.uniform(-limit, limit);
}

void check_input(const Tensor& x, int ndim, int c, const char* who) {
    if (x.ndim() != ndim) throw std::invalid_argument(std::string(who) + ": wrong input rank");
    if (x.dim(1) != c) throw std::invalid_argument(std::string(who) + ": wrong channel/feature count");
}

}  // namespace

void Layer::require_forward(bool has) const {
    if (!has) throw std::logic_error("layer backward called before forward");
}

// ---- Conv1d ----

Conv1d::Conv1d(std::string name, int c_in, int c_out, int k, int stride, int pad, Init init, Rng& rng,
               bool bias)
    : w(name + ".w", {c_out, c_in, k}),
      b(name + ".b", {c_out}),
      c_in_(c_in),
      c_out_(c_out),
      k_(k),
      stride_(stride),
      pad_(pad),
      bias_(bias) {
    init_uniform(w, init, c_in * k, c_out * k, rng);
}

Tensor Conv1d::forward(const Tensor& x, Mode) {
    check_input(x, 3, c_in_, "conv1d");
    kernels::ConvShape s{x.dim(0), c_in_, x.dim(2), c_out_, k_, stride_, pad_};
    if (s.l_out() <= 0) throw std::invalid_argument("conv1d: output length would be nonpositive");
    Tensor y({s.n, c_out_, s.l_out()});
    kernels::conv1d_forward(s, x.values.data(), w.value.data(), bias_ ? b.value.data() : nullptr,
                            y.values.data());
    x_cache_ = x;
    has_forward_ = true;
    return y;
}

Tensor Conv1d::backward(const Tensor& gy, bool accumulate_params) {
    require_forward(has_forward_);
    kernels::ConvShape s{x_cache_.dim(0), c_in_, x_cache_.dim(2), c_out_, k_, stride_, pad_};
    Tensor gx(x_cache_.shape);
    kernels::conv1d_backward_input(s, gy.values.data(), w.value.data(), gx.values.data());
    if (accumulate_params) {
        kernels::conv1d_backward_params(s, x_cache_.values.data(), gy.values.data(), w.grad.data(),
                                        bias_ ? b.grad.data() : nullptr);
    }
    return gx;
}

std::vector<Param*> Conv1d::params() {
    if (bias_) return {&w, &b};
    return {&w};
}

std::string Conv1d::describe() const {
    return "conv1d(" + std::to_string(c_in_) + "->" + std::to_string(c_out_) + ", k" + std::to_string(k_) +
           ", s" + std::to_string(stride_) + ", p" + std::to_string(pad_) + ")";
}

// ---- Deconv1d ----

Deconv1d::Deconv1d(std::string name, int c_in, int c_out, int k, int stride, int pad, int out_pad,
                   Init init, Rng& rng, bool bias)
    : w(name + ".w", {c_in, c_out, k}),
      b(name + ".b", {c_out}),
      c_in_(c_in),
      c_out_(c_out),
      k_(k),
      stride_(stride),
      pad_(pad),
      out_pad_(out_pad),
      bias_(bias) {
    init_uniform(w, init, c_in * k, c_out * k, rng);
}

Tensor Deconv1d::forward(const Tensor& x, Mode) {
    check_input(x, 3, c_in_, "deconv1d");
    kernels::DeconvShape s{x.dim(0), c_in_, x.dim(2), c_out_, k_, stride_, pad_, out_pad_};
    if (s.l_out() <= 0) throw std::invalid_argument("deconv1d: output length would be nonpositive");
    Tensor y({s.n, c_out_, s.l_out()});
    kernels::deconv1d_forward(s, x.values.data(), w.value.data(), bias_ ? b.value.data() : nullptr,
                              y.values.data());
    x_cache_ = x;
    has_forward_ = true;
    return y;
}

Tensor Deconv1d::backward(const Tensor& gy, bool accumulate_params) {
    require_forward(has_forward_);
    kernels::DeconvShape s{x_cache_.dim(0), c_in_, x_cache_.dim(2), c_out_, k_, stride_, pad_, out_pad_};
    Tensor gx(x_cache_.shape);
    kernels::deconv1d_backward_input(s, gy.values.data(), w.value.data(), gx.values.data());
    if (accumulate_params) {
        kernels::deconv1d_backward_params(s, x_cache_.values.data(), gy.values.data(), w.grad.data(),
                                          bias_ ? b.grad.data() : nullptr);
    }
    return gx;
}

std::vector<Param*> Deconv1d::params() {
    if (bias_) return {&w, &b};
    return {&w};
}

std::string Deconv1d::describe() const {
    return "deconv1d(" + std::to_string(c_in_) + "->" + std::to_string(c_out_) + ", k" +
           std::to_string(k_) + ", s" + std::to_string(stride_) + ", p" + std::to_string(pad_) + ", op" +
           std::to_string(out_pad_) + ")";
}

// ---- Dense ----

Dense::Dense(std::string name, int f_in, int f_out, Init init, Rng& rng, bool bias)
    : w(name + ".w", {f_out, f_in}), b(name + ".b", {f_out}), f_in_(f_in), f_out_(f_out), bias_(bias) {
    init_uniform(w, init, f_in, f_out, rng);
}

Tensor Dense::forward(const Tensor& x, Mode) {
    check_input(x, 2, f_in_, "dense");
    Tensor y({x.dim(0), f_out_});
    kernels::dense_forward(x.dim(0), f_in_, f_out_, x.values.data(), w.value.data(),
                           bias_ ? b.value.data() : nullptr, y.values.data());
    x_cache_ = x;
    has_forward_ = true;
    return y;
}

Tensor Dense::backward(const Tensor& gy, bool accumulate_params) {
    require_forward(has_forward_);
    Tensor gx(x_cache_.shape);
    kernels::dense_backward_input(x_cache_.dim(0), f_in_, f_out_, gy.values.data(), w.value.data(),
                                  gx.values.data());
    if (accumulate_params) {
        kernels::dense_backward_params(x_cache_.dim(0), f_in_, f_out_, x_cache_.values.data(),
                                       gy.values.data(), w.grad.data(), bias_ ? b.grad.data() : nullptr);
    }
    return gx;
}

std::vector<Param*> Dense::params() {
    if (bias_) return {&w, &b};
    return {&w};
}

std::string Dense::describe() const {
    return "dense(" + std::to_string(f_in_) + "->" + std::to_string(f_out_) + ")";
}

// ---- BatchNorm1d ----

BatchNorm1d::BatchNorm1d(std::string name, int channels, double eps, double momentum)
    : gamma(name + ".gamma", {channels}),
      beta(name + ".beta", {channels}),
      running_mean(channels, 0.0),
      running_var(channels, 1.0),
      name_(std::move(name)),
      channels_(channels),
      eps_(eps),
      momentum_(momentum) {
    std::fill(gamma.value.begin(), gamma.value.end(), 1.0);
}

std::vector<NormBuffer> BatchNorm1d::buffers() {
    return {{name_ + ".running_mean", &running_mean}, {name_ + ".running_var", &running_var}};
}

Tensor BatchNorm1d::forward(const Tensor& x, Mode mode) {
    check_input(x, 3, channels_, "batchnorm1d");
    const int n = x.dim(0);
    const int l = x.dim(2);
    if ((mode == Mode::Train || mode == Mode::FrozenStats) && n < 2)
        throw std::runtime_error("batchnorm1d: training-mode statistics need a batch of at least 2");

    std::vector<double> mean(channels_), var(channels_);
    if (mode == Mode::Eval) {
        mean = running_mean;
        var = running_var;
    } else {
        const double count = static_cast<double>(n) * l;
        for (int c = 0; c < channels_; ++c) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < l; ++j) s += x.at3(i, c, j);
            mean[c] = s / count;
            double sq = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < l; ++j) {
                    const double d = x.at3(i, c, j) - mean[c];
                    sq += d * d;
                }
            var[c] = sq / count;
        }
        if (mode == Mode::Train) {
            for (int c = 0; c < channels_; ++c) {
                running_mean[c] = (1.0 - momentum_) * running_mean[c] + momentum_ * mean[c];
                running_var[c] = (1.0 - momentum_) * running_var[c] + momentum_ * var[c];
            }
        }
    }

    Tensor y(x.shape);
    xhat_cache_ = Tensor(x.shape);
    std_cache_.assign(channels_, 0.0);
    for (int c = 0; c < channels_; ++c) {
        const double sd = std::sqrt(var[c] + eps_);
        std_cache_[c] = sd;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < l; ++j) {
                const double xh = (x.at3(i, c, j) - mean[c]) / sd;
                xhat_cache_.at3(i, c, j) = xh;
                y.at3(i, c, j) = gamma.value[c] * xh + beta.value[c];
            }
    }
    mode_cache_ = mode;
    has_forward_ = true;
    return y;
}

Tensor BatchNorm1d::backward(const Tensor& gy, bool accumulate_params) {
    require_forward(has_forward_);
    const int n = gy.dim(0);
    const int l = gy.dim(2);
    Tensor gx(gy.shape);
    for (int c = 0; c < channels_; ++c) {
        const double sd = std_cache_[c];
        if (mode_cache_ == Mode::Train) {
            // Full gradient through the batch statistics.
            const double count = static_cast<double>(n) * l;
            double sum_gy = 0.0, sum_gy_xhat = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < l; ++j) {
                    sum_gy += gy.at3(i, c, j);
                    sum_gy_xhat += gy.at3(i, c, j) * xhat_cache_.at3(i, c, j);
                }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < l; ++j) {
                    const double g = gy.at3(i, c, j);
                    const double xh = xhat_cache_.at3(i, c, j);
                    gx.at3(i, c, j) =
                        gamma.value[c] / sd * (g - sum_gy / count - xh * sum_gy_xhat / count);
                }
        } else {
            // Eval and FrozenStats treat the statistics as constants.
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < l; ++j) gx.at3(i, c, j) = gy.at3(i, c, j) * gamma.value[c] / sd;
        }
        if (accumulate_params) {
            double ggamma = 0.0, gbeta = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < l; ++j) {
                    ggamma += gy.at3(i, c, j) * xhat_cache_.at3(i, c, j);
                    gbeta += gy.at3(i, c, j);
                }
            gamma.grad[c] += ggamma;
            beta.grad[c] += gbeta;
        }
    }
    return gx;
}

std::vector<Param*> BatchNorm1d::params() { return {&gamma, &beta}; }

std::string BatchNorm1d::describe() const { return "batchnorm1d(" + std::to_string(channels_) + ")"; }

// ---- ReLU ----

Tensor ReLU::forward(const Tensor& x, Mode) {
    Tensor y(x.shape);
    for (size_t i = 0; i < x.numel(); ++i) y.values[i] = x.values[i] > 0.0 ? x.values[i] : 0.0;
    x_cache_ = x;
    has_forward_ = true;
    return y;
}

Tensor ReLU::backward(const Tensor& gy, bool) {
    require_forward(has_forward_);
    Tensor gx(gy.shape);
    for (size_t i = 0; i < gy.numel(); ++i)
        gx.values[i] = x_cache_.values[i] > 0.0 ? gy.values[i] : 0.0;
    return gx;
}

// ---- Flatten / Unflatten ----

Tensor Flatten::forward(const Tensor& x, Mode) {
    in_shape_ = x.shape;
    has_forward_ = true;
    return x.reshaped({x.dim(0), x.dim(1) * x.dim(2)});
}

Tensor Flatten::backward(const Tensor& gy, bool) {
    require_forward(has_forward_);
    return gy.reshaped(in_shape_);
}

Tensor Unflatten::forward(const Tensor& x, Mode) {
    has_forward_ = true;
    return x.reshaped({x.dim(0), c_, l_});
}

Tensor Unflatten::backward(const Tensor& gy, bool) {
    require_forward(has_forward_);
    return gy.reshaped({gy.dim(0), c_ * l_});
}

std::string Unflatten::describe() const {
    return "unflatten(" + std::to_string(c_) + "x" + std::to_string(l_) + ")";
}

// ---- Stack ----

Tensor Stack::forward(const Tensor& x, Mode mode) {
    Tensor cur = x;
    for (auto& layer : layers) cur = layer->forward(cur, mode);
    return cur;
}

Tensor Stack::backward(const Tensor& gy, bool accumulate_params) {
    Tensor cur = gy;
    for (auto it = layers.rbegin(); it != layers.rend(); ++it)
        cur = (*it)->backward(cur, accumulate_params);
    return cur;
}

std::vector<Param*> Stack::params() const {
    std::vector<Param*> out;
    for (const auto& layer : layers)
        for (Param* p : layer->params()) out.push_back(p);
    return out;
}

std::vector<NormBuffer> Stack::buffers() const {
    std::vector<NormBuffer> out;
    for (const auto& layer : layers)
        for (NormBuffer b : layer->buffers()) out.push_back(std::move(b));
    return out;
}

std::string Stack::describe() const {
    std::string out;
    for (const auto& layer : layers) {
        if (!out.empty()) out += "\n";
        out += "  " + layer->describe();
    }
    return out;
}

}  // namespace cghi
