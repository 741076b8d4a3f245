#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kernels.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace cghi {

// Forward-pass mode. FrozenStats runs batchnorm with statistics computed from
// the current batch but treats them as constants in backward and leaves the
// running averages untouched; used when per-sample gradients are needed.
enum class Mode { Train, Eval, FrozenStats };

enum class Init { ReluUniform, LinearUniform };

class Layer {
  public:
    virtual ~Layer() = default;
    virtual Tensor forward(const Tensor& x, Mode mode) = 0;
    // Returns the input gradient. Parameter gradients are accumulated into
    // Param::grad only when accumulate_params is true, so norm probes can
    // reuse a cached forward without polluting the training gradients.
    virtual Tensor backward(const Tensor& gy, bool accumulate_params) = 0;
    virtual std::vector<Param*> params() { return {}; }
    virtual std::vector<NormBuffer> buffers() { return {}; }
    virtual std::string describe() const = 0;

  protected:
    void require_forward(bool has) const;
};

class Conv1d : public Layer {
  public:
    Conv1d(std::string name, int c_in, int c_out, int k, int stride, int pad, Init init, Rng& rng,
           bool bias = true);
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& gy, bool accumulate_params) override;
    std::vector<Param*> params() override;
    std::string describe() const override;

    Param w, b;

  private:
    int c_in_, c_out_, k_, stride_, pad_;
    bool bias_;
    Tensor x_cache_;
    bool has_forward_ = false;
};

class Deconv1d : public Layer {
  public:
    Deconv1d(std::string name, int c_in, int c_out, int k, int stride, int pad, int out_pad, Init init,
             Rng& rng, bool bias = true);
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& gy, bool accumulate_params) override;
    std::vector<Param*> params() override;
    std::string describe() const override;

    Param w, b;

  private:
    int c_in_, c_out_, k_, stride_, pad_, out_pad_;
    bool bias_;
    Tensor x_cache_;
    bool has_forward_ = false;
};

class Dense : public Layer {
  public:
    Dense(std::string name, int f_in, int f_out, Init init, Rng& rng, bool bias = true);
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& gy, bool accumulate_params) override;
    std::vector<Param*> params() override;
    std::string describe() const override;

    Param w, b;

  private:
    int f_in_, f_out_;
    bool bias_;
    Tensor x_cache_;
    bool has_forward_ = false;
};

// 1-D batch normalization over (N, C, L): per-channel statistics across the
// batch and length dimensions.
class BatchNorm1d : public Layer {
  public:
    explicit BatchNorm1d(std::string name, int channels, double eps = 1e-5, double momentum = 0.1);
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& gy, bool accumulate_params) override;
    std::vector<Param*> params() override;
    std::vector<NormBuffer> buffers() override;
    std::string describe() const override;

    Param gamma, beta;
    std::vector<double> running_mean, running_var;

  private:
    std::string name_;
    int channels_;
    double eps_, momentum_;
    Mode mode_cache_ = Mode::Train;
    Tensor xhat_cache_;
    std::vector<double> std_cache_;
    bool has_forward_ = false;
};

class ReLU : public Layer {
  public:
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& gy, bool accumulate_params) override;
    std::string describe() const override { return "relu"; }

  private:
    Tensor x_cache_;
    bool has_forward_ = false;
};

// (N, C, L) -> (N, C*L)
class Flatten : public Layer {
  public:
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& gy, bool accumulate_params) override;
    std::string describe() const override { return "flatten"; }

  private:
    std::vector<int> in_shape_;
    bool has_forward_ = false;
};

// (N, C*L) -> (N, C, L)
class Unflatten : public Layer {
  public:
    Unflatten(int c, int l) : c_(c), l_(l) {}
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& gy, bool accumulate_params) override;
    std::string describe() const override;

  private:
    int c_, l_;
    bool has_forward_ = false;
};

// Ordered layer stack with forward/backward plumbing.
struct Stack {
    std::vector<std::unique_ptr<Layer>> layers;

    Tensor forward(const Tensor& x, Mode mode);
    Tensor backward(const Tensor& gy, bool accumulate_params);
    std::vector<Param*> params() const;
    std::vector<NormBuffer> buffers() const;
    std::string describe() const;
};

}  // namespace cghi
