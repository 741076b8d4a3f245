#pragma once

#include <vector>

#include "tensor.hpp"

namespace cghi {

// Adam with bias correction. The caller fills Param::grad (for constrained
// training that is the assembled update, not the raw loss gradient) and then
// calls step() once per batch.
class Adam {
  public:
    explicit Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(const std::vector<Param*>& params);
    void reset();
    // Also clears the moment buffers, for a genuine optimizer restart when
    // the training regime changes mid-run.
    void reset(const std::vector<Param*>& params);

    long steps_taken() const { return t_; }
    double lr() const { return lr_; }
    void set_lr(double lr) { lr_ = lr; }

  private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
};

}  // namespace cghi
