#include "adam.hpp"

#include <algorithm>
#include <cmath>

namespace cghi {

void Adam::step(const std::vector<Param*>& params) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (Param* p : params) {
        for (size_t i = 0; i < p->numel(); ++i) {
            const double g = p->grad[i];
            p->m[i] = beta1_ * p->m[i] + (1.0 - beta1_) * g;
            p->v[i] = beta2_ * p->v[i] + (1.0 - beta2_) * g * g;
            const double mhat = p->m[i] / bc1;
            const double vhat = p->v[i] / bc2;
            p->value[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

void Adam::reset() { t_ = 0; }

void Adam::reset(const std::vector<Param*>& params) {
    t_ = 0;
    for (Param* p : params) {
        std::fill(p->m.begin(), p->m.end(), 0.0);
        std::fill(p->v.begin(), p->v.end(), 0.0);
    }
}

}  // namespace cghi
