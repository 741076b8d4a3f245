#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cghi {

// Dense row-major tensor of doubles. Shapes used throughout:
//   (N, C, L) for batched 1-D feature maps, (N, F) for batched vectors.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> values;

    Tensor() = default;

    explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
        values.assign(numel_of(shape), 0.0);
    }

    Tensor(std::vector<int> s, std::vector<double> v) : shape(std::move(s)), values(std::move(v)) {
        if (values.size() != numel_of(shape))
            throw std::invalid_argument("Tensor: data length and shape mismatch");
    }

    static size_t numel_of(const std::vector<int>& s) {
        size_t n = 1;
        for (int d : s) {
            if (d <= 0) throw std::invalid_argument("Tensor: nonpositive dimension");
            n *= static_cast<size_t>(d);
        }
        return n;
    }

    size_t numel() const { return values.size(); }
    int dim(int i) const { return shape.at(static_cast<size_t>(i)); }
    int ndim() const { return static_cast<int>(shape.size()); }

    double& at3(int n, int c, int l) {
        return values[(static_cast<size_t>(n) * shape[1] + c) * shape[2] + l];
    }
    double at3(int n, int c, int l) const {
        return values[(static_cast<size_t>(n) * shape[1] + c) * shape[2] + l];
    }
    double& at2(int n, int f) { return values[static_cast<size_t>(n) * shape[1] + f]; }
    double at2(int n, int f) const { return values[static_cast<size_t>(n) * shape[1] + f]; }

    Tensor reshaped(std::vector<int> s) const {
        if (numel_of(s) != numel()) throw std::invalid_argument("Tensor: reshape changes element count");
        Tensor out;
        out.shape = std::move(s);
        out.values = values;
        return out;
    }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }

    std::string shape_str() const {
        std::string s = "(";
        for (size_t i = 0; i < shape.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(shape[i]);
        }
        return s + ")";
    }
};

// Named trainable parameter with gradient and Adam moment buffers.
struct Param {
    std::string name;
    std::vector<int> shape;
    std::vector<double> value;
    std::vector<double> grad;
    std::vector<double> m;
    std::vector<double> v;

    Param() = default;
    Param(std::string n, std::vector<int> s)
        : name(std::move(n)), shape(std::move(s)) {
        const size_t count = Tensor::numel_of(shape);
        value.assign(count, 0.0);
        grad.assign(count, 0.0);
        m.assign(count, 0.0);
        v.assign(count, 0.0);
    }

    size_t numel() const { return value.size(); }
    void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

// Named non-trainable state (batchnorm running statistics) that must survive
// a save/load round trip. The optimizer never sees these; checkpoints carry
// them alongside the parameters.
struct NormBuffer {
    std::string name;
    std::vector<double>* data = nullptr;
};

}  // namespace cghi
