#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace icilab::nn {

// Dense row-major N-D array of real values with an optional gradient buffer
// of the same shape.
template <class S>
struct Tensor {
    std::vector<int> shape;
    std::vector<S> data;
    std::vector<S> grad;

    Tensor() = default;
    explicit Tensor(std::vector<int> shp)
        : shape(std::move(shp)), data(static_cast<std::size_t>(numel(shape)), S(0)) {}

    static std::int64_t numel(const std::vector<int>& shp) {
        std::int64_t n = 1;
        for (int d : shp) {
            if (d <= 0) throw std::invalid_argument("Tensor: non-positive dimension");
            n *= d;
        }
        return n;
    }

    std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }

    bool has_grad() const { return !grad.empty(); }
    void ensure_grad() {
        if (grad.size() != data.size()) grad.assign(data.size(), S(0));
    }
    void zero_grad() {
        if (has_grad()) std::fill(grad.begin(), grad.end(), S(0));
    }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

template <class S>
std::string shape_str(const Tensor<S>& t) {
    std::string s = "[";
    for (std::size_t i = 0; i < t.shape.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(t.shape[i]);
    }
    return s + "]";
}

}  // namespace icilab::nn
