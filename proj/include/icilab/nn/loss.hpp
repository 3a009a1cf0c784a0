#pragma once

#include <stdexcept>

#include "icilab/nn/tensor.hpp"

namespace icilab::nn {

template <class S>
struct LossResult {
    double value = 0.0;
    Tensor<S> grad;
};

// Mean over the leading (sample) dimension of the squared Frobenius distance
// per sample: loss = (1/N) sum_n ||pred_n - target_n||^2. The gradient w.r.t.
// pred is 2 (pred - target) / N.
template <class S>
LossResult<S> mse_loss(const Tensor<S>& pred, const Tensor<S>& target) {
    if (!pred.same_shape(target)) throw std::invalid_argument("mse_loss: shape mismatch");
    if (pred.shape.empty()) throw std::invalid_argument("mse_loss: scalar input");
    const double n = static_cast<double>(pred.shape[0]);
    LossResult<S> res;
    res.grad = Tensor<S>(pred.shape);
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const double d = static_cast<double>(pred.data[i]) - static_cast<double>(target.data[i]);
        acc += d * d;
        res.grad.data[i] = static_cast<S>(2.0 * d / n);
    }
    res.value = acc / n;
    return res;
}

}  // namespace icilab::nn
