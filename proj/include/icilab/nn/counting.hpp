#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "icilab/nn/model.hpp"

namespace icilab::nn {

// Analytic parameter count: weights plus biases of every Dense/Conv2D layer.
inline std::int64_t count_params(const Model& model) {
    std::int64_t n = 0;
    for (const ParamSpec& s : model.param_specs()) n += Tensor<float>::numel(s.shape);
    return n;
}

// Analytic multiply-accumulate count for one application of the model to an
// input of the given shape. One MAC is one multiply-accumulate; bias
// additions, activations, and skip additions are free.
//   Dense on [N, in]:      N * in * out
//   Conv2D on [H, W, cin]: H * W * kh * kw * cin * cout
inline std::int64_t count_macs(const Model& model, std::vector<int> input_shape) {
    std::int64_t macs = 0;
    for (const LayerSpec& l : model.layers) {
        switch (l.kind) {
            case LayerKind::Dense: {
                if (input_shape.size() != 2 || input_shape[1] != l.in)
                    throw std::invalid_argument("count_macs: bad input for dense '" + l.name + "'");
                macs += static_cast<std::int64_t>(input_shape[0]) * l.in * l.out;
                input_shape[1] = l.out;
                break;
            }
            case LayerKind::Conv2D: {
                if (input_shape.size() != 3 || input_shape[2] != l.cin)
                    throw std::invalid_argument("count_macs: bad input for conv '" + l.name + "'");
                macs += static_cast<std::int64_t>(input_shape[0]) * input_shape[1] * l.kh * l.kw *
                        l.cin * l.cout;
                input_shape[2] = l.cout;
                break;
            }
            case LayerKind::ReLU:
            case LayerKind::Add:
                break;
        }
    }
    return macs;
}

}  // namespace icilab::nn
