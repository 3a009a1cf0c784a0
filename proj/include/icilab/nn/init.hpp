#pragma once

#include <cmath>

#include "icilab/nn/model.hpp"
#include "icilab/rng.hpp"

namespace icilab::nn {

// Glorot-uniform weights (bound sqrt(6 / (fan_in + fan_out))), zero biases.
// Draws happen in double and are cast, so float and double instantiations of
// the same model and seed start from identical values.
template <class S>
ModelParams<S> init_params(const Model& model, std::uint64_t seed) {
    ModelParams<S> params = ModelParams<S>::zeros_like(model);
    Rng rng = Rng::from_stream(seed, 0x1417);
    const auto specs = model.param_specs();
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (specs[i].is_bias) continue;
        const LayerSpec& l = model.layers[specs[i].layer];
        double fan_in, fan_out;
        if (l.kind == LayerKind::Dense) {
            fan_in = l.in;
            fan_out = l.out;
        } else {
            fan_in = static_cast<double>(l.kh) * l.kw * l.cin;
            fan_out = static_cast<double>(l.kh) * l.kw * l.cout;
        }
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        for (S& w : params.tensors[i].data) w = static_cast<S>(rng.uniform(-bound, bound));
    }
    return params;
}

}  // namespace icilab::nn
