#pragma once

#include "icilab/complex_grid.hpp"
#include "icilab/nn/model.hpp"

namespace icilab::net {

// Residual refinement network over the K x T channel image (2 real planes).
// conv1 (5x5, 2->8) -> conv2 (3x3, 8->8) -> relu -> conv3 -> relu -> conv4
// -> inner skip (+ conv1 output) -> conv5 (5x5, 8->2) -> outer skip (+ input).
// Zeroing every conv parameter therefore reduces the network to the identity.
struct CasResNetConfig {
    int features = 8;
    int edge_kernel = 5;  // conv1 / conv5
    int mid_kernel = 3;   // conv2..conv4
    int channels = 2;     // re/im planes
};

nn::Model build_casresnet_model(const CasResNetConfig& cfg = {});

template <class S>
nn::Tensor<S> grid_to_image(const ComplexGrid& g) {
    nn::Tensor<S> img({g.K, g.T, 2});
    for (int k = 0; k < g.K; ++k)
        for (int t = 0; t < g.T; ++t) {
            const cd v = g.at(k, t);
            S* p = &img.data[(static_cast<std::size_t>(k) * g.T + t) * 2];
            p[0] = static_cast<S>(v.real());
            p[1] = static_cast<S>(v.imag());
        }
    return img;
}

template <class S>
ComplexGrid image_to_grid(const nn::Tensor<S>& img) {
    if (img.shape.size() != 3 || img.shape[2] != 2)
        throw std::invalid_argument("image_to_grid: expected [K,T,2] tensor");
    ComplexGrid g(img.shape[0], img.shape[1]);
    for (int k = 0; k < g.K; ++k)
        for (int t = 0; t < g.T; ++t) {
            const S* p = &img.data[(static_cast<std::size_t>(k) * g.T + t) * 2];
            g.at(k, t) = cd(static_cast<double>(p[0]), static_cast<double>(p[1]));
        }
    return g;
}

template <class S>
ComplexGrid casresnet_refine(const ComplexGrid& h_tilde, const nn::Model& model,
                             const nn::ModelParams<S>& params) {
    const nn::Tensor<S> img = grid_to_image<S>(h_tilde);
    return image_to_grid(nn::forward(model, params, img));
}

}  // namespace icilab::net
