#pragma once

#include "icilab/net/casresnet.hpp"
#include "icilab/net/prednn.hpp"

namespace icilab::net {

// The composed two-stage estimator: subcarrier-wise refinement followed by
// image-domain residual refinement.
struct IciNet {
    PreDnnConfig pre_cfg;
    CasResNetConfig cas_cfg;
    nn::Model pre;
    nn::Model cas;

    explicit IciNet(const PreDnnConfig& pc = {}, const CasResNetConfig& cc = {})
        : pre_cfg(pc), cas_cfg(cc), pre(build_prednn_model(pc)), cas(build_casresnet_model(cc)) {}
};

template <class S>
struct IciNetParams {
    nn::ModelParams<S> pre;
    nn::ModelParams<S> cas;
};

// H_breve = Cas(Pre(Y, X_hat, H_hat)) as one call; bit-identical to running
// prednn_refine and casresnet_refine separately.
template <class S>
ComplexGrid icinet_forward(const ComplexGrid& y, const ComplexGrid& x_hat,
                           const ComplexGrid& h_hat, const IciNet& net,
                           const IciNetParams<S>& params) {
    const nn::Tensor<S> rows = assemble_prednn_inputs<S>(y, x_hat, h_hat, net.pre_cfg.n_ici);
    nn::Tensor<S> h_tilde = nn::forward(net.pre, params.pre, rows);
    // [K*T, 2] rows are k-major, so this is a pure reshape
    h_tilde.shape = {y.K, y.T, 2};
    return image_to_grid(nn::forward(net.cas, params.cas, h_tilde));
}

}  // namespace icilab::net
