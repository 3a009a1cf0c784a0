#include "icilab/net/casresnet.hpp"
#include "icilab/net/prednn.hpp"

namespace icilab::net {

nn::Model build_prednn_model(const PreDnnConfig& cfg) {
    if (cfg.n_ici < 0) throw std::invalid_argument("build_prednn_model: negative n_ici");
    if (cfg.hidden_units < 1) throw std::invalid_argument("build_prednn_model: no hidden units");
    nn::Model m;
    m.layers.push_back(nn::LayerSpec::dense("fc1", cfg.input_width(), cfg.hidden_units));
    m.layers.push_back(nn::LayerSpec::relu());
    m.layers.push_back(nn::LayerSpec::dense("fc2", cfg.hidden_units, 2));
    m.validate();
    return m;
}

std::vector<double> assemble_prednn_input(const ComplexGrid& y, const ComplexGrid& x_hat,
                                          const ComplexGrid& h_hat, int k, int t, int n_ici) {
    if (!y.same_shape(x_hat) || !y.same_shape(h_hat))
        throw std::invalid_argument("assemble_prednn_input: grid shape mismatch");
    if (k < 0 || k >= y.K || t < 0 || t >= y.T)
        throw std::invalid_argument("assemble_prednn_input: position out of grid");
    std::vector<double> row;
    row.reserve(8 * n_ici + 6);
    const auto push = [&row](const cd& v) {
        row.push_back(v.real());
        row.push_back(v.imag());
    };
    for (int d = -n_ici; d <= n_ici; ++d) push(y.at(((k + d) % y.K + y.K) % y.K, t));
    for (int d = -n_ici; d <= n_ici; ++d) push(x_hat.at(((k + d) % y.K + y.K) % y.K, t));
    push(h_hat.at(k, t));
    return row;
}

nn::Model build_casresnet_model(const CasResNetConfig& cfg) {
    const int f = cfg.features, c = cfg.channels;
    const int ke = cfg.edge_kernel, km = cfg.mid_kernel;
    nn::Model m;
    m.layers.push_back(nn::LayerSpec::conv2d("conv1", ke, ke, c, f));    // layer 0
    m.layers.push_back(nn::LayerSpec::conv2d("conv2", km, km, f, f));    // layer 1
    m.layers.push_back(nn::LayerSpec::relu());                           // layer 2
    m.layers.push_back(nn::LayerSpec::conv2d("conv3", km, km, f, f));    // layer 3
    m.layers.push_back(nn::LayerSpec::relu());                           // layer 4
    m.layers.push_back(nn::LayerSpec::conv2d("conv4", km, km, f, f));    // layer 5
    m.layers.push_back(nn::LayerSpec::add("skip_inner", 0));             // + conv1 output
    m.layers.push_back(nn::LayerSpec::conv2d("conv5", ke, ke, f, c));    // layer 7
    m.layers.push_back(nn::LayerSpec::add("skip_outer", nn::kSkipInput));  // + network input
    m.validate();
    return m;
}

}  // namespace icilab::net
