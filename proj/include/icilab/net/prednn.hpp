#pragma once

#include "icilab/complex_grid.hpp"
#include "icilab/nn/model.hpp"

namespace icilab::net {

// Subcarrier-wise refinement network: one hidden ReLU layer, shared weights
// at every grid position. The input gathers the received signals and hard
// symbol decisions of the 2*n_ici + 1 subcarriers around the position plus
// the initial channel estimate of the position itself, complex values split
// into (re, im), for 8*n_ici + 6 reals in total.
struct PreDnnConfig {
    int n_ici = 2;
    int hidden_units = 32;

    int input_width() const { return 8 * n_ici + 6; }
};

nn::Model build_prednn_model(const PreDnnConfig& cfg);

// Input vector for one grid position (k, t). Subcarrier neighbors wrap
// cyclically mod K. Order: Y_{k-N..k+N}, X_hat_{k-N..k+N}, H_hat_k, each
// complex value expanded in place as (re, im).
std::vector<double> assemble_prednn_input(const ComplexGrid& y, const ComplexGrid& x_hat,
                                          const ComplexGrid& h_hat, int k, int t, int n_ici);

// Input rows for every grid position, ordered k-major (row k*T + t), so the
// matching [K*T, 2] output reinterprets directly as a [K, T, 2] image.
template <class S>
nn::Tensor<S> assemble_prednn_inputs(const ComplexGrid& y, const ComplexGrid& x_hat,
                                     const ComplexGrid& h_hat, int n_ici);

// Runs the shared network at every position and reassembles the K x T grid
// of refined channel estimates.
template <class S>
ComplexGrid prednn_refine(const ComplexGrid& y, const ComplexGrid& x_hat, const ComplexGrid& h_hat,
                          const nn::Model& model, const nn::ModelParams<S>& params,
                          const PreDnnConfig& cfg);

// --- implementation ---

template <class S>
nn::Tensor<S> assemble_prednn_inputs(const ComplexGrid& y, const ComplexGrid& x_hat,
                                     const ComplexGrid& h_hat, int n_ici) {
    if (!y.same_shape(x_hat) || !y.same_shape(h_hat))
        throw std::invalid_argument("assemble_prednn_inputs: grid shape mismatch");
    const int k_num = y.K, t_num = y.T;
    const int width = 8 * n_ici + 6;
    nn::Tensor<S> rows({k_num * t_num, width});
    S* out = rows.data.data();
    for (int k = 0; k < k_num; ++k) {
        for (int t = 0; t < t_num; ++t) {
            S* r = out + (static_cast<std::size_t>(k) * t_num + t) * width;
            int w = 0;
            for (int d = -n_ici; d <= n_ici; ++d) {
                const int kk = ((k + d) % k_num + k_num) % k_num;
                const cd v = y.at(kk, t);
                r[w++] = static_cast<S>(v.real());
                r[w++] = static_cast<S>(v.imag());
            }
            for (int d = -n_ici; d <= n_ici; ++d) {
                const int kk = ((k + d) % k_num + k_num) % k_num;
                const cd v = x_hat.at(kk, t);
                r[w++] = static_cast<S>(v.real());
                r[w++] = static_cast<S>(v.imag());
            }
            const cd h = h_hat.at(k, t);
            r[w++] = static_cast<S>(h.real());
            r[w++] = static_cast<S>(h.imag());
        }
    }
    return rows;
}

template <class S>
ComplexGrid prednn_refine(const ComplexGrid& y, const ComplexGrid& x_hat, const ComplexGrid& h_hat,
                          const nn::Model& model, const nn::ModelParams<S>& params,
                          const PreDnnConfig& cfg) {
    const nn::Tensor<S> rows = assemble_prednn_inputs<S>(y, x_hat, h_hat, cfg.n_ici);
    const nn::Tensor<S> out = nn::forward(model, params, rows);
    ComplexGrid h(y.K, y.T);
    for (int k = 0; k < y.K; ++k)
        for (int t = 0; t < y.T; ++t) {
            const S* v = &out.data[(static_cast<std::size_t>(k) * y.T + t) * 2];
            h.at(k, t) = cd(static_cast<double>(v[0]), static_cast<double>(v[1]));
        }
    return h;
}

}  // namespace icilab::net
