#pragma once

// Shared test oracles. Everything here is deliberately written as directly
// from the definitions as possible and independent of the library's
// computation paths it is used to check.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "icilab/nn/loss.hpp"
#include "icilab/nn/model.hpp"
#include "icilab/ofdm_channel.hpp"

namespace icilab::test {

// Naive unitary DFT straight from the sum formula (local to the tests so the
// oracle does not share the library's transform code).
inline std::vector<cd> oracle_dft(const std::vector<cd>& in, bool inverse) {
    const int n = static_cast<int>(in.size());
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cd> out(n);
    for (int k = 0; k < n; ++k) {
        cd acc(0.0, 0.0);
        for (int m = 0; m < n; ++m) {
            const double ang = sign * 2.0 * M_PI * k * m / n;
            acc += in[m] * cd(std::cos(ang), std::sin(ang));
        }
        out[k] = acc / std::sqrt(static_cast<double>(n));
    }
    return out;
}

// Brute-force time-domain link simulation: build the whole transmitted
// sample stream (CP + symbol per OFDM symbol), run a linear time-varying
// tapped-delay convolution over it with zero initial state, strip the CPs,
// and DFT each symbol. Noiseless.
inline ComplexGrid time_domain_channel_oracle(const ComplexGrid& x, const ChannelRealization& ch,
                                              const SystemConfig& cfg) {
    const int k_num = cfg.subcarriers;
    const int stride = cfg.symbol_stride();
    const int total = cfg.subframe_samples();

    std::vector<cd> stream(total);
    for (int t = 0; t < x.T; ++t) {
        std::vector<cd> sym(x.symbol(t), x.symbol(t) + k_num);
        const std::vector<cd> time = oracle_dft(sym, true);
        for (int i = 0; i < cfg.cp_len; ++i) stream[t * stride + i] = time[k_num - cfg.cp_len + i];
        for (int i = 0; i < k_num; ++i) stream[t * stride + cfg.cp_len + i] = time[i];
    }

    std::vector<cd> faded(total);
    for (int n = 0; n < total; ++n) {
        cd acc(0.0, 0.0);
        for (int j = 0; j < ch.num_taps(); ++j) {
            const int src = n - ch.profile.tap_delays[j];
            if (src >= 0) acc += ch.gains.taps[j][n] * stream[src];
        }
        faded[n] = acc;
    }

    ComplexGrid y(x.K, x.T);
    for (int t = 0; t < x.T; ++t) {
        std::vector<cd> sym(k_num);
        for (int i = 0; i < k_num; ++i) sym[i] = faded[t * stride + cfg.cp_len + i];
        const std::vector<cd> freq = oracle_dft(sym, false);
        for (int k = 0; k < k_num; ++k) y.at(k, t) = freq[k];
    }
    return y;
}

// Central-difference check of parameter gradients: perturbs every element of
// params in place, recomputes the loss through loss_fn, and compares against
// the supplied analytic gradients. Returns the max relative error with the
// usual |a - n| / max(floor, |a| + |n|) normalization.
inline double check_param_gradients(nn::ModelParams<double>& params,
                                    const nn::ModelParams<double>& analytic,
                                    const std::function<double()>& loss_fn, double step = 1e-5,
                                    double floor = 1e-8) {
    double worst = 0.0;
    for (std::size_t ti = 0; ti < params.tensors.size(); ++ti) {
        auto& data = params.tensors[ti].data;
        for (std::size_t j = 0; j < data.size(); ++j) {
            const double orig = data[j];
            data[j] = orig + step;
            const double up = loss_fn();
            data[j] = orig - step;
            const double down = loss_fn();
            data[j] = orig;
            const double numeric = (up - down) / (2.0 * step);
            const double a = analytic.tensors[ti].data[j];
            const double rel = std::abs(a - numeric) / std::max(floor, std::abs(a) + std::abs(numeric));
            worst = std::max(worst, rel);
        }
    }
    return worst;
}

inline double check_input_gradient(nn::Tensor<double>& input, const nn::Tensor<double>& analytic,
                                   const std::function<double()>& loss_fn, double step = 1e-5,
                                   double floor = 1e-8) {
    double worst = 0.0;
    for (std::size_t j = 0; j < input.data.size(); ++j) {
        const double orig = input.data[j];
        input.data[j] = orig + step;
        const double up = loss_fn();
        input.data[j] = orig - step;
        const double down = loss_fn();
        input.data[j] = orig;
        const double numeric = (up - down) / (2.0 * step);
        const double a = analytic.data[j];
        const double rel = std::abs(a - numeric) / std::max(floor, std::abs(a) + std::abs(numeric));
        worst = std::max(worst, rel);
    }
    return worst;
}

}  // namespace icilab::test
